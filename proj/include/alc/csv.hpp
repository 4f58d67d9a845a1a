#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "alc/estimators.hpp"
#include "alc/simulation.hpp"

namespace alc::csv {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

/// Header x_1..x_q,y then one row per observation.
void write_dataset(std::ostream& out, const Dataset& data);
Dataset read_dataset(std::istream& in);

/// Leading x_1..x_q columns of any such CSV; trailing columns are ignored.
Matrix read_points(std::istream& in);

/// Header x_1..x_q,ghat,undefined. Undefined rows have an empty ghat field and undefined = 1.
void write_fit(std::ostream& out, const FitResult& fit);
FitResult read_fit(std::istream& in);

/// Columns sigma,n,estimator,mean_mese,sd_mese,failures.
void write_mc_table(std::ostream& out, const McTable& table);
/// Columns sigma,n,estimator,replicate,mese (empty mese for failed replicates).
void write_mc_replicates(std::ostream& out, const McTable& table);
/// One row per sigma and one column per (n, estimator), named n<n>_<estimator>.
void write_mc_wide(std::ostream& out, const McTable& table, bool standard_deviation);
/// Aligned text with one row per sigma and an (n, estimator) column block per n.
void write_mc_text(std::ostream& out, const McTable& table, bool standard_deviation);

/// File helpers; throw IoError when the file cannot be opened.
Dataset read_dataset_file(const std::filesystem::path& path);
void write_dataset_file(const std::filesystem::path& path, const Dataset& data);
Matrix read_points_file(const std::filesystem::path& path);
FitResult read_fit_file(const std::filesystem::path& path);
void write_fit_file(const std::filesystem::path& path, const FitResult& fit);

}  // namespace alc::csv
