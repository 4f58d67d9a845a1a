#include "alc/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "alc/errors.hpp"

namespace alc::csv {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                         : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (auto& f : fields) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
  }
  return fields;
}

bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  return false;
}

// Parses the header and returns q, checking the x_1..x_q prefix and the trailing names.
std::size_t read_header(std::istream& in, std::initializer_list<std::string_view> tail) {
  std::string line;
  if (!next_line(in, line)) throw IoError("CSV is empty");
  // Tolerate a UTF-8 byte order mark.
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto fields = split(line);
  if (fields.size() < tail.size() + 1) throw IoError("CSV header has too few columns: " + line);
  const std::size_t q = fields.size() - tail.size();
  for (std::size_t j = 0; j < q; ++j) {
    if (fields[j] != "x_" + std::to_string(j + 1)) {
      throw IoError("CSV header column " + std::to_string(j + 1) + " should be x_" +
                    std::to_string(j + 1) + ", found '" + std::string(fields[j]) + "'");
    }
  }
  std::size_t k = q;
  for (std::string_view name : tail) {
    if (fields[k] != name) {
      throw IoError("CSV header column " + std::to_string(k + 1) + " should be " +
                    std::string(name) + ", found '" + std::string(fields[k]) + "'");
    }
    ++k;
  }
  return q;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return in;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  if (text == "nan" || text == "NaN") return std::numeric_limits<double>::quiet_NaN();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw IoError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

void write_dataset(std::ostream& out, const Dataset& data) {
  for (std::size_t j = 0; j < data.q(); ++j) out << "x_" << j + 1 << ',';
  out << "y\n";
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (std::size_t j = 0; j < data.q(); ++j) out << format_double(data.x(i, j)) << ',';
    out << format_double(data.y[i]) << '\n';
  }
}

Dataset read_dataset(std::istream& in) {
  const std::size_t q = read_header(in, {"y"});
  std::vector<double> xs;
  Dataset d;
  std::string line;
  std::size_t row = 1;
  while (next_line(in, line)) {
    ++row;
    const auto fields = split(line);
    if (fields.size() != q + 1) {
      throw IoError("CSV row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                    " fields, expected " + std::to_string(q + 1));
    }
    for (std::size_t j = 0; j < q; ++j) xs.push_back(parse_double(fields[j]));
    d.y.push_back(parse_double(fields[q]));
  }
  d.x = Matrix(d.y.size(), q, std::move(xs));
  return d;
}

Matrix read_points(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw IoError("CSV is empty");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto header = split(line);
  std::size_t q = 0;
  while (q < header.size() && header[q] == "x_" + std::to_string(q + 1)) ++q;
  if (q == 0) throw IoError("CSV header must start with x_1");
  std::vector<double> xs;
  std::size_t rows = 0;
  while (next_line(in, line)) {
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw IoError("CSV row " + std::to_string(rows + 2) + " has " +
                    std::to_string(fields.size()) + " fields, expected " +
                    std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < q; ++j) xs.push_back(parse_double(fields[j]));
    ++rows;
  }
  return Matrix(rows, q, std::move(xs));
}

void write_fit(std::ostream& out, const FitResult& fit) {
  const std::size_t q = fit.targets.cols();
  for (std::size_t j = 0; j < q; ++j) out << "x_" << j + 1 << ',';
  out << "ghat,undefined\n";
  for (std::size_t t = 0; t < fit.size(); ++t) {
    for (std::size_t j = 0; j < q; ++j) out << format_double(fit.targets(t, j)) << ',';
    if (!fit.undefined[t]) out << format_double(fit.estimates[t]);
    out << ',' << (fit.undefined[t] ? 1 : 0) << '\n';
  }
}

FitResult read_fit(std::istream& in) {
  const std::size_t q = read_header(in, {"ghat", "undefined"});
  std::vector<double> xs;
  FitResult r;
  std::string line;
  std::size_t row = 1;
  while (next_line(in, line)) {
    ++row;
    const auto fields = split(line);
    if (fields.size() != q + 2) {
      throw IoError("CSV row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                    " fields, expected " + std::to_string(q + 2));
    }
    for (std::size_t j = 0; j < q; ++j) xs.push_back(parse_double(fields[j]));
    const bool undefined = fields[q + 1] == "1";
    if (!undefined && fields[q + 1] != "0") throw IoError("undefined flag must be 0 or 1");
    r.undefined.push_back(undefined ? 1 : 0);
    r.estimates.push_back(undefined ? std::numeric_limits<double>::quiet_NaN()
                                    : parse_double(fields[q]));
  }
  r.targets = Matrix(r.estimates.size(), q, std::move(xs));
  return r;
}

void write_mc_table(std::ostream& out, const McTable& table) {
  out << "sigma,n,estimator,mean_mese,sd_mese,failures\n";
  for (const McRow& r : table.rows) {
    out << format_double(r.sigma) << ',' << r.n << ',' << estimator_name(r.estimator) << ','
        << format_double(r.mean_mese) << ',' << format_double(r.sd_mese) << ',' << r.failures
        << '\n';
  }
}

void write_mc_replicates(std::ostream& out, const McTable& table) {
  out << "sigma,n,estimator,replicate,mese\n";
  for (const McReplicate& r : table.replicates) {
    out << format_double(r.sigma) << ',' << r.n << ',' << estimator_name(r.estimator) << ','
        << r.replicate << ',';
    if (!std::isnan(r.mese)) out << format_double(r.mese);
    out << '\n';
  }
}

void write_mc_wide(std::ostream& out, const McTable& table, bool standard_deviation) {
  std::vector<double> sigmas;
  std::vector<std::pair<std::size_t, EstimatorChoice>> columns;
  for (const McRow& r : table.rows) {
    if (std::find(sigmas.begin(), sigmas.end(), r.sigma) == sigmas.end()) sigmas.push_back(r.sigma);
    const std::pair key{r.n, r.estimator};
    if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
  }
  out << "sigma";
  for (const auto& [n, e] : columns) out << ",n" << n << '_' << estimator_name(e);
  out << '\n';
  for (double s : sigmas) {
    out << format_double(s);
    for (const auto& [n, e] : columns) {
      const McRow& r = table.at(s, n, e);
      out << ',' << format_double(standard_deviation ? r.sd_mese : r.mean_mese);
    }
    out << '\n';
  }
}

void write_mc_text(std::ostream& out, const McTable& table, bool standard_deviation) {
  std::vector<double> sigmas;
  std::vector<std::size_t> ns;
  std::vector<EstimatorChoice> ests;
  for (const McRow& r : table.rows) {
    if (std::find(sigmas.begin(), sigmas.end(), r.sigma) == sigmas.end()) sigmas.push_back(r.sigma);
    if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
    if (std::find(ests.begin(), ests.end(), r.estimator) == ests.end()) ests.push_back(r.estimator);
  }
  constexpr int w = 10;
  out << std::setw(6) << "";
  for (std::size_t n : ns) {
    std::ostringstream label;
    label << "n=" << n;
    out << " |" << std::setw(static_cast<int>(w * ests.size())) << std::left << (" " + label.str())
        << std::right;
  }
  out << '\n' << std::setw(6) << "sigma";
  for (std::size_t k = 0; k < ns.size(); ++k) {
    out << " |";
    for (EstimatorChoice e : ests) {
      std::string name(estimator_name(e));
      for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      out << std::setw(w) << name;
    }
  }
  out << '\n';
  for (double s : sigmas) {
    out << std::setw(6) << format_double(s);
    for (std::size_t n : ns) {
      out << " |";
      for (EstimatorChoice e : ests) {
        const McRow& r = table.at(s, n, e);
        std::ostringstream cell;
        cell << std::fixed << std::setprecision(5) << (standard_deviation ? r.sd_mese : r.mean_mese);
        out << std::setw(w) << cell.str();
      }
    }
    out << '\n';
  }
}

Dataset read_dataset_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_dataset(in);
}

void write_dataset_file(const std::filesystem::path& path, const Dataset& data) {
  auto out = open_out(path);
  write_dataset(out, data);
  if (!out) throw IoError("failed writing " + path.string());
}

Matrix read_points_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_points(in);
}

FitResult read_fit_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_fit(in);
}

void write_fit_file(const std::filesystem::path& path, const FitResult& fit) {
  auto out = open_out(path);
  write_fit(out, fit);
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace alc::csv
