#include "alc/matrix.hpp"

#include <cmath>
#include <string>

#include "alc/errors.hpp"

namespace alc {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw InvalidInput("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                       std::to_string(rows * cols));
  }
}

Matrix Matrix::column(std::span<const double> values) {
  return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

void Dataset::validate() const {
  if (x.rows() != y.size()) {
    throw InvalidInput("dataset has " + std::to_string(x.rows()) + " regressor rows but " +
                       std::to_string(y.size()) + " outcomes");
  }
  if (y.size() < 2) throw InvalidInput("dataset needs at least 2 observations");
  if (x.cols() < 1) throw InvalidInput("dataset needs at least one regressor");
  for (double v : x.data()) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite regressor value");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite outcome value");
  }
}

}  // namespace alc
