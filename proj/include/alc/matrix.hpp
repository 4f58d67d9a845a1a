#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace alc {

/// Dense row-major matrix of doubles. Rows are points, columns coordinates.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  /// Column vector from a list of 1D points.
  static Matrix column(std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Fixed-design regression sample: n rows of q regressors and n outcomes.
struct Dataset {
  Matrix x;
  std::vector<double> y;

  std::size_t n() const { return y.size(); }
  std::size_t q() const { return x.cols(); }

  /// Throws InvalidInput unless n >= 2, q >= 1, shapes agree and all entries are finite.
  void validate() const;
};

}  // namespace alc
