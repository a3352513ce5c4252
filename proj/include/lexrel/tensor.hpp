#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lexrel {

using Vector = std::vector<double>;

// Dense row-major matrix. Also used for bias vectors (cols == 1).
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  std::size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }
  void zero();

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

// out = m * v (+ out when accumulate).
void matvec(const Matrix& m, std::span<const double> v, std::span<double> out, bool accumulate = false);
// out += m^T * v
void matvec_transposed_acc(const Matrix& m, std::span<const double> v, std::span<double> out);
// m += a * b^T
void outer_acc(Matrix& m, std::span<const double> a, std::span<const double> b);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace lexrel
