#include "sgbench/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace sgbench {

DenseMatrix::DenseMatrix(int r, int c, double fill_value)
    : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill_value) {
  if (r < 0 || c < 0) throw std::invalid_argument("negative matrix dimension");
}

void DenseMatrix::fill(double v) {
  for (auto& x : data) x = v;
}

std::string DenseMatrix::shape() const {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.rows) {
    throw std::invalid_argument("matmul shape mismatch: " + a.shape() + " * " +
                                b.shape());
  }
  DenseMatrix c(a.rows, b.cols);
  // ikj order keeps the inner loop contiguous in both b and c.
  for (int i = 0; i < a.rows; ++i) {
    const double* arow = &a.data[static_cast<std::size_t>(i) * a.cols];
    double* crow = &c.data[static_cast<std::size_t>(i) * c.cols];
    for (int k = 0; k < a.cols; ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const double* brow = &b.data[static_cast<std::size_t>(k) * b.cols];
      for (int j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  return t;
}

void axpy(double alpha, const DenseMatrix& x, DenseMatrix& y) {
  require_same_shape(x, y, "axpy");
  for (int i = 0; i < x.size(); ++i) y.data[i] += alpha * x.data[i];
}

bool all_finite(const DenseMatrix& a) {
  for (double v : a.data)
    if (!std::isfinite(v)) return false;
  return true;
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b,
                        const char* where) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(where) + " shape mismatch: " +
                                a.shape() + " vs " + b.shape());
  }
}

}  // namespace sgbench
