#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sgbench {

// Dense row-major 64-bit real matrix; the only tensor type in the project.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;  // rows * cols, row-major

  DenseMatrix() = default;
  DenseMatrix(int r, int c, double fill = 0.0);

  double& operator()(int i, int j) {
    return data[static_cast<std::size_t>(i) * cols + j];
  }
  double operator()(int i, int j) const {
    return data[static_cast<std::size_t>(i) * cols + j];
  }

  int size() const { return rows * cols; }
  bool same_shape(const DenseMatrix& other) const {
    return rows == other.rows && cols == other.cols;
  }
  void fill(double v);
  std::string shape() const;  // "RxC"
};

// C = A * B; throws std::invalid_argument on inner-dimension mismatch.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix transpose(const DenseMatrix& a);

// y += alpha * x (shapes must match).
void axpy(double alpha, const DenseMatrix& x, DenseMatrix& y);

bool all_finite(const DenseMatrix& a);

// Throws std::invalid_argument naming both shapes if a and b differ.
void require_same_shape(const DenseMatrix& a, const DenseMatrix& b,
                        const char* where);

}  // namespace sgbench
