#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace parasplit {

using Vector = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix. Duplicate triplets are summed on build.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(values_.size()); }

  void multiply(std::span<const double> x, std::span<double> y) const;  // y = A x
  Vector multiply(const Vector& x) const;

  Vector diagonal() const;
  double value_at(int row, int col) const;  // 0 for structural zeros

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (int i = 0; i < rows_; ++i) {
      for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) fn(i, col_idx_[k], values_[k]);
    }
  }

  /// Largest |A_ij - A_ji|, for symmetry checks.
  double max_asymmetry() const;

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// Scaled sum of sparse matrices with identical shape.
SparseMatrix add_scaled(std::span<const double> coefficients, std::span<const SparseMatrix* const> terms);

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}
  static DenseMatrix from_sparse(const SparseMatrix& a);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Direct solve for symmetric (possibly indefinite) systems, used as the small
/// -system oracle and for saddle-point steps. Throws on singular systems and
/// verifies the residual of the computed solution.
Vector dense_solve(const DenseMatrix& a, const Vector& b);

struct CgResult {
  Vector x;
  int iterations = 0;
  double relative_residual = 0.0;
};

struct CgFailure : std::runtime_error {
  CgFailure(const std::string& what, int iterations, double relative_residual)
      : std::runtime_error(what), iterations(iterations), relative_residual(relative_residual) {}
  int iterations;
  double relative_residual;
};

/// Jacobi-preconditioned conjugate gradients for SPD systems. Deterministic:
/// fixed iteration order, no randomization. `max_iterations` 0 means 20 * n.
/// Non-convergence and breakdown throw CgFailure with the last residual.
CgResult cg_solve(const SparseMatrix& a, const Vector& b, double tol = 1e-12,
                  int max_iterations = 0, const Vector* initial_guess = nullptr);

}  // namespace parasplit
