#include "parasplit/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cstddef>
#include <string>

namespace parasplit {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> entries) {
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw std::invalid_argument("triplet outside matrix shape");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(rows + 1, 0);
  m.col_idx_.reserve(entries.size());
  m.values_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < entries.size() && entries[j].row == entries[i].row && entries[j].col == entries[i].col) {
      sum += entries[j].value;
      ++j;
    }
    m.col_idx_.push_back(entries[i].col);
    m.values_.push_back(sum);
    ++m.row_ptr_[entries[i].row + 1];
    i = j;
  }
  for (int r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_) {
    throw std::invalid_argument("sparse multiply: size mismatch");
  }
  const int* rp = row_ptr_.data();
  const int* ci = col_idx_.data();
  const double* v = values_.data();
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int k = rp[i]; k < rp[i + 1]; ++k) s += v[k] * x[ci[k]];
    y[i] = s;
  }
}

Vector SparseMatrix::multiply(const Vector& x) const {
  Vector y(rows_);
  multiply(x, y);
  return y;
}

Vector SparseMatrix::diagonal() const {
  Vector d(std::min(rows_, cols_), 0.0);
  for_each([&](int i, int j, double v) {
    if (i == j) d[i] = v;
  });
  return d;
}

double SparseMatrix::value_at(int row, int col) const {
  for (int k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k) {
    if (col_idx_[k] == col) return values_[k];
  }
  return 0.0;
}

double SparseMatrix::max_asymmetry() const {
  double worst = 0.0;
  for_each([&](int i, int j, double v) { worst = std::max(worst, std::abs(v - value_at(j, i))); });
  return worst;
}

SparseMatrix add_scaled(std::span<const double> coefficients, std::span<const SparseMatrix* const> terms) {
  if (coefficients.size() != terms.size() || terms.empty()) {
    throw std::invalid_argument("add_scaled: one coefficient per term required");
  }
  const int rows = terms[0]->rows();
  const int cols = terms[0]->cols();
  std::vector<Triplet> entries;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    if (terms[t]->rows() != rows || terms[t]->cols() != cols) {
      throw std::invalid_argument("add_scaled: shape mismatch");
    }
    const double c = coefficients[t];
    terms[t]->for_each([&](int i, int j, double v) { entries.push_back({i, j, c * v}); });
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(entries));
}

DenseMatrix DenseMatrix::from_sparse(const SparseMatrix& a) {
  DenseMatrix d(a.rows(), a.cols());
  a.for_each([&](int i, int j, double v) { d(i, j) = v; });
  return d;
}

Vector dense_solve(const DenseMatrix& a, const Vector& b) {
  const int n = a.rows();
  if (a.cols() != n || static_cast<int>(b.size()) != n) {
    throw std::invalid_argument("dense_solve: square system required");
  }
  if (n == 0) return {};

  DenseMatrix factors = a;
  Vector x = b;
  std::vector<lapack_int> ipiv(n);
  const lapack_int info = LAPACKE_dsysv(LAPACK_ROW_MAJOR, 'L', n, 1, factors.data(), n, ipiv.data(), x.data(), 1);
  if (info != 0) {
    throw std::runtime_error("dense_solve: factorization failed (singular block at " + std::to_string(info) + ")");
  }

  // Residual guard: the caller treats this routine as an oracle.
  double norm_a = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += std::abs(a(i, j));
    norm_a = std::max(norm_a, row);
  }
  Vector residual(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += a(i, j) * x[j];
    residual[i] = s - b[i];
  }
  const double scale = norm_a * norm2(x) + norm2(b);
  if (scale > 0.0 && norm2(residual) > 1e-10 * scale) {
    throw std::runtime_error("dense_solve: residual check failed");
  }
  return x;
}

CgResult cg_solve(const SparseMatrix& a, const Vector& b, double tol, int max_iterations,
                  const Vector* initial_guess) {
  const int n = a.rows();
  if (a.cols() != n || static_cast<int>(b.size()) != n) {
    throw std::invalid_argument("cg_solve: square system required");
  }
  if (max_iterations <= 0) max_iterations = 20 * n;

  Vector inv_diag = a.diagonal();
  for (double& d : inv_diag) {
    if (d <= 0.0) throw std::invalid_argument("cg_solve: non-positive diagonal, matrix is not SPD");
    d = 1.0 / d;
  }

  const double norm_b = norm2(b);
  CgResult result;
  result.x.assign(n, 0.0);
  if (norm_b == 0.0) return result;

  if (initial_guess != nullptr) {
    if (initial_guess->size() != b.size()) throw std::invalid_argument("cg_solve: bad initial guess size");
    result.x = *initial_guess;
  }

  Vector r(n), z(n), p(n), q(n);
  a.multiply(result.x, r);
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];

  double res_norm = norm2(r);
  if (res_norm <= tol * norm_b) {
    result.relative_residual = res_norm / norm_b;
    return result;
  }

  for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rho = dot(r, z);

  for (int it = 1; it <= max_iterations; ++it) {
    a.multiply(p, q);
    const double pq = dot(p, q);
    if (pq <= 0.0) {
      throw CgFailure("cg_solve: breakdown, matrix is not SPD", it, res_norm / norm_b);
    }
    const double alpha = rho / pq;
    for (int i = 0; i < n; ++i) {
      result.x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    res_norm = norm2(r);
    result.iterations = it;
    if (res_norm <= tol * norm_b) {
      result.relative_residual = res_norm / norm_b;
      return result;
    }
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rho_next = dot(r, z);
    const double beta = rho_next / rho;
    rho = rho_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw CgFailure("cg_solve: no convergence within iteration cap", max_iterations, res_norm / norm_b);
}

}  // namespace parasplit
