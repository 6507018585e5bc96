#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "parasplit/linalg.hpp"

using namespace parasplit;

namespace {

SparseMatrix identity(int n) {
  std::vector<Triplet> entries;
  for (int i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
  return SparseMatrix::from_triplets(n, n, std::move(entries));
}

// Dense random SPD matrix R^T R + I with a matching sparse copy.
std::pair<DenseMatrix, SparseMatrix> random_spd(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  DenseMatrix r(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) r(i, j) = unit(rng);
  }
  DenseMatrix a(n, n);
  std::vector<Triplet> entries;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = i == j ? 1.0 : 0.0;
      for (int k = 0; k < n; ++k) s += r(k, i) * r(k, j);
      a(i, j) = s;
      entries.push_back({i, j, s});
    }
  }
  return {a, SparseMatrix::from_triplets(n, n, std::move(entries))};
}

}  // namespace

TEST_CASE("triplets with duplicates are summed into CSR") {
  const SparseMatrix m = SparseMatrix::from_triplets(2, 3, {{0, 1, 2.0}, {1, 2, 1.0}, {0, 1, 0.5}, {1, 0, -1.0}});
  CHECK(m.nnz() == 3);
  CHECK(m.value_at(0, 1) == 2.5);
  CHECK(m.value_at(1, 0) == -1.0);
  CHECK(m.value_at(0, 0) == 0.0);
  const Vector y = m.multiply({1.0, 2.0, 3.0});
  CHECK(y[0] == doctest::Approx(5.0));
  CHECK(y[1] == doctest::Approx(2.0));
  CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{0, 2, 1.0}}), std::invalid_argument);
}

TEST_CASE("add_scaled combines matrices entrywise") {
  const SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, 2.0}});
  const SparseMatrix b = SparseMatrix::from_triplets(2, 2, {{0, 0, 3.0}, {0, 1, 1.0}});
  const double coeffs[] = {2.0, -1.0};
  const SparseMatrix* terms[] = {&a, &b};
  const SparseMatrix c = add_scaled(coeffs, terms);
  CHECK(c.value_at(0, 0) == doctest::Approx(-1.0));
  CHECK(c.value_at(0, 1) == doctest::Approx(-1.0));
  CHECK(c.value_at(1, 1) == doctest::Approx(4.0));
}

TEST_CASE("cg on the identity solves in one iteration") {
  const SparseMatrix a = identity(5);
  const Vector b = {0.0, 0.0, 1.0, 0.0, 0.0};
  const CgResult res = cg_solve(a, b);
  CHECK(res.iterations == 1);
  for (int i = 0; i < 5; ++i) CHECK(res.x[i] == doctest::Approx(b[i]).epsilon(1e-14));
}

TEST_CASE("cg solves a diagonal system exactly") {
  const SparseMatrix a = SparseMatrix::from_triplets(3, 3, {{0, 0, 1.0}, {1, 1, 2.0}, {2, 2, 4.0}});
  const CgResult res = cg_solve(a, {1.0, 2.0, 4.0});
  for (int i = 0; i < 3; ++i) CHECK(res.x[i] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("cg matches the dense oracle on a random SPD system") {
  const auto [dense, sparse] = random_spd(30, 1234u);
  std::mt19937 rng(99u);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vector b(30);
  for (double& v : b) v = unit(rng);

  const Vector x_dense = dense_solve(dense, b);
  const CgResult res = cg_solve(sparse, b, 1e-14);
  double scale = 0.0;
  for (double v : x_dense) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < 30; ++i) CHECK(std::abs(res.x[i] - x_dense[i]) <= 1e-10 * scale);
}

TEST_CASE("cg property: agreement with the dense oracle across sizes") {
  for (const int n : {8, 21, 40}) {
    CAPTURE(n);
    const auto [dense, sparse] = random_spd(n, 7u + static_cast<unsigned>(n));
    Vector b(n, 1.0);
    b[0] = -2.0;
    const Vector x_dense = dense_solve(dense, b);
    const CgResult res = cg_solve(sparse, b, 1e-14);
    double scale = 0.0;
    for (double v : x_dense) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < n; ++i) CHECK(std::abs(res.x[i] - x_dense[i]) <= 1e-9 * scale);
  }
}

TEST_CASE("cg failure modes") {
  SUBCASE("non-positive diagonal is rejected up front") {
    const SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {1, 1, -1.0}});
    CHECK_THROWS_AS(cg_solve(a, {1.0, 1.0}), std::invalid_argument);
  }
  SUBCASE("indefinite matrix with positive diagonal breaks down") {
    const SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 1.0}});
    CHECK_THROWS_AS(cg_solve(a, {1.0, 0.0}), CgFailure);
  }
  SUBCASE("iteration cap failure carries the last residual") {
    const SparseMatrix a = SparseMatrix::from_triplets(2, 2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 2.0}});
    try {
      cg_solve(a, {1.0, 2.0}, 1e-12, 1);
      FAIL("expected CgFailure");
    } catch (const CgFailure& f) {
      CHECK(f.iterations == 1);
      CHECK(f.relative_residual > 0.0);
    }
  }
}

TEST_CASE("warm start that is already converged costs zero iterations") {
  const auto [dense, sparse] = random_spd(12, 5u);
  Vector b(12, 0.5);
  const Vector x = dense_solve(dense, b);
  const CgResult res = cg_solve(sparse, b, 1e-9, 0, &x);
  CHECK(res.iterations == 0);
}

TEST_CASE("dense_solve handles SPD, indefinite saddle, and singular systems") {
  SUBCASE("identity") {
    DenseMatrix a(3, 3);
    for (int i = 0; i < 3; ++i) a(i, i) = 1.0;
    const Vector x = dense_solve(a, {3.0, -1.0, 2.0});
    CHECK(x[0] == doctest::Approx(3.0));
    CHECK(x[1] == doctest::Approx(-1.0));
    CHECK(x[2] == doctest::Approx(2.0));
  }
  SUBCASE("small SPD") {
    DenseMatrix a(2, 2);
    a(0, 0) = 2.0;
    a(0, 1) = a(1, 0) = 1.0;
    a(1, 1) = 2.0;
    const Vector x = dense_solve(a, {3.0, 3.0});
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("symmetric indefinite saddle system") {
    // [2 0 1; 0 2 -1; 1 -1 0] x = (1, 1, 0) has solution (0.5, 0.5, 0).
    DenseMatrix a(3, 3);
    a(0, 0) = 2.0;
    a(1, 1) = 2.0;
    a(0, 2) = a(2, 0) = 1.0;
    a(1, 2) = a(2, 1) = -1.0;
    const Vector x = dense_solve(a, {1.0, 1.0, 0.0});
    CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(x[2] == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("singular") {
    DenseMatrix a(2, 2);
    a(0, 0) = a(0, 1) = a(1, 0) = a(1, 1) = 1.0;
    CHECK_THROWS_AS(dense_solve(a, {1.0, 2.0}), std::runtime_error);
  }
}

TEST_CASE("symmetry probe") {
  const SparseMatrix sym = SparseMatrix::from_triplets(2, 2, {{0, 1, 3.0}, {1, 0, 3.0}});
  CHECK(sym.max_asymmetry() == 0.0);
  const SparseMatrix skew = SparseMatrix::from_triplets(2, 2, {{0, 1, 3.0}, {1, 0, 2.5}});
  CHECK(skew.max_asymmetry() == doctest::Approx(0.5));
}
