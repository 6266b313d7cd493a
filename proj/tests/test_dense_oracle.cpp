#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fiedcmg/dense_oracle.hpp"
#include "fiedcmg/gcmg.hpp"
#include "support/graphs.hpp"

using namespace fiedcmg;
using namespace fiedcmg::testing;

namespace {

DenseMatrix from_rows(const std::vector<std::vector<double>>& rows) {
  DenseMatrix A(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) A(i, j) = rows[i][j];
  return A;
}

void check_decomposition(const DenseMatrix& A, const EigenDecomposition& d) {
  const std::size_t n = A.size();
  const double inf = A.inf_norm();
  for (std::size_t k = 0; k + 1 < n; ++k) CHECK(d.eigenvalues[k] <= d.eigenvalues[k + 1]);
  for (std::size_t k = 0; k < n; ++k) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double av = 0.0;
      for (std::size_t j = 0; j < n; ++j) av += A(i, j) * d.vectors[k][j];
      r2 += (av - d.eigenvalues[k] * d.vectors[k][i]) * (av - d.eigenvalues[k] * d.vectors[k][i]);
    }
    CHECK(std::sqrt(r2) <= 1e-10 * std::max(inf, 1.0));
    for (std::size_t l = k; l < n; ++l) {
      const double ip = dot(d.vectors[k], d.vectors[l]);
      CHECK(std::abs(ip - (k == l ? 1.0 : 0.0)) <= 1e-10);
    }
  }
  // V diag(lambda) V^T reproduces A
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += d.vectors[k][i] * d.eigenvalues[k] * d.vectors[k][j];
      err += (s - A(i, j)) * (s - A(i, j));
    }
  }
  CHECK(std::sqrt(err) <= 1e-9 * A.frobenius_norm());
}

}  // namespace

TEST_CASE("jacobi examples") {
  SUBCASE("K2") {
    const auto d = jacobi_eigen(densify(path_graph(2)));
    CHECK(std::abs(d.eigenvalues[0]) < 1e-15);
    CHECK(d.eigenvalues[1] == doctest::Approx(2.0));
    CHECK(std::abs(std::abs(d.vectors[0][0]) - 1 / std::numbers::sqrt2) < 1e-15);
    CHECK(d.vectors[0][0] == doctest::Approx(d.vectors[0][1]));
    CHECK(d.vectors[1][0] == doctest::Approx(-d.vectors[1][1]));
  }
  SUBCASE("already diagonal") {
    const auto d = jacobi_eigen(from_rows({{3, 0, 0}, {0, 1, 0}, {0, 0, 2}}));
    CHECK(d.eigenvalues == Vector{1, 2, 3});
    CHECK(d.vectors[0] == Vector{0, 1, 0});
    CHECK(d.vectors[1] == Vector{0, 0, 1});
    CHECK(d.vectors[2] == Vector{1, 0, 0});
  }
  SUBCASE("path of three") {
    const auto d = jacobi_eigen(densify(path_graph(3)));
    CHECK(std::abs(d.eigenvalues[0]) < 1e-14);
    CHECK(d.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(jacobi_eigen(from_rows({{1, 2}, {0, 1}})), Error);
  CHECK_THROWS_AS(jacobi_eigen(DenseMatrix(kOracleMaxSize + 1)), Error);
}

TEST_CASE("decomposition invariants") {
  check_decomposition(densify(path_graph(9)), jacobi_eigen(densify(path_graph(9))));
  for (std::uint64_t s = 0; s < 8; ++s) {
    const auto A = densify(random_connected(10 + 7 * s, 3.0, 40 + s));
    const auto d = jacobi_eigen(A);
    check_decomposition(A, d);
    // smallest pair of a Laplacian is the constant vector
    CHECK(std::abs(d.eigenvalues[0]) <= 1e-10 * A.inf_norm());
    const Vector ones(A.size(), 1.0);
    CHECK(subspace_angle(ones, {d.vectors[0]}) <= 1e-6);
  }
}

TEST_CASE("fiedler oracle examples") {
  SUBCASE("3 x 3 grid") {
    const auto o = fiedler_oracle(grid_laplacian(3));
    CHECK(o.lambda2 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(o.eigenspace.size() == 2);
  }
  SUBCASE("K4") {
    const auto o = fiedler_oracle(complete_graph(4));
    CHECK(o.lambda2 == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(o.eigenspace.size() == 3);
  }
  SUBCASE("P4") {
    const auto o = fiedler_oracle(path_graph(4));
    CHECK(o.lambda2 == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-13));
    CHECK(o.eigenspace.size() == 1);
  }
  CHECK_THROWS_AS(fiedler_oracle(from_edges(4, {{0, 1, 1}, {2, 3, 1}})), Error);
  CHECK_THROWS_AS(fiedler_oracle(path_graph(kOracleMaxSize + 1)), Error);
}

TEST_CASE("subspace angle") {
  const Vector e1{1, 0, 0}, e2{0, 1, 0};
  CHECK(subspace_angle(e1, {e1}) == 0.0);
  CHECK(subspace_angle(e1, {e2}) == doctest::Approx(std::numbers::pi / 2));
  const Vector u{1, 1, 0};
  CHECK(subspace_angle(u, {e1}) == doctest::Approx(std::numbers::pi / 4));
  CHECK(subspace_angle(u, {e1, e2}) == doctest::Approx(0.0));
  const auto o = fiedler_oracle(random_connected(30, 3.0, 2));
  for (const auto& v : o.eigenspace) CHECK(subspace_angle(v, o.eigenspace) == doctest::Approx(0.0));
}

TEST_CASE("grid closed form up to N = 17") {
  for (std::size_t N = 2; N <= 17; ++N) {
    const auto o = fiedler_oracle(grid_laplacian(N));
    CHECK(std::abs(o.lambda2 - grid_lambda2(N)) <= 1e-12);
    if (N > 2) CHECK(o.eigenspace.size() == 2);
  }
  CHECK(grid_lambda2(2) == doctest::Approx(2.0));
}

TEST_CASE("grid closed form at N = 33") {
  for (std::size_t N = 18; N <= 33; ++N) {
    const auto o = fiedler_oracle(grid_laplacian(N));
    CHECK(std::abs(o.lambda2 - grid_lambda2(N)) <= 1e-12);
  }
}
