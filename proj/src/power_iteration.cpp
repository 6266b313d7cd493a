#include "fiedcmg/power_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

namespace fiedcmg {

namespace {

void scale(std::span<double> x, double s) {
  for (auto& v : x) v *= s;
}

}  // namespace

void SmootherConfig::validate() const {
  if (!(tol > 0.0 && tol < 1.0)) throw Error(fmt::format("smoother tol {} not in (0, 1)", tol));
  if (max_iters < 1) throw Error("smoother max_iters must be at least 1");
}

double gershgorin_bound(const SparseLaplacian& L) {
  double g = 0.0;
  for (std::size_t row = 0; row < L.size(); ++row) {
    double s = 0.0;
    for (const double v : L.row_values(row)) s += std::abs(v);
    g = std::max(g, s);
  }
  return g;
}

SmoothResult power_iterate(const SparseLaplacian& L, std::span<const double> y0,
                           const SmootherConfig& cfg, const IterateObserver& observe) {
  cfg.validate();
  const std::size_t n = L.size();
  if (y0.size() != n) {
    throw Error(fmt::format("power iteration: start vector has length {}, expected {}", y0.size(), n));
  }
  if (!all_finite(y0)) throw Error("power iteration: non-finite start vector");

  SmoothResult res;
  Vector u = project_out_ones(y0);
  const double start_norm = norm2(y0);
  const double norm = norm2(u);
  if (!(norm > 1e-14 * start_norm) || norm == 0.0) {
    throw Error("power iteration: start vector is parallel to the constant vector");
  }
  scale(u, 1.0 / norm);
  if (observe) observe(0, u);

  const double g = gershgorin_bound(L);
  Vector v(n, 0.0);
  Vector lv(n);
  double uv = 0.0;
  while (uv <= 1.0 - cfg.tol && res.iterations < cfg.max_iters) {
    v.swap(u);
    spmv(L, v, lv);
    for (std::size_t i = 0; i < n; ++i) u[i] = g * v[i] - lv[i];
    if (cfg.reproject_every > 0 && (res.iterations + 1) % cfg.reproject_every == 0) {
      project_out_ones_inplace(u);
    }
    const double un = norm2(u);
    if (!std::isfinite(un)) throw Error("power iteration: non-finite iterate");
    ++res.iterations;
    if (un <= 1e-14 * g) {
      // v lies in the eigenspace of L for eigenvalue g, so gI - L maps it to
      // zero and the iteration cannot move; v is itself an eigenvector.
      u = v;
      uv = 1.0;
      if (observe) observe(res.iterations, u);
      break;
    }
    scale(u, 1.0 / un);
    uv = dot(u, v);
    if (observe) observe(res.iterations, u);
  }

  res.converged = uv > 1.0 - cfg.tol;
  res.final_dot = uv;
  project_out_ones_inplace(u);
  const double fn = norm2(u);
  if (!(fn > 0.0) || !std::isfinite(fn)) {
    throw Error("power iteration: iterate collapsed onto the constant vector");
  }
  scale(u, 1.0 / fn);
  res.vector = std::move(u);
  return res;
}

Vector gaussian_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(n);
  for (auto& v : x) v = normal(rng);
  return x;
}

SmoothResult coarsest_solve(const SparseLaplacian& L, const SmootherConfig& cfg, std::uint64_t seed) {
  if (L.size() < 2) throw Error("coarsest solve: need at least two vertices");
  if (!is_connected(L)) throw Error("coarsest solve: graph is disconnected");
  return power_iterate(L, gaussian_vector(L.size(), seed), cfg);
}

}  // namespace fiedcmg
