#include "fiedcmg/cascadic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace fiedcmg {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

void SolverConfig::validate() const {
  if (coarsest_size < 2) throw Error("coarsest size must be at least 2");
  smoother.validate();
}

Eigenpair residual_norm(const SparseLaplacian& L, std::span<const double> y) {
  if (y.size() != L.size()) throw Error("residual: dimension mismatch");
  const double ny = norm2(y);
  if (!(ny > 0.0)) throw Error("residual: zero vector");
  Vector u(y.begin(), y.end());
  for (auto& v : u) v /= ny;
  const Vector lu = spmv(L, u);
  Eigenpair out;
  out.lambda = dot(u, lu);
  double r2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = lu[i] - out.lambda * u[i];
    r2 += d * d;
  }
  out.residual = std::sqrt(r2);
  return out;
}

void canonicalize_sign(std::span<double> x) {
  double big = 0.0;
  for (const double v : x) big = std::max(big, std::abs(v));
  for (const double v : x) {
    if (std::abs(v) > 1e-10 * big) {
      if (v < 0.0) {
        for (auto& w : x) w = -w;
      }
      return;
    }
  }
}

FiedlerResult solve_fiedler(const Hierarchy& h, const SolverConfig& cfg) {
  cfg.validate();
  if (h.levels.empty()) throw Error("empty hierarchy");
  if (h.levels.front().size() < 2) throw Error("graph needs at least two vertices");

  const auto t0 = Clock::now();
  std::size_t start = h.levels.size() - 1;
  while (h.levels[start].size() < 2) --start;

  FiedlerResult res;
  res.seed = cfg.seed;
  res.per_level.resize(start + 1);

  auto coarse = coarsest_solve(h.levels[start], cfg.smoother, derive_seed(cfg.seed, 1, 0));
  res.per_level[start] = {start, h.levels[start].size(), h.levels[start].nnz(), coarse.iterations,
                          coarse.converged};
  Vector y = std::move(coarse.vector);
  for (std::size_t j = start; j-- > 0;) {
    // power_iterate removes the mean the injection introduces
    const Vector start_vec = prolongate(h.maps[j], y);
    auto smoothed = power_iterate(h.levels[j], start_vec, cfg.smoother);
    res.per_level[j] = {j, h.levels[j].size(), h.levels[j].nnz(), smoothed.iterations,
                        smoothed.converged};
    y = std::move(smoothed.vector);
  }
  canonicalize_sign(y);
  const auto pair = residual_norm(h.levels.front(), y);
  res.lambda2 = pair.lambda;
  res.residual = pair.residual;
  res.vector = std::move(y);
  res.solve_time_s = seconds_since(t0);
  res.wall_time_s = res.solve_time_s;
  return res;
}

FiedlerResult solve_fiedler(const SparseLaplacian& L, const SolverConfig& cfg) {
  cfg.validate();
  if (L.size() < 2) throw Error("graph needs at least two vertices");
  if (!is_connected(L)) throw Error("graph is disconnected; the Fiedler vector is not unique");
  const auto t0 = Clock::now();
  const Hierarchy h = build_hierarchy(L, cfg.coarsest_size, cfg.seed);
  const double setup = seconds_since(t0);
  auto res = solve_fiedler(h, cfg);
  res.setup_time_s = setup;
  res.wall_time_s = setup + res.solve_time_s;
  return res;
}

Bisection split_at_median(const SparseLaplacian& L, std::span<const double> fiedler) {
  const std::size_t n = L.size();
  if (fiedler.size() != n) throw Error("bisection: dimension mismatch");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fiedler[a] < fiedler[b]; });
  Bisection out;
  out.part.assign(n, 0);
  for (std::size_t k = 0; k < n / 2; ++k) out.part[order[k]] = 1;
  if (out.part[0] == 1) {
    for (auto& p : out.part) p ^= 1;
  }
  for (std::size_t row = 0; row < n; ++row) {
    const auto cols = L.row_cols(row);
    const auto vals = L.row_values(row);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] > row && out.part[row] != out.part[cols[k]]) out.cut_weight -= vals[k];
    }
  }
  return out;
}

Bisection spectral_bisect(const SparseLaplacian& L, const SolverConfig& cfg) {
  auto fiedler = solve_fiedler(L, cfg);
  auto out = split_at_median(L, fiedler.vector);
  out.fiedler = std::move(fiedler);
  return out;
}

}  // namespace fiedcmg
