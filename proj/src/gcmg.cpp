#include "fiedcmg/gcmg.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "fiedcmg/coarsening.hpp"
#include "fiedcmg/dense_oracle.hpp"
#include "fiedcmg/power_iteration.hpp"

namespace fiedcmg {

namespace {

constexpr std::size_t kDenseCoarsestLimit = 1024;

double rayleigh_quotient(const SparseLaplacian& A, std::span<const double> u) {
  const Vector au = spmv(A, u);
  return dot(u, au) / dot(u, u);
}

void normalize_mean_free(std::span<double> u) {
  project_out_ones_inplace(u);
  const double nu = norm2(u);
  if (!(nu > 0.0) || !std::isfinite(nu)) throw Error("gcmg: iterate vanished");
  for (auto& v : u) v /= nu;
}

Vector solve_coarsest(const SparseLaplacian& A, std::uint64_t seed) {
  if (A.size() <= kDenseCoarsestLimit) return fiedler_oracle(A).eigenspace.front();
  SmootherConfig cfg;
  cfg.tol = 1e-14;
  cfg.max_iters = 2'000'000;
  return coarsest_solve(A, cfg, seed).vector;
}

}  // namespace

SparseLaplacian grid_laplacian(std::size_t n_side) {
  if (n_side < 2) throw Error(fmt::format("grid side must be at least 2, got {}", n_side));
  std::vector<Edge> upper;
  upper.reserve(2 * n_side * (n_side - 1));
  for (std::size_t r = 0; r < n_side; ++r) {
    for (std::size_t c = 0; c < n_side; ++c) {
      const auto v = static_cast<VertexId>(r * n_side + c);
      if (c + 1 < n_side) upper.push_back({v, v + 1, 1.0});
      if (r + 1 < n_side) upper.push_back({v, static_cast<VertexId>(v + n_side), 1.0});
    }
  }
  return SparseLaplacian::from_upper_weights(n_side * n_side, upper);
}

double grid_eigenvalue(std::size_t n_side, std::size_t p, std::size_t q) {
  const double N = static_cast<double>(n_side);
  const auto path = [N](std::size_t k) {
    return 2.0 - 2.0 * std::cos(std::numbers::pi * static_cast<double>(k) / N);
  };
  return path(p) + path(q);
}

double grid_lambda2(std::size_t n_side) { return grid_eigenvalue(n_side, 1, 0); }

Vector bilinear_prolongate(std::span<const double> coarse, std::size_t nc) {
  if (nc < 2 || coarse.size() != nc * nc) {
    throw Error(fmt::format("bilinear prolongation: {} values do not form a {}x{} grid",
                            coarse.size(), nc, nc));
  }
  const std::size_t nf = 2 * (nc - 1) + 1;
  Vector fine(nf * nf);
  const auto C = [&](std::size_t r, std::size_t c) { return coarse[r * nc + c]; };
  for (std::size_t r = 0; r < nf; ++r) {
    const std::size_t r0 = r / 2;
    const bool r_mid = r % 2 == 1;
    for (std::size_t c = 0; c < nf; ++c) {
      const std::size_t c0 = c / 2;
      const bool c_mid = c % 2 == 1;
      double v;
      if (!r_mid && !c_mid) {
        v = C(r0, c0);
      } else if (r_mid && !c_mid) {
        v = 0.5 * (C(r0, c0) + C(r0 + 1, c0));
      } else if (!r_mid && c_mid) {
        v = 0.5 * (C(r0, c0) + C(r0, c0 + 1));
      } else {
        v = 0.25 * (C(r0, c0) + C(r0 + 1, c0) + C(r0, c0 + 1) + C(r0 + 1, c0 + 1));
      }
      fine[r * nf + c] = v;
    }
  }
  return fine;
}

GridLevel GridLevel::make(std::size_t n_side, std::size_t k_steps) {
  GridLevel level;
  level.n_side = n_side;
  level.op = grid_laplacian(n_side);
  level.omega = 1.0 / gershgorin_bound(level.op);
  level.k_steps = k_steps;
  return level;
}

void richardson_sweeps(const GridLevel& level, std::span<double> u, std::size_t k) {
  if (u.size() != level.op.size()) {
    throw Error(fmt::format("richardson: vector length {} for a {}-vertex grid", u.size(),
                            level.op.size()));
  }
  Vector au(u.size());
  for (std::size_t s = 0; s < k; ++s) {
    spmv(level.op, u, au);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] -= level.omega * au[i];
  }
}

Vector richardson_smooth(const GridLevel& level, std::span<const double> u, std::size_t k) {
  Vector out(u.begin(), u.end());
  richardson_sweeps(level, out, k);
  normalize_mean_free(out);
  return out;
}

std::vector<std::size_t> GcmgConfig::sides() const {
  if (n_side_finest < 2) throw Error("gcmg: finest side must be at least 2");
  std::vector<std::size_t> out{n_side_finest};
  if (levels == 0) {
    while (out.back() > max_coarsest_side && out.back() > 2 && (out.back() - 1) % 2 == 0) {
      out.push_back((out.back() - 1) / 2 + 1);
    }
    return out;
  }
  for (std::size_t j = 1; j < levels; ++j) {
    const std::size_t n = out.back();
    if (n <= 2 || (n - 1) % 2 != 0) {
      throw Error(fmt::format("gcmg: side {} does not nest {} levels deep (need m * 2^J + 1)",
                              n_side_finest, levels));
    }
    out.push_back((n - 1) / 2 + 1);
  }
  return out;
}

std::size_t GcmgConfig::steps(std::size_t level) const {
  const double k = std::round(std::pow(beta, static_cast<double>(level)) * static_cast<double>(k0));
  return static_cast<std::size_t>(std::max(1.0, k));
}

void GcmgConfig::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error("gcmg: beta must be positive");
  if (k0 < 1) throw Error("gcmg: k0 must be at least 1");
  (void)sides();
}

GcmgReport gcmg_solve(const GcmgConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const auto sides = cfg.sides();
  const std::size_t J = sides.size() - 1;

  GcmgReport rep;
  rep.rows.resize(sides.size());

  const auto coarsest = GridLevel::make(sides[J], 0);
  Vector u = solve_coarsest(coarsest.op, derive_seed(cfg.seed, 2, 0));
  {
    auto& row = rep.rows[J];
    row = {J, sides[J], coarsest.op.size(), 0, grid_lambda2(sides[J]), 0.0, 0.0, 0.0, 0.0, true};
    row.rq_pre = row.rq_post = rayleigh_quotient(coarsest.op, u);
    row.err_pre = row.err_post = std::abs(row.lambda_exact - row.rq_post);
  }

  for (std::size_t j = J; j-- > 0;) {
    const auto level = GridLevel::make(sides[j], cfg.steps(j));
    u = bilinear_prolongate(u, sides[j + 1]);
    normalize_mean_free(u);
    auto& row = rep.rows[j];
    row.level = j;
    row.n_side = sides[j];
    row.n = level.op.size();
    row.k_steps = level.k_steps;
    row.lambda_exact = grid_lambda2(sides[j]);
    row.rq_pre = rayleigh_quotient(level.op, u);
    richardson_sweeps(level, u, level.k_steps);
    normalize_mean_free(u);
    row.rq_post = rayleigh_quotient(level.op, u);
    row.err_pre = std::abs(row.lambda_exact - row.rq_pre);
    row.err_post = std::abs(row.lambda_exact - row.rq_post);
    rep.work += static_cast<double>(level.k_steps) * static_cast<double>(row.n);
  }
  rep.lambda = rep.rows.front().rq_post;
  rep.vector = std::move(u);
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

RateTable rate_experiment(std::span<const std::size_t> n_sides, double beta, std::size_t k0,
                          std::size_t coarsest_side, std::uint64_t seed) {
  if (n_sides.size() < 3) throw Error("rate experiment needs at least three grid sizes");
  RateTable table;
  for (const std::size_t n : n_sides) {
    GcmgConfig cfg;
    cfg.n_side_finest = n;
    cfg.max_coarsest_side = coarsest_side;
    cfg.beta = beta;
    cfg.k0 = k0;
    cfg.seed = seed;
    const auto sides = cfg.sides();
    if (sides.back() != coarsest_side) {
      throw Error(fmt::format("rate experiment: side {} does not nest down to {}", n, coarsest_side));
    }
    const auto rep = gcmg_solve(cfg);
    RatePoint p;
    p.n_side = n;
    p.h = 1.0 / static_cast<double>(n - 1);
    p.levels = sides.size();
    p.error = rep.finest().err_post;
    p.scaled_error = p.error / (p.h * p.h);
    p.work = rep.work;
    table.points.push_back(p);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(table.points.size());
  for (const auto& p : table.points) {
    const double x = std::log(p.h);
    const double y = std::log(p.scaled_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  table.order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return table;
}

}  // namespace fiedcmg
