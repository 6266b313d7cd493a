#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fiedcmg/laplacian.hpp"

namespace fiedcmg {

// Laplacian of the n_side x n_side grid graph (5-point stencil, unit weights,
// natural Neumann boundary). Vertex (r, c) has index r * n_side + c.
SparseLaplacian grid_laplacian(std::size_t n_side);

// 2 - 2 cos(pi p / N) + 2 - 2 cos(pi q / N), the (p, q) grid eigenvalue.
double grid_eigenvalue(std::size_t n_side, std::size_t p, std::size_t q);
// Second-smallest grid eigenvalue 2 - 2 cos(pi / N) (multiplicity 2 for N > 2).
double grid_lambda2(std::size_t n_side);

// Bilinear interpolation from an N_c x N_c grid to the nested
// (2 (N_c - 1) + 1)-sided grid.
Vector bilinear_prolongate(std::span<const double> coarse, std::size_t coarse_side);

struct GridLevel {
  std::size_t n_side = 0;
  SparseLaplacian op;
  double omega = 0.0;  // 1 / ||A||_inf
  std::size_t k_steps = 0;

  static GridLevel make(std::size_t n_side, std::size_t k_steps);
};

// u <- (I - omega A) u, k times, without normalisation.
void richardson_sweeps(const GridLevel& level, std::span<double> u, std::size_t k);

// richardson_sweeps followed by mean projection and normalisation.
Vector richardson_smooth(const GridLevel& level, std::span<const double> u, std::size_t k);

struct GcmgConfig {
  std::size_t n_side_finest = 1025;
  // Number of grids J + 1; 0 picks the count that stops at the first side
  // <= max_coarsest_side.
  std::size_t levels = 0;
  std::size_t max_coarsest_side = 33;
  double beta = 4.0;
  std::size_t k0 = 1;
  std::uint64_t seed = 0;

  // Sides N_0 > N_1 > ... > N_J with N_{j+1} = (N_j - 1) / 2 + 1.
  std::vector<std::size_t> sides() const;
  // k_j = max(1, round(beta^j k0)).
  std::size_t steps(std::size_t level) const;
  void validate() const;
};

struct GcmgLevelRow {
  std::size_t level = 0;
  std::size_t n_side = 0;
  std::size_t n = 0;
  std::size_t k_steps = 0;      // 0 on the coarsest level
  double lambda_exact = 0.0;    // grid_lambda2(n_side)
  double rq_pre = 0.0;          // Rayleigh quotient after prolongation
  double rq_post = 0.0;         // after k_steps Richardson sweeps
  double err_pre = 0.0;         // |lambda_exact - rq_pre|
  double err_post = 0.0;        // |lambda_exact - rq_post|
  bool coarsest = false;
};

struct GcmgReport {
  std::vector<GcmgLevelRow> rows;  // index = level, 0 is finest
  Vector vector;                   // finest-level unit iterate
  double lambda = 0.0;             // its Rayleigh quotient
  double work = 0.0;               // sum over smoothed levels of k_j n_j
  double wall_time_s = 0.0;

  const GcmgLevelRow& finest() const { return rows.front(); }
};

// Coarsest grid solved by the dense oracle when it has at most 1024 vertices,
// otherwise by shifted power iteration to tol 1e-14. Each finer level gets the
// bilinear prolongation (mean-projected, normalised) and k_j Richardson sweeps.
GcmgReport gcmg_solve(const GcmgConfig& cfg);

struct RatePoint {
  std::size_t n_side = 0;
  double h = 0.0;           // 1 / (n_side - 1)
  std::size_t levels = 0;
  double error = 0.0;       // |lambda2 - r| of the graph Laplacian
  double scaled_error = 0.0;  // error / h^2, the eigenvalue error of A / h^2
  double work = 0.0;
};

struct RateTable {
  std::vector<RatePoint> points;
  double order = 0.0;  // least-squares slope of log(scaled_error) vs log(h)
};

// Runs gcmg_solve for each side, all coarsened to the same coarsest side, and
// fits scaled_error ~ h^order. Needs at least three sizes.
RateTable rate_experiment(std::span<const std::size_t> n_sides, double beta, std::size_t k0,
                          std::size_t coarsest_side = 17, std::uint64_t seed = 0);

}  // namespace fiedcmg
