#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fiedcmg/coarsening.hpp"
#include "fiedcmg/laplacian.hpp"
#include "fiedcmg/power_iteration.hpp"

namespace fiedcmg {

struct SolverConfig {
  std::size_t coarsest_size = 25;
  SmootherConfig smoother;
  std::uint64_t seed = 0;

  void validate() const;
};

struct LevelReport {
  std::size_t level = 0;
  std::size_t n = 0;
  std::size_t nnz = 0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct FiedlerResult {
  Vector vector;  // unit norm, orthogonal to 1, first significant entry positive
  double lambda2 = 0.0;
  double residual = 0.0;
  std::vector<LevelReport> per_level;  // fine -> coarse; levels skipped by the cascade are absent
  double setup_time_s = 0.0;
  double solve_time_s = 0.0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;

  bool converged() const { return !per_level.empty() && per_level.front().converged; }
};

struct Eigenpair {
  double lambda = 0.0;
  double residual = 0.0;
};

// Rayleigh quotient and ||L y - lambda y|| of y / ||y||.
Eigenpair residual_norm(const SparseLaplacian& L, std::span<const double> y);

// Flips x so its first entry with |x_i| > 1e-10 max|x| is positive.
void canonicalize_sign(std::span<double> x);

// Setup (heavy edge coarsening), power iteration on the coarsest level, then
// prolongate + power iteration back up to the finest level.
FiedlerResult solve_fiedler(const SparseLaplacian& L, const SolverConfig& cfg = {});

// Same, on a prebuilt hierarchy. Coarse levels with fewer than two vertices
// are skipped: the cascade starts from the deepest level that has a Fiedler
// vector.
FiedlerResult solve_fiedler(const Hierarchy& h, const SolverConfig& cfg);

struct Bisection {
  std::vector<std::uint8_t> part;  // 0/1 per vertex; vertex 0 is in part 0
  double cut_weight = 0.0;
  FiedlerResult fiedler;
};

// Median split of the Fiedler vector: the floor(n/2) smallest entries form
// one side (ties broken by vertex index).
Bisection spectral_bisect(const SparseLaplacian& L, const SolverConfig& cfg = {});
Bisection split_at_median(const SparseLaplacian& L, std::span<const double> fiedler);

}  // namespace fiedcmg
