#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "fiedcmg/laplacian.hpp"

namespace fiedcmg {

struct SmootherConfig {
  // Stop once u^T v > 1 - tol for consecutive unit iterates.
  double tol = 1e-8;
  std::size_t max_iters = 1000;
  // Re-project onto 1^perp every this many iterations; 0 projects only at entry.
  // The constant vector is the dominant eigenvector of gI - L, so without
  // reprojection rounding error along it grows like (g / (g - lambda2))^k.
  std::size_t reproject_every = 1;

  void validate() const;
};

struct SmoothResult {
  Vector vector;  // unit norm, mean zero
  std::size_t iterations = 0;
  bool converged = false;
  double final_dot = 0.0;
};

// Called with (k, u^k) for the entry vector (k = 0) and after every update.
using IterateObserver = std::function<void(std::size_t, std::span<const double>)>;

// max_i sum_j |l_ij|, an upper bound on the spectrum of L.
double gershgorin_bound(const SparseLaplacian& L);

// Power iteration on gI - L started from the mean-free part of y0. The
// returned vector is re-projected and normalised once more on exit.
SmoothResult power_iterate(const SparseLaplacian& L, std::span<const double> y0,
                           const SmootherConfig& cfg = {}, const IterateObserver& observe = {});

// Standard normal vector of length n from mt19937_64(seed).
Vector gaussian_vector(std::size_t n, std::uint64_t seed);

// power_iterate from gaussian_vector(n, seed).
SmoothResult coarsest_solve(const SparseLaplacian& L, const SmootherConfig& cfg = {},
                            std::uint64_t seed = 0);

}  // namespace fiedcmg
