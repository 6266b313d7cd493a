#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fiedcmg/laplacian.hpp"

namespace fiedcmg {

// Vertex -> aggregate assignment; encodes the 0/1 restriction matrix R with
// R(a, v) = 1 iff assign[v] == a.
struct AggregateMap {
  std::size_t fine_n = 0;
  std::size_t coarse_n = 0;
  std::vector<VertexId> assign;

  static AggregateMap identity(std::size_t n);

  // Number of fine vertices per aggregate.
  std::vector<std::size_t> aggregate_sizes() const;

  friend bool operator==(const AggregateMap&, const AggregateMap&) = default;
};

struct LevelStats {
  std::size_t n = 0;
  std::size_t nnz = 0;
  // n_{i+1} / n_i; empty on the coarsest level.
  std::optional<double> rate;
};

struct Hierarchy {
  std::vector<SparseLaplacian> levels;  // fine -> coarse
  std::vector<AggregateMap> maps;       // maps[i] : level i -> level i+1
  std::vector<LevelStats> stats;

  std::size_t depth() const { return levels.size(); }
};

// Per-level seed: splitmix64 finalizer applied to master ^ (stream * phi + index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

// Fisher-Yates shuffle of 0..n-1 driven by mt19937_64(seed).
std::vector<VertexId> random_permutation(std::size_t n, std::uint64_t seed);

// One heavy edge coarsening pass over the given visit order: an unassigned
// vertex v is grouped with its heaviest neighbour m (lowest index on ties);
// if m is unassigned both open a new aggregate, otherwise v joins m's.
// Aggregate ids are numbered in creation order.
AggregateMap hec_aggregate(const SparseLaplacian& L, std::span<const VertexId> visit_order);

// hec_aggregate over random_permutation(n, seed). Requires a connected
// Laplacian with at least two vertices.
AggregateMap hec_coarsen(const SparseLaplacian& L, std::uint64_t seed);

// R L R^T. Off-diagonals accumulate across aggregate pairs; the diagonal is
// recomputed as the negated off-diagonal row sum, so intra-aggregate edges
// vanish and the result is again a Laplacian.
SparseLaplacian galerkin_coarsen(const SparseLaplacian& L, const AggregateMap& map);

// R x: per-aggregate sums.
Vector restrict_to_coarse(const AggregateMap& map, std::span<const double> x);

// R^T y: piecewise-constant injection.
Vector prolongate(const AggregateMap& map, std::span<const double> y);

// Coarsens while n_i > coarsest_size. Level i uses derive_seed(seed, 0, i).
// Throws on disconnected input or if a pass fails to reduce the size.
Hierarchy build_hierarchy(const SparseLaplacian& L, std::size_t coarsest_size = 25,
                          std::uint64_t seed = 0);

}  // namespace fiedcmg
