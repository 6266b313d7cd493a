#include "fiedcmg/coarsening.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "parallel.hpp"

namespace fiedcmg {

namespace {

constexpr VertexId kUnassigned = std::numeric_limits<VertexId>::max();

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

VertexId heaviest_neighbour(const SparseLaplacian& L, VertexId v) {
  const auto cols = L.row_cols(v);
  const auto vals = L.row_values(v);
  VertexId best = kUnassigned;
  double best_val = 0.0;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (cols[k] == v) continue;
    // columns ascend, so strict < keeps the lowest index on ties
    if (best == kUnassigned || vals[k] < best_val) {
      best = cols[k];
      best_val = vals[k];
    }
  }
  return best;
}

}  // namespace

AggregateMap AggregateMap::identity(std::size_t n) {
  AggregateMap m;
  m.fine_n = n;
  m.coarse_n = n;
  m.assign.resize(n);
  std::iota(m.assign.begin(), m.assign.end(), VertexId{0});
  return m;
}

std::vector<std::size_t> AggregateMap::aggregate_sizes() const {
  std::vector<std::size_t> sizes(coarse_n, 0);
  for (const VertexId a : assign) ++sizes[a];
  return sizes;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + index));
}

std::vector<VertexId> random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<VertexId> p(n);
  std::iota(p.begin(), p.end(), VertexId{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(p[i - 1], p[pick(rng)]);
  }
  return p;
}

AggregateMap hec_aggregate(const SparseLaplacian& L, std::span<const VertexId> visit_order) {
  const std::size_t n = L.size();
  if (visit_order.size() != n) throw Error("hec: visit order length differs from n");

  AggregateMap map;
  map.fine_n = n;
  map.assign.assign(n, kUnassigned);
  VertexId next = 0;
  for (const VertexId v : visit_order) {
    if (v >= n) throw Error("hec: visit order entry out of range");
    if (map.assign[v] != kUnassigned) continue;
    const VertexId m = heaviest_neighbour(L, v);
    if (m == kUnassigned) throw Error(fmt::format("hec: vertex {} is isolated", v));
    if (map.assign[m] == kUnassigned) {
      map.assign[m] = next;
      map.assign[v] = next;
      ++next;
    } else {
      map.assign[v] = map.assign[m];
    }
  }
  if (std::find(map.assign.begin(), map.assign.end(), kUnassigned) != map.assign.end()) {
    throw Error("hec: visit order is not a permutation");
  }
  map.coarse_n = next;
  return map;
}

AggregateMap hec_coarsen(const SparseLaplacian& L, std::uint64_t seed) {
  if (L.size() < 2) throw Error("hec: need at least two vertices");
  if (!is_connected(L)) throw Error("hec: graph is disconnected");
  const auto order = random_permutation(L.size(), seed);
  return hec_aggregate(L, order);
}

SparseLaplacian galerkin_coarsen(const SparseLaplacian& L, const AggregateMap& map) {
  if (map.fine_n != L.size() || map.assign.size() != L.size()) {
    throw Error(fmt::format("galerkin: map is for {} vertices, matrix has {}", map.fine_n,
                            L.size()));
  }
  const std::size_t nc = map.coarse_n;

  // members of each aggregate, ascending fine index
  std::vector<std::size_t> start(nc + 1, 0);
  for (const VertexId a : map.assign) {
    if (a >= nc) throw Error("galerkin: aggregate id out of range");
    ++start[a + 1];
  }
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<VertexId> members(L.size());
  {
    auto cursor = start;
    for (std::size_t v = 0; v < L.size(); ++v) members[cursor[map.assign[v]]++] = static_cast<VertexId>(v);
  }

  // Only pairs a < b are accumulated; the mirror is copied, so the coarse
  // matrix is exactly symmetric.
  std::vector<Edge> upper;
  std::vector<double> acc(nc, 0.0);
  std::vector<char> touched(nc, 0);
  std::vector<VertexId> touched_list;
  for (std::size_t a = 0; a < nc; ++a) {
    for (std::size_t p = start[a]; p < start[a + 1]; ++p) {
      const VertexId u = members[p];
      const auto cols = L.row_cols(u);
      const auto vals = L.row_values(u);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        const VertexId b = map.assign[cols[k]];
        if (b <= a) continue;
        if (!touched[b]) {
          touched[b] = 1;
          touched_list.push_back(b);
        }
        acc[b] += vals[k];
      }
    }
    std::sort(touched_list.begin(), touched_list.end());
    for (const VertexId b : touched_list) {
      upper.push_back({static_cast<VertexId>(a), b, -acc[b]});
      acc[b] = 0.0;
      touched[b] = 0;
    }
    touched_list.clear();
  }
  return SparseLaplacian::from_upper_weights(nc, upper);
}

Vector restrict_to_coarse(const AggregateMap& map, std::span<const double> x) {
  if (x.size() != map.fine_n) {
    throw Error(fmt::format("restrict: expected length {}, got {}", map.fine_n, x.size()));
  }
  Vector y(map.coarse_n, 0.0);
  for (std::size_t v = 0; v < x.size(); ++v) y[map.assign[v]] += x[v];
  return y;
}

Vector prolongate(const AggregateMap& map, std::span<const double> y) {
  if (y.size() != map.coarse_n) {
    throw Error(fmt::format("prolongate: expected length {}, got {}", map.coarse_n, y.size()));
  }
  Vector x(map.fine_n);
  detail::parallel_for(map.fine_n, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t v = lo; v < hi; ++v) x[v] = y[map.assign[v]];
  });
  return x;
}

Hierarchy build_hierarchy(const SparseLaplacian& L, std::size_t coarsest_size, std::uint64_t seed) {
  if (coarsest_size < 1) throw Error("coarsest size must be at least 1");
  if (!is_connected(L)) throw Error("cannot build hierarchy: graph is disconnected");

  Hierarchy h;
  h.levels.push_back(L);
  while (h.levels.back().size() > coarsest_size) {
    const auto& fine = h.levels.back();
    const std::size_t level = h.levels.size() - 1;
    auto map = hec_aggregate(fine, random_permutation(fine.size(), derive_seed(seed, 0, level)));
    if (map.coarse_n >= fine.size()) {
      throw Error(fmt::format("coarsening stalled at level {} ({} vertices)", level, fine.size()));
    }
    auto coarse = galerkin_coarsen(fine, map);
    h.maps.push_back(std::move(map));
    h.levels.push_back(std::move(coarse));
  }
  for (std::size_t i = 0; i < h.levels.size(); ++i) {
    LevelStats s{h.levels[i].size(), h.levels[i].nnz(), std::nullopt};
    if (i + 1 < h.levels.size()) {
      s.rate = static_cast<double>(h.levels[i + 1].size()) / static_cast<double>(h.levels[i].size());
    }
    h.stats.push_back(s);
  }
  return h;
}

}  // namespace fiedcmg
