#include "fiedcmg/laplacian.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "parallel.hpp"

namespace fiedcmg {

namespace {

std::atomic<unsigned> g_threads{1};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

void set_thread_count(unsigned threads) { g_threads = std::max(1u, threads); }
unsigned thread_count() { return g_threads; }

EdgeList EdgeList::from_edges(std::size_t n, std::vector<Edge> raw) {
  for (auto& e : raw) {
    if (e.i >= n || e.j >= n) {
      throw Error(fmt::format("edge ({}, {}) out of range for {} vertices", e.i, e.j, n));
    }
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw Error(fmt::format("edge ({}, {}) has non-positive or non-finite weight {}",
                              e.i, e.j, e.w));
    }
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::erase_if(raw, [](const Edge& e) { return e.i == e.j; });
  std::stable_sort(raw.begin(), raw.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });

  EdgeList g;
  g.n = n;
  for (const auto& e : raw) {
    if (!g.edges.empty() && g.edges.back().i == e.i && g.edges.back().j == e.j) {
      g.edges.back().w += e.w;
    } else {
      g.edges.push_back(e);
    }
  }
  return g;
}

SparseLaplacian::SparseLaplacian(std::size_t n, std::vector<std::size_t> row_offsets,
                                 std::vector<VertexId> col_indices,
                                 std::vector<double> values)
    : n_(n),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  validate();
}

SparseLaplacian SparseLaplacian::from_upper_weights(std::size_t n,
                                                    std::span<const Edge> upper) {
  std::vector<std::size_t> degree(n, 1);  // diagonal slot
  for (const auto& e : upper) {
    if (e.i >= e.j || e.j >= n) {
      throw Error(fmt::format("invalid upper-triangular entry ({}, {})", e.i, e.j));
    }
    ++degree[e.i];
    ++degree[e.j];
  }

  SparseLaplacian L;
  L.n_ = n;
  L.row_offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) L.row_offsets_[v + 1] = L.row_offsets_[v] + degree[v];
  const std::size_t nnz = L.row_offsets_[n];
  L.col_indices_.assign(nnz, 0);
  L.values_.assign(nnz, 0.0);

  // Off-diagonals land in ascending column order when edges are sorted by
  // (i, j); the lower-triangular mirror is filled from a column sweep.
  std::vector<Edge> sorted(upper.begin(), upper.end());
  std::sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  std::vector<std::size_t> lower_count(n, 0);
  for (const auto& e : sorted) ++lower_count[e.j];

  // Row layout: [lower entries (cols < row)] [diagonal] [upper entries].
  std::vector<std::size_t> lower_cursor(n), upper_cursor(n);
  for (std::size_t v = 0; v < n; ++v) {
    lower_cursor[v] = L.row_offsets_[v];
    upper_cursor[v] = L.row_offsets_[v] + lower_count[v] + 1;
    L.col_indices_[L.row_offsets_[v] + lower_count[v]] = static_cast<VertexId>(v);
  }
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const auto& e = sorted[k];
    if (k > 0 && sorted[k - 1].i == e.i && sorted[k - 1].j == e.j) {
      throw Error(fmt::format("duplicate entry ({}, {})", e.i, e.j));
    }
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw Error(fmt::format("entry ({}, {}) has non-positive weight {}", e.i, e.j, e.w));
    }
    L.col_indices_[upper_cursor[e.i]] = e.j;
    L.values_[upper_cursor[e.i]++] = -e.w;
  }
  // Lower parts: iterate rows ascending so each column sees sources ascending.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t diag_pos = L.row_offsets_[i] + lower_count[i];
    for (std::size_t p = diag_pos + 1; p < L.row_offsets_[i + 1]; ++p) {
      const VertexId j = L.col_indices_[p];
      L.col_indices_[lower_cursor[j]] = static_cast<VertexId>(i);
      L.values_[lower_cursor[j]++] = L.values_[p];
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t diag_pos = L.row_offsets_[v] + lower_count[v];
    double off = 0.0;
    for (std::size_t p = L.row_offsets_[v]; p < L.row_offsets_[v + 1]; ++p) {
      if (p != diag_pos) off += L.values_[p];
    }
    L.values_[diag_pos] = -off;
  }
  L.validate();
  return L;
}

void SparseLaplacian::validate() const {
  if (row_offsets_.size() != n_ + 1 || row_offsets_.front() != 0 ||
      row_offsets_.back() != values_.size() || col_indices_.size() != values_.size()) {
    throw Error("malformed compressed-row buffers");
  }
  for (std::size_t row = 0; row < n_; ++row) {
    if (row_offsets_[row + 1] < row_offsets_[row]) {
      throw Error("row offsets must be non-decreasing");
    }
    const auto cols = row_cols(row);
    const auto vals = row_values(row);
    bool has_diag = false;
    double diag = 0.0;
    double off = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const VertexId c = cols[k];
      if (c >= n_ || (k > 0 && cols[k - 1] >= c)) {
        throw Error(fmt::format("row {}: column indices must be increasing and < n", row));
      }
      if (!std::isfinite(vals[k])) throw Error(fmt::format("row {}: non-finite entry", row));
      if (c == row) {
        has_diag = true;
        diag = vals[k];
        continue;
      }
      if (!(vals[k] < 0.0)) {
        throw Error(fmt::format("row {}: off-diagonal ({}, {}) must be negative", row, row, c));
      }
      off += vals[k];
      // symmetry, exact
      const auto mirror_cols = row_cols(c);
      const auto it = std::lower_bound(mirror_cols.begin(), mirror_cols.end(),
                                       static_cast<VertexId>(row));
      if (it == mirror_cols.end() || *it != row ||
          row_values(c)[static_cast<std::size_t>(it - mirror_cols.begin())] != vals[k]) {
        throw Error(fmt::format("entry ({}, {}) has no equal mirror", row, c));
      }
    }
    if (!has_diag) throw Error(fmt::format("row {}: missing diagonal", row));
    if (diag < 0.0) throw Error(fmt::format("row {}: negative diagonal", row));
    if (std::abs(diag + off) > 1e-12 * diag) {
      throw Error(fmt::format("row {}: row sum {} is not zero", row, diag + off));
    }
  }
}

double SparseLaplacian::diagonal(std::size_t row) const {
  const auto cols = row_cols(row);
  const auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<VertexId>(row));
  return row_values(row)[static_cast<std::size_t>(it - cols.begin())];
}

double SparseLaplacian::max_diagonal() const {
  double m = 0.0;
  for (std::size_t v = 0; v < n_; ++v) m = std::max(m, diagonal(v));
  return m;
}

SparseLaplacian SparseLaplacian::scaled(double s) const {
  if (!(s > 0.0) || !std::isfinite(s)) throw Error("scale factor must be positive");
  SparseLaplacian out = *this;
  for (auto& v : out.values_) v *= s;
  out.validate();
  return out;
}

EdgeList SparseLaplacian::to_edge_list() const {
  EdgeList g;
  g.n = n_;
  for (std::size_t row = 0; row < n_; ++row) {
    const auto cols = row_cols(row);
    const auto vals = row_values(row);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] > row) g.edges.push_back({static_cast<VertexId>(row), cols[k], -vals[k]});
    }
  }
  return g;
}

SparseLaplacian build_laplacian(const EdgeList& g) {
  return SparseLaplacian::from_upper_weights(g.n, g.edges);
}

bool is_connected(const EdgeList& g) {
  if (g.n <= 1) return true;
  DisjointSets sets(g.n);
  std::size_t components = g.n;
  for (const auto& e : g.edges) {
    if (sets.unite(e.i, e.j)) --components;
  }
  return components == 1;
}

bool is_connected(const SparseLaplacian& L) {
  const std::size_t n = L.size();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    for (const VertexId u : L.row_cols(v)) {
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  return reached == n;
}

void spmv(const SparseLaplacian& L, std::span<const double> x, std::span<double> y) {
  if (x.size() != L.size() || y.size() != L.size()) {
    throw Error(fmt::format("spmv: dimension mismatch (matrix {}, x {}, y {})", L.size(),
                            x.size(), y.size()));
  }
  const auto offsets = L.row_offsets();
  const auto cols = L.col_indices();
  const auto vals = L.values();
  detail::parallel_for(L.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t row = lo; row < hi; ++row) {
      double acc = 0.0;
      for (std::size_t p = offsets[row]; p < offsets[row + 1]; ++p) acc += vals[p] * x[cols[p]];
      y[row] = acc;
    }
  });
}

Vector spmv(const SparseLaplacian& L, std::span<const double> x) {
  Vector y(L.size());
  spmv(L, x, y);
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("dot: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double sum(std::span<const double> x) {
  double acc = 0.0;
  for (const double v : x) acc += v;
  return acc;
}

bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

void project_out_ones_inplace(std::span<double> x) {
  if (x.empty()) throw Error("project_out_ones: empty vector");
  const double mean = sum(x) / static_cast<double>(x.size());
  for (auto& v : x) v -= mean;
}

Vector project_out_ones(std::span<const double> x) {
  Vector out(x.begin(), x.end());
  project_out_ones_inplace(out);
  return out;
}

}  // namespace fiedcmg
