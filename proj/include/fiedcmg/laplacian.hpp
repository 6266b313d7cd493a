#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fiedcmg {

using VertexId = std::uint32_t;
using Vector = std::vector<double>;

// Thrown for invalid arguments to library operations (dimension mismatch,
// violated preconditions, disconnected input, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  VertexId i;
  VertexId j;
  double w;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Undirected weighted graph without self-loops. Edges are stored once with
// i < j, sorted lexicographically.
struct EdgeList {
  std::size_t n = 0;
  std::vector<Edge> edges;

  // Canonicalizes raw (i, j, w) triples: orients i < j, drops self-loops and
  // sums weights of repeated pairs. Throws Error on out-of-range ids or
  // non-positive weights.
  static EdgeList from_edges(std::size_t n, std::vector<Edge> raw);
};

// Symmetric graph Laplacian in compressed row form. Every row stores its
// diagonal; columns within a row are strictly increasing.
class SparseLaplacian {
 public:
  SparseLaplacian() = default;

  // Takes ownership of CSR buffers and checks every Laplacian invariant.
  SparseLaplacian(std::size_t n, std::vector<std::size_t> row_offsets,
                  std::vector<VertexId> col_indices, std::vector<double> values);

  // Assembles a Laplacian from the strictly upper-triangular adjacency
  // weights (a < b, w > 0, no duplicates). Diagonals are the negated sums
  // of the stored off-diagonals, so row sums vanish up to rounding.
  static SparseLaplacian from_upper_weights(std::size_t n,
                                            std::span<const Edge> upper);

  std::size_t size() const { return n_; }
  std::size_t nnz() const { return values_.size(); }
  // Number of undirected edges (stored off-diagonal pairs).
  std::size_t edge_count() const { return (nnz() - n_) / 2; }

  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const VertexId> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }

  std::span<const VertexId> row_cols(std::size_t row) const {
    return {col_indices_.data() + row_offsets_[row],
            row_offsets_[row + 1] - row_offsets_[row]};
  }
  std::span<const double> row_values(std::size_t row) const {
    return {values_.data() + row_offsets_[row],
            row_offsets_[row + 1] - row_offsets_[row]};
  }

  double diagonal(std::size_t row) const;
  double max_diagonal() const;

  // Returns a copy with every entry multiplied by s > 0.
  SparseLaplacian scaled(double s) const;

  EdgeList to_edge_list() const;

  friend bool operator==(const SparseLaplacian&, const SparseLaplacian&) = default;

 private:
  void validate() const;

  std::size_t n_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<VertexId> col_indices_;
  std::vector<double> values_;
};

SparseLaplacian build_laplacian(const EdgeList& g);

bool is_connected(const EdgeList& g);
bool is_connected(const SparseLaplacian& L);

// y = L x. Rows are independent, so the result is bitwise identical for any
// thread count.
Vector spmv(const SparseLaplacian& L, std::span<const double> x);
void spmv(const SparseLaplacian& L, std::span<const double> x, std::span<double> y);

// x - mean(x) * 1
Vector project_out_ones(std::span<const double> x);
void project_out_ones_inplace(std::span<double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> x);
double sum(std::span<const double> x);
bool all_finite(std::span<const double> x);

// Thread cap for internal kernels; 1 by default.
void set_thread_count(unsigned threads);
unsigned thread_count();

}  // namespace fiedcmg
