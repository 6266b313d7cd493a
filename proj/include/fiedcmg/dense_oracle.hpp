#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fiedcmg/laplacian.hpp"

namespace fiedcmg {

// Row-major square matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  double frobenius_norm() const;
  double inf_norm() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

DenseMatrix densify(const SparseLaplacian& L);

struct EigenDecomposition {
  Vector eigenvalues;           // ascending
  std::vector<Vector> vectors;  // vectors[k] pairs with eigenvalues[k], orthonormal
};

inline constexpr std::size_t kOracleMaxSize = 2048;

// Cyclic-by-row Jacobi rotations with threshold skipping; sweeps until the
// off-diagonal Frobenius mass drops below 1e-14 * ||A||_F.
EigenDecomposition jacobi_eigen(const DenseMatrix& A);

struct FiedlerOracle {
  double lambda2 = 0.0;
  double lambda3 = 0.0;  // third-smallest eigenvalue; equals lambda2 when it repeats
  std::vector<Vector> eigenspace;  // every eigenvector within 1e-8 ||L||_inf of lambda2
  EigenDecomposition full;
};

// Throws Error if n > kOracleMaxSize or the graph is disconnected (lambda2 at
// the noise level).
FiedlerOracle fiedler_oracle(const SparseLaplacian& L);

// Angle between the line through u and span(basis), for a mutually
// orthogonal basis: atan2(||u - P u||, ||P u||), which equals asin(||u - P u||)
// for unit u. Zero exactly when u is one of the basis vectors.
double subspace_angle(std::span<const double> u, const std::vector<Vector>& basis);

}  // namespace fiedcmg
