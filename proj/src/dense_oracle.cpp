#include "fiedcmg/dense_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace fiedcmg {

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const double v : data_) s += v * v;
  return std::sqrt(s);
}

double DenseMatrix::inf_norm() const {
  double m = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += std::abs((*this)(i, j));
    m = std::max(m, s);
  }
  return m;
}

DenseMatrix densify(const SparseLaplacian& L) {
  if (L.size() > kOracleMaxSize) {
    throw Error(fmt::format("dense oracle limited to {} vertices, got {}", kOracleMaxSize, L.size()));
  }
  DenseMatrix A(L.size());
  for (std::size_t row = 0; row < L.size(); ++row) {
    const auto cols = L.row_cols(row);
    const auto vals = L.row_values(row);
    for (std::size_t k = 0; k < cols.size(); ++k) A(row, cols[k]) = vals[k];
  }
  return A;
}

EigenDecomposition jacobi_eigen(const DenseMatrix& input) {
  const std::size_t n = input.size();
  if (n > kOracleMaxSize) {
    throw Error(fmt::format("jacobi: size {} exceeds guard {}", n, kOracleMaxSize));
  }
  const double fro = input.frobenius_norm();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(input(i, j) - input(j, i)) > 1e-12 * fro) {
        throw Error(fmt::format("jacobi: matrix is not symmetric at ({}, {})", i, j));
      }
    }
  }

  DenseMatrix a = input;
  DenseMatrix vt(n);  // rows are eigenvectors
  for (std::size_t i = 0; i < n; ++i) vt(i, i) = 1.0;

  const auto off_mass = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    }
    return std::sqrt(s);
  };

  const double skip = 1e-18 * fro / static_cast<double>(std::max<std::size_t>(n, 1));
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_mass() <= 1e-14 * fro) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= skip) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(p, k);
          const double akq = a(q, k);
          const double np = c * akp - s * akq;
          const double nq = s * akp + c * akq;
          a(p, k) = np;
          a(k, p) = np;
          a(q, k) = nq;
          a(k, q) = nq;
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vp = vt(p, k);
          const double vq = vt(q, k);
          vt(p, k) = c * vp - s * vq;
          vt(q, k) = s * vp + c * vq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  EigenDecomposition out;
  for (const std::size_t k : order) {
    out.eigenvalues.push_back(a(k, k));
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = vt(k, i);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

FiedlerOracle fiedler_oracle(const SparseLaplacian& L) {
  if (L.size() < 2) throw Error("fiedler oracle: need at least two vertices");
  if (!is_connected(L)) throw Error("fiedler oracle: graph is disconnected (lambda2 = 0)");
  const DenseMatrix A = densify(L);
  const double scale = A.inf_norm();

  FiedlerOracle out;
  out.full = jacobi_eigen(A);
  const auto& ev = out.full.eigenvalues;
  out.lambda2 = ev[1];
  if (out.lambda2 <= 1e-12 * scale) {
    throw Error("fiedler oracle: lambda2 is numerically zero; graph is disconnected");
  }
  out.lambda3 = ev.size() > 2 ? ev[2] : ev[1];
  for (std::size_t k = 1; k < ev.size(); ++k) {
    if (std::abs(ev[k] - out.lambda2) <= 1e-8 * scale) out.eigenspace.push_back(out.full.vectors[k]);
  }
  return out;
}

double subspace_angle(std::span<const double> u, const std::vector<Vector>& basis) {
  Vector proj(u.size(), 0.0);
  for (const auto& b : basis) {
    const double bb = dot(b, b);
    if (bb == 0.0) continue;
    const double coef = dot(b, u) / bb;
    for (std::size_t i = 0; i < u.size(); ++i) proj[i] += coef * b[i];
  }
  double r2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - proj[i];
    r2 += d * d;
  }
  return std::atan2(std::sqrt(r2), norm2(proj));
}

}  // namespace fiedcmg
