#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace cricket_rules {

/// Thin SVD A = U diag(sigma) V^T with sigma non-increasing.
/// U is m×p, V is n×p, p = min(m, n).
struct Svd {
  Eigen::MatrixXd U;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd V;
};

namespace detail {

// Hestenes one-sided Jacobi on the columns of a tall (m >= n) matrix.
inline Svd jacobi_svd_tall(const Eigen::MatrixXd& a) {
  const Eigen::Index m = a.rows(), n = a.cols();
  Eigen::MatrixXd w = a;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  constexpr double kTol = 1e-15;
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double alpha = w.col(p).squaredNorm();
        const double beta = w.col(q).squaredNorm();
        const double gamma = w.col(p).dot(w.col(q));
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= kTol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index i = 0; i < m; ++i) {
          const double wp = w(i, p), wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  Eigen::VectorXd norms(n);
  for (Eigen::Index k = 0; k < n; ++k) norms(k) = w.col(k).norm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return norms(x) > norms(y); });

  Svd out;
  out.U = Eigen::MatrixXd::Zero(m, n);
  out.V = Eigen::MatrixXd::Zero(n, n);
  out.sigma = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.sigma(k) = norms(src);
    if (norms(src) > 0.0) out.U.col(k) = w.col(src) / norms(src);
    out.V.col(k) = v.col(src);
  }
  return out;
}

}  // namespace detail

/// Singular value decomposition by one-sided Jacobi rotations.
/// Deterministic for a given input; accurate to a few ulps at the
/// table sizes used here. Left vectors for zero singular values are zero.
inline Svd jacobi_svd(const Eigen::MatrixXd& a) {
  if (a.rows() >= a.cols()) return detail::jacobi_svd_tall(a);
  Svd t = detail::jacobi_svd_tall(a.transpose());
  return Svd{t.V, t.sigma, t.U};
}

}  // namespace cricket_rules
