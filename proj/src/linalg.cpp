#include "irisfeat/linalg.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "irisfeat/errors.hpp"
#include "irisfeat/rng.hpp"

namespace irisfeat {

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& a) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
}

SvdResult jacobi_svd(const Eigen::MatrixXd& input) {
  const Eigen::Index rows = input.rows();
  const Eigen::Index cols = input.cols();
  if (rows < cols) throw ParameterError("jacobi_svd needs rows >= cols");

  Eigen::MatrixXd a = input;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(cols, cols);
  constexpr double kTol = 1e-15;
  constexpr int kMaxSweeps = 80;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < cols; ++p) {
      for (Eigen::Index q = p + 1; q < cols; ++q) {
        const double alpha = a.col(p).squaredNorm();
        const double beta = a.col(q).squaredNorm();
        const double gamma = a.col(p).dot(a.col(q));
        if (gamma == 0.0 || std::abs(gamma) <= kTol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index i = 0; i < rows; ++i) {
          const double ap = a(i, p), aq = a(i, q);
          a(i, p) = c * ap - s * aq;
          a(i, q) = s * ap + c * aq;
        }
        for (Eigen::Index i = 0; i < cols; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(cols));
  std::iota(order.begin(), order.end(), 0);
  Eigen::VectorXd norms(cols);
  for (Eigen::Index j = 0; j < cols; ++j) norms(j) = a.col(j).norm();
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return norms(x) > norms(y); });

  SvdResult out{Eigen::MatrixXd::Zero(rows, cols), Eigen::VectorXd(cols), Eigen::MatrixXd(cols, cols)};
  const double cutoff = (cols > 0 ? norms.maxCoeff() : 0.0) * 1e-300;
  for (Eigen::Index j = 0; j < cols; ++j) {
    const auto src = order[static_cast<std::size_t>(j)];
    out.S(j) = norms(src);
    out.V.col(j) = v.col(src);
    if (norms(src) > cutoff && norms(src) > 0.0) out.U.col(j) = a.col(src) / norms(src);
  }

  // Complete U where singular values vanished.
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (out.U.col(j).squaredNorm() > 0.5) continue;
    for (Eigen::Index e = 0; e < rows; ++e) {
      Eigen::VectorXd cand = Eigen::VectorXd::Unit(rows, e);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i < cols; ++i) {
          if (i != j && out.U.col(i).squaredNorm() > 0.5) cand -= out.U.col(i).dot(cand) * out.U.col(i);
        }
      }
      if (cand.norm() > 1e-6) {
        out.U.col(j) = cand.normalized();
        break;
      }
    }
  }
  return out;
}

SvdResult randomized_svd(const Eigen::MatrixXd& m, int k, const RandomizedSvdOptions& options) {
  const Eigen::Index n = m.rows();
  const Eigen::Index d = m.cols();
  const Eigen::Index smaller = std::min(n, d);
  if (k < 1 || k > smaller) {
    throw ParameterError("randomized_svd: k=" + std::to_string(k) + " outside [1, " + std::to_string(smaller) + "]");
  }
  if (options.oversample < 0 || options.power_iters < 0) {
    throw ParameterError("randomized_svd: oversample and power_iters must be >= 0");
  }
  if (k + options.oversample > smaller) {
    throw ParameterError("randomized_svd: k + oversample = " + std::to_string(k + options.oversample) +
                         " exceeds min(n, d) = " + std::to_string(smaller));
  }
  const Eigen::Index sketch = k + options.oversample;

  Rng rng(options.seed);
  Eigen::MatrixXd omega(d, sketch);
  for (Eigen::Index j = 0; j < sketch; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) omega(i, j) = rng.normal();
  }

  Eigen::MatrixXd q = orthonormal_basis(m * omega);
  // A full-width sketch already spans range(m); power steps would not change it.
  if (sketch < smaller) {
    for (int it = 0; it < options.power_iters; ++it) {
      const Eigen::MatrixXd z = orthonormal_basis(m.transpose() * q);
      q = orthonormal_basis(m * z);
    }
  }

  // B = Q^T M (sketch x d). Factor B^T = Q2 R so B = R^T Q2^T and only the
  // small R^T needs a dense SVD.
  const Eigen::MatrixXd bt = m.transpose() * q;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(bt);
  const Eigen::MatrixXd q2 = qr.householderQ() * Eigen::MatrixXd::Identity(d, sketch);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(sketch).triangularView<Eigen::Upper>();
  const SvdResult core = jacobi_svd(r.transpose());

  SvdResult out;
  out.U = q * core.U.leftCols(k);
  out.S = core.S.head(k);
  out.V = q2 * core.V.leftCols(k);
  return out;
}

}  // namespace irisfeat
