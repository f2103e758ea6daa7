#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace irisfeat {

struct SvdResult {
  Eigen::MatrixXd U;  // n x k, orthonormal columns
  Eigen::VectorXd S;  // k, non-increasing, non-negative
  Eigen::MatrixXd V;  // d x k, orthonormal columns
};

/// Thin orthonormal basis (n x cols) for the column space of `a` via Householder QR.
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& a);

/// One-sided (Hestenes) Jacobi SVD of a matrix with rows >= cols. Singular
/// values come back sorted non-increasing; columns of U for zero singular
/// values are completed to an orthonormal set.
SvdResult jacobi_svd(const Eigen::MatrixXd& a);

struct RandomizedSvdOptions {
  int oversample = 10;
  int power_iters = 4;
  std::uint64_t seed = 0;
};

/// Rank-k randomized SVD with a seeded Gaussian test matrix and QR-stabilized
/// power iterations. Requires 1 <= k and k + oversample <= min(n, d); throws
/// ParameterError otherwise. When k + oversample == min(n, d) the sketch spans
/// the whole range and the result equals the exact truncated SVD up to rounding.
SvdResult randomized_svd(const Eigen::MatrixXd& m, int k, const RandomizedSvdOptions& options = {});

}  // namespace irisfeat
