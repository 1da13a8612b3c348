#pragma once

#include <Eigen/Dense>

#include "lbiplot/distances.hpp"

namespace lbiplot {

/// Eigenvalues at or below this fraction of the largest are treated as zero rank.
inline constexpr double kEigenRelativeTolerance = 1e-9;

struct InertiaReport {
  double positive = 0.0;   // sum of positive eigenvalues
  double negative = 0.0;   // sum of |negative eigenvalues|
  double discarded = 0.0;  // sum of |eigenvalues| not retained (near-zero and negative)
};

// Classical scaling of a squared-distance matrix. Retained eigenpairs are
// those above kEigenRelativeTolerance * lambda_max, in descending order;
// each eigenvector's largest-magnitude entry is positive.
struct MdsSolution {
  Eigen::MatrixXd b;          // n x m, retained eigenvectors
  Eigen::VectorXd lambda;     // m retained eigenvalues, non-increasing
  Eigen::MatrixXd m_embed;    // n x k, B_{.,1:k} Lambda^{1/2}
  Eigen::VectorXd gram_diag;  // diagonal of the Gram matrix
  Eigen::VectorXd all_eigenvalues;  // full spectrum, non-increasing
  InertiaReport inertia;
  Eigen::Index k = 0;

  Eigen::Index sample_count() const noexcept { return b.rows(); }
  Eigen::Index retained_rank() const noexcept { return lambda.size(); }
  /// Eigenvalues used by the k-dimensional embedding.
  auto lambda_k() const { return lambda.head(k); }
  /// n x k matrix P such that f(z) = P' a. Equals 1/2 M Lambda_k^-1.
  Eigen::MatrixXd projection() const;
};

/// -1/2 C Delta C with C = I - 11'/n.
Eigen::MatrixXd double_center(const Eigen::MatrixXd& delta);

/// Throws RankError when k exceeds the retained rank, NumericError if the eigensolver fails.
MdsSolution classical_mds(const Eigen::MatrixXd& delta, Eigen::Index k);

/// Flips eigenvector columns so the entry of largest magnitude is positive (first one on ties).
void canonicalize_signs(Eigen::MatrixXd& vectors);

/// Gower's add-a-point map given the squared distances d(x_i, z)^2 to every sample.
Eigen::VectorXd embed_from_squared_distances(const MdsSolution& sol,
                                             const Eigen::Ref<const Eigen::VectorXd>& sq_dist);

/// Embeds z into the fixed solution built from (data, spec). Never refits.
Eigen::VectorXd embed_supplemental(const MdsSolution& sol, const DistanceToSamples& dist,
                                   const Eigen::Ref<const Eigen::VectorXd>& z);

Eigen::VectorXd embed_supplemental(const MdsSolution& sol, const DataMatrix& data, const DistanceSpec& spec,
                                   const Eigen::Ref<const Eigen::VectorXd>& z);

}  // namespace lbiplot
