#pragma once

#include <optional>

#include <Eigen/Dense>

#include "lbiplot/distances.hpp"

namespace lbiplot {

// Generalized PCA of the triple (X, Q, D):
//   X' D X Q V = V Lambda,  V' Q V = I.
struct GpcaSolution {
  Eigen::MatrixXd v;       // p x k normalized generalized principal axes
  Eigen::VectorXd lambda;  // k eigenvalues, non-increasing
  Eigen::MatrixXd scores;  // n x k, X Q V (X centered if requested)
  Eigen::MatrixXd q_used;
  Eigen::MatrixXd d_used;
  Eigen::MatrixXd x_used;  // the data actually decomposed (after optional centering)
};

/// Symmetric square root of an SPD matrix via its eigendecomposition.
Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& m);

/// Built as V = Q^{-1/2} Vt with Vt the eigenvectors of Q^{1/2} X' D X Q^{1/2}.
/// D defaults to I_n. Axis signs follow the largest-entry-positive convention on V.
GpcaSolution gpca(const DataMatrix& data, const GeneralizedForm& q, const std::optional<Eigen::MatrixXd>& d,
                  Eigen::Index k, bool center = true);

/// Subtracts column means.
DataMatrix center_columns(const DataMatrix& data);

}  // namespace lbiplot
