#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

namespace testutil {

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = nd(rng);
  return m;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n) { return random_matrix(rng, n, 1).col(0); }

inline Eigen::MatrixXd centered(const Eigen::MatrixXd& x) { return x.rowwise() - x.colwise().mean(); }

// Well-conditioned SPD matrix, exactly symmetric.
inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, Eigen::Index p) {
  const Eigen::MatrixXd a = random_matrix(rng, p, p);
  Eigen::MatrixXd q = a * a.transpose() / static_cast<double>(p) + Eigen::MatrixXd::Identity(p, p);
  return 0.5 * (q + q.transpose());
}

// Non-negative integer-valued counts with no all-zero row.
inline Eigen::MatrixXd random_counts(std::mt19937_64& rng, Eigen::Index n, Eigen::Index p) {
  std::poisson_distribution<int> pois(4.0);
  Eigen::MatrixXd m(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) m(i, j) = pois(rng);
    if (m.row(i).sum() == 0) m(i, 0) = 1;
  }
  return m;
}

// max |a - b| after flipping each column of a to best match b.
inline double max_dev_up_to_sign(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    const double plus = (a.col(c) - b.col(c)).cwiseAbs().maxCoeff();
    const double minus = (a.col(c) + b.col(c)).cwiseAbs().maxCoeff();
    worst = std::max(worst, std::min(plus, minus));
  }
  return worst;
}

}  // namespace testutil
