#include "lbiplot/mds.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "lbiplot/error.hpp"

namespace lbiplot {

Eigen::MatrixXd double_center(const Eigen::MatrixXd& delta) {
  if (delta.rows() != delta.cols()) throw ShapeError("squared-distance matrix must be square");
  const Eigen::Index n = delta.rows();
  if (n == 0) return Eigen::MatrixXd();
  const Eigen::VectorXd row_mean = delta.rowwise().mean();
  // Reusing the row means for symmetric input keeps g exactly symmetric.
  const Eigen::RowVectorXd col_mean =
      delta == delta.transpose() ? Eigen::RowVectorXd(row_mean.transpose()) : Eigen::RowVectorXd(delta.colwise().mean());
  const double grand = delta.mean();
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      g(i, j) = -0.5 * (delta(i, j) - (row_mean(i) + col_mean(j)) + grand);
    }
  }
  return g;
}

void canonicalize_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      // strict comparison keeps the first index on ties
      if (std::abs(vectors(r, c)) > best) {
        best = std::abs(vectors(r, c));
        arg = r;
      }
    }
    if (vectors.rows() > 0 && vectors(arg, c) < 0.0) vectors.col(c) *= -1.0;
  }
}

MdsSolution classical_mds(const Eigen::MatrixXd& delta, Eigen::Index k) {
  if (k < 1) throw ValidationError("embedding dimension k must be positive");
  const Eigen::MatrixXd g = double_center(delta);
  const Eigen::Index n = g.rows();
  if (n == 0) throw ShapeError("no samples");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed on the Gram matrix");

  // Eigen returns ascending order.
  const Eigen::VectorXd ev = es.eigenvalues().reverse();
  const Eigen::MatrixXd vecs = es.eigenvectors().rowwise().reverse();

  MdsSolution sol;
  sol.all_eigenvalues = ev;
  sol.gram_diag = g.diagonal();

  const double lambda_max = ev.size() > 0 ? ev(0) : 0.0;
  const double tau = kEigenRelativeTolerance * lambda_max;
  Eigen::Index m = 0;
  if (lambda_max > 0.0) {
    while (m < n && ev(m) > tau) ++m;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ev(i) > 0.0) sol.inertia.positive += ev(i);
    if (ev(i) < 0.0) sol.inertia.negative -= ev(i);
    if (i >= m) sol.inertia.discarded += std::abs(ev(i));
  }

  if (k > m) {
    std::ostringstream os;
    os << "k = " << k << " exceeds the retained rank " << m;
    throw RankError(os.str(), static_cast<std::size_t>(m));
  }

  sol.k = k;
  sol.lambda = ev.head(m);
  sol.b = vecs.leftCols(m);
  canonicalize_signs(sol.b);
  sol.m_embed = sol.b.leftCols(k) * sol.lambda.head(k).cwiseSqrt().asDiagonal();
  return sol;
}

Eigen::MatrixXd MdsSolution::projection() const {
  return 0.5 * m_embed * lambda.head(k).cwiseInverse().asDiagonal();
}

Eigen::VectorXd embed_from_squared_distances(const MdsSolution& sol,
                                             const Eigen::Ref<const Eigen::VectorXd>& sq_dist) {
  if (sq_dist.size() != sol.sample_count()) throw ShapeError("squared-distance vector has wrong length");
  const Eigen::VectorXd a = sol.gram_diag - sq_dist;
  return 0.5 * sol.lambda.head(sol.k).cwiseInverse().asDiagonal() * (sol.m_embed.transpose() * a);
}

Eigen::VectorXd embed_supplemental(const MdsSolution& sol, const DistanceToSamples& dist,
                                   const Eigen::Ref<const Eigen::VectorXd>& z) {
  if (dist.sample_count() != sol.sample_count()) {
    throw ShapeError("solution and data have different sample counts");
  }
  const Eigen::VectorXd d = dist(z);
  return embed_from_squared_distances(sol, d.cwiseProduct(d));
}

Eigen::VectorXd embed_supplemental(const MdsSolution& sol, const DataMatrix& data, const DistanceSpec& spec,
                                   const Eigen::Ref<const Eigen::VectorXd>& z) {
  return embed_supplemental(sol, DistanceToSamples(spec, data), z);
}

}  // namespace lbiplot
