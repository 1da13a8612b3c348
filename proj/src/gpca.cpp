#include "lbiplot/gpca.hpp"

#include <sstream>

#include <Eigen/Eigenvalues>

#include "lbiplot/error.hpp"
#include "lbiplot/mds.hpp"

namespace lbiplot {

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd s = m;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < s.cols(); ++j) s(i, j) = s(j, i) = 0.5 * (m(i, j) + m(j, i));
  }
  return s;
}

}  // namespace

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& m) {
  require_spd(m, "matrix", 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed in symmetric_sqrt");
  const Eigen::MatrixXd& u = es.eigenvectors();
  return symmetrized(u * es.eigenvalues().cwiseSqrt().asDiagonal() * u.transpose());
}

DataMatrix center_columns(const DataMatrix& data) {
  if (data.rows() == 0) return data;
  return data.rowwise() - data.colwise().mean();
}

GpcaSolution gpca(const DataMatrix& data, const GeneralizedForm& q, const std::optional<Eigen::MatrixXd>& d,
                  Eigen::Index k, bool center) {
  const Eigen::Index n = data.rows();
  const Eigen::Index p = data.cols();
  if (q.dim() != p) {
    std::ostringstream os;
    os << "Q is " << q.dim() << "x" << q.dim() << " but the data has " << p << " variables";
    throw ShapeError(os.str());
  }
  if (k < 1) throw ValidationError("k must be positive");

  GpcaSolution sol;
  sol.q_used = q.q();
  if (d) {
    if (d->rows() != n || d->cols() != n) throw ShapeError("D must be n x n");
    require_spd(*d, "D", 0.0);
    sol.d_used = *d;
  } else {
    sol.d_used = Eigen::MatrixXd::Identity(n, n);
  }
  sol.x_used = center ? center_columns(data) : data;
  const Eigen::MatrixXd& x = sol.x_used;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> qes(q.q());
  if (qes.info() != Eigen::Success) throw NumericError("eigensolver failed on Q");
  const Eigen::MatrixXd& qu = qes.eigenvectors();
  const Eigen::MatrixXd q_half = symmetrized(qu * qes.eigenvalues().cwiseSqrt().asDiagonal() * qu.transpose());
  const Eigen::MatrixXd q_inv_half =
      symmetrized(qu * qes.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * qu.transpose());

  const Eigen::MatrixXd xh = x * q_half;  // X Q^{1/2}
  const Eigen::MatrixXd inner = d ? Eigen::MatrixXd(xh.transpose() * (*d) * xh) : Eigen::MatrixXd(xh.transpose() * xh);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(inner));
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed in gpca");

  const Eigen::VectorXd ev = es.eigenvalues().reverse();
  const Eigen::MatrixXd vt = es.eigenvectors().rowwise().reverse();
  const double lambda_max = ev.size() ? ev(0) : 0.0;
  Eigen::Index positive = 0;
  if (lambda_max > 0.0) {
    while (positive < ev.size() && ev(positive) > kEigenRelativeTolerance * lambda_max) ++positive;
  }
  if (k > positive) {
    std::ostringstream os;
    os << "k = " << k << " exceeds the number of positive generalized eigenvalues " << positive;
    throw RankError(os.str(), static_cast<std::size_t>(positive));
  }

  sol.v = q_inv_half * vt.leftCols(k);
  canonicalize_signs(sol.v);
  sol.lambda = ev.head(k);
  sol.scores = x * q.q() * sol.v;
  return sol;
}

}  // namespace lbiplot
