#include "lbiplot/distances.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "lbiplot/error.hpp"

namespace lbiplot {

std::string_view to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::euclidean: return "euclidean";
    case DistanceKind::generalized_euclidean: return "geuclidean";
    case DistanceKind::manhattan: return "manhattan";
    case DistanceKind::weighted_unifrac: return "wunifrac";
    case DistanceKind::unweighted_unifrac: return "uunifrac";
  }
  return "unknown";
}

DistanceKind parse_distance_kind(std::string_view name) {
  if (name == "euclidean") return DistanceKind::euclidean;
  if (name == "geuclidean") return DistanceKind::generalized_euclidean;
  if (name == "manhattan") return DistanceKind::manhattan;
  if (name == "wunifrac") return DistanceKind::weighted_unifrac;
  if (name == "uunifrac") return DistanceKind::unweighted_unifrac;
  throw ValidationError("unknown distance '" + std::string(name) +
                        "' (expected euclidean, geuclidean, manhattan, wunifrac or uunifrac)");
}

std::string_view to_string(Smoothness s) {
  switch (s) {
    case Smoothness::differentiable: return "differentiable";
    case Smoothness::continuous_nonsmooth: return "continuous_nonsmooth";
    case Smoothness::discontinuous: return "discontinuous";
  }
  return "unknown";
}

void require_spd(const Eigen::MatrixXd& m, std::string_view what, double sym_tol) {
  const std::string name(what);
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw FormError(name + " must be a non-empty square matrix");
  }
  if (!m.allFinite()) throw FormError(name + " has non-finite entries");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > sym_tol) {
        std::ostringstream os;
        os << name << " is not symmetric at (" << i << ", " << j << ")";
        throw FormError(os.str());
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed while checking " + name);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || !(lo > kPositiveDefiniteTolerance * hi)) {
    std::ostringstream os;
    os << name << " is not positive definite (eigenvalue range [" << lo << ", " << hi << "])";
    throw FormError(os.str());
  }
}

GeneralizedForm::GeneralizedForm(Eigen::MatrixXd q) : q_(std::move(q)) { require_spd(q_, "Q"); }

DistanceSpec DistanceSpec::euclidean() { return DistanceSpec{}; }

DistanceSpec DistanceSpec::manhattan() {
  DistanceSpec s;
  s.kind_ = DistanceKind::manhattan;
  return s;
}

DistanceSpec DistanceSpec::generalized_euclidean(GeneralizedForm form) {
  DistanceSpec s;
  s.kind_ = DistanceKind::generalized_euclidean;
  s.form_ = std::move(form);
  return s;
}

namespace {

void require_tree(DistanceKind kind, const std::shared_ptr<const PhyloTree>& tree) {
  if (!tree) throw ValidationError(std::string(to_string(kind)) + " requires a tree");
}

}  // namespace

DistanceSpec DistanceSpec::weighted_unifrac(std::shared_ptr<const PhyloTree> tree) {
  require_tree(DistanceKind::weighted_unifrac, tree);
  DistanceSpec s;
  s.kind_ = DistanceKind::weighted_unifrac;
  s.incidence_ = std::make_shared<const BranchIncidence>(branch_incidence(*tree));
  s.tree_ = std::move(tree);
  return s;
}

DistanceSpec DistanceSpec::unweighted_unifrac(std::shared_ptr<const PhyloTree> tree) {
  require_tree(DistanceKind::unweighted_unifrac, tree);
  DistanceSpec s;
  s.kind_ = DistanceKind::unweighted_unifrac;
  s.incidence_ = std::make_shared<const BranchIncidence>(branch_incidence(*tree));
  s.tree_ = std::move(tree);
  return s;
}

Smoothness DistanceSpec::smoothness() const noexcept {
  switch (kind_) {
    case DistanceKind::euclidean:
    case DistanceKind::generalized_euclidean: return Smoothness::differentiable;
    case DistanceKind::manhattan:
    case DistanceKind::weighted_unifrac: return Smoothness::continuous_nonsmooth;
    case DistanceKind::unweighted_unifrac: return Smoothness::discontinuous;
  }
  return Smoothness::discontinuous;
}

std::optional<Eigen::Index> DistanceSpec::dimension() const {
  if (form_) return form_->dim();
  if (tree_) return static_cast<Eigen::Index>(tree_->tip_count());
  return std::nullopt;
}

void validate_point(const DistanceSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (auto p = spec.dimension(); p && *p != x.size()) {
    std::ostringstream os;
    os << "point has length " << x.size() << " but the distance expects " << *p;
    throw ShapeError(os.str());
  }
  if (!x.allFinite()) throw DomainError("point has non-finite entries");
  if (spec.is_unifrac()) {
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      if (x(j) < 0.0) {
        throw DomainError("UniFrac input has negative entry " + std::to_string(x(j)) + " at variable " +
                          std::to_string(j));
      }
    }
    if (!(x.sum() > 0.0)) throw DomainError("UniFrac input is an all-zero vector");
  }
}

namespace {

// Weighted: descendant relative abundance per branch. Unweighted: 0/1 presence per branch.
Eigen::VectorXd branch_profile(const DistanceSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const auto& inc = spec.incidence()->matrix;
  if (spec.kind() == DistanceKind::weighted_unifrac) {
    return inc * (x / x.sum());
  }
  Eigen::VectorXd present = (x.array() > 0.0).cast<double>();
  return ((inc * present).array() > 0.0).cast<double>();
}

double profile_distance(const DistanceSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& a,
                        const Eigen::Ref<const Eigen::VectorXd>& b) {
  const auto& len = spec.incidence()->lengths;
  const double unique = len.dot((a - b).cwiseAbs());
  if (spec.kind() == DistanceKind::weighted_unifrac) return unique;
  if (unique == 0.0) return 0.0;
  const double observed = len.dot(a.cwiseMax(b));
  return unique / observed;
}

double direct_distance(const DistanceSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                       const Eigen::Ref<const Eigen::VectorXd>& y) {
  switch (spec.kind()) {
    case DistanceKind::euclidean: return (x - y).norm();
    case DistanceKind::manhattan: return (x - y).cwiseAbs().sum();
    case DistanceKind::generalized_euclidean: {
      const Eigen::VectorXd diff = x - y;
      return std::sqrt(std::max(0.0, diff.dot(spec.form()->q() * diff)));
    }
    default: break;
  }
  return 0.0;
}

}  // namespace

double eval(const DistanceSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
            const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) throw ShapeError("points have different lengths");
  validate_point(spec, x);
  validate_point(spec, y);
  if (spec.is_unifrac()) return profile_distance(spec, branch_profile(spec, x), branch_profile(spec, y));
  return direct_distance(spec, x, y);
}

Eigen::MatrixXd squared_distance_matrix(const DistanceSpec& spec, const DataMatrix& data) {
  const Eigen::Index n = data.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    try {
      validate_point(spec, data.row(i).transpose());
    } catch (const DomainError& e) {
      throw DomainError("sample " + std::to_string(i) + ": " + e.what());
    } catch (const ShapeError& e) {
      throw ShapeError("sample " + std::to_string(i) + ": " + e.what());
    }
  }

  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(n, n);
  if (spec.is_unifrac()) {
    // All branch profiles at once: B x n.
    const auto& inc = spec.incidence()->matrix;
    Eigen::MatrixXd profiles;
    if (spec.kind() == DistanceKind::weighted_unifrac) {
      Eigen::MatrixXd rel = data.transpose();
      for (Eigen::Index i = 0; i < n; ++i) rel.col(i) /= rel.col(i).sum();
      profiles = inc * rel;
    } else {
      Eigen::MatrixXd present = (data.transpose().array() > 0.0).cast<double>();
      profiles = ((inc * present).array() > 0.0).cast<double>();
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double d = profile_distance(spec, profiles.col(i), profiles.col(j));
        delta(i, j) = delta(j, i) = d * d;
      }
    }
    return delta;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = direct_distance(spec, data.row(i).transpose(), data.row(j).transpose());
      delta(i, j) = delta(j, i) = d * d;
    }
  }
  return delta;
}

DistanceToSamples::DistanceToSamples(DistanceSpec spec, const DataMatrix& data)
    : spec_(std::move(spec)), data_(data) {
  if (auto p = spec_.dimension(); p && *p != data_.cols()) {
    std::ostringstream os;
    os << "data has " << data_.cols() << " columns but the distance expects " << *p;
    throw ShapeError(os.str());
  }
  if (spec_.is_unifrac()) {
    profiles_.resize(spec_.incidence()->matrix.rows(), data_.rows());
    for (Eigen::Index i = 0; i < data_.rows(); ++i) {
      validate_point(spec_, data_.row(i).transpose());
      profiles_.col(i) = branch_profile(spec_, data_.row(i).transpose());
    }
  }
}

Eigen::VectorXd DistanceToSamples::operator()(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != data_.cols()) {
    std::ostringstream os;
    os << "point has length " << z.size() << " but the data has " << data_.cols() << " variables";
    throw ShapeError(os.str());
  }
  validate_point(spec_, z);
  const Eigen::Index n = data_.rows();
  Eigen::VectorXd out(n);
  if (spec_.is_unifrac()) {
    const Eigen::VectorXd pz = branch_profile(spec_, z);
    for (Eigen::Index i = 0; i < n; ++i) out(i) = profile_distance(spec_, profiles_.col(i), pz);
    return out;
  }
  for (Eigen::Index i = 0; i < n; ++i) out(i) = direct_distance(spec_, data_.row(i).transpose(), z);
  return out;
}

Eigen::MatrixXd shared_branch_length(const PhyloTree& tree) {
  const BranchIncidence inc = branch_incidence(tree);
  return inc.matrix.transpose() * inc.lengths.asDiagonal() * inc.matrix;
}

GeneralizedForm tree_covariance_q(const PhyloTree& tree, double blend) {
  if (!(blend >= 0.0 && blend <= 1.0)) throw ValidationError("blend must lie in [0, 1]");
  const auto p = static_cast<Eigen::Index>(tree.tip_count());
  if (blend == 0.0) return GeneralizedForm::identity(p);

  Eigen::MatrixXd s = shared_branch_length(tree);
  const double tr = s.trace();
  if (!(tr > 0.0)) throw FormError("tree has zero total tip depth; use blend < 1");
  s *= static_cast<double>(p) / tr;
  const Eigen::MatrixXd mix = (1.0 - blend) * Eigen::MatrixXd::Identity(p, p) + blend * s;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mix);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed in tree_covariance_q");
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (!(ev.minCoeff() > kPositiveDefiniteTolerance * ev.maxCoeff())) {
    throw FormError("tree covariance is singular at blend = " + std::to_string(blend) +
                    "; choose blend < 1");
  }
  Eigen::MatrixXd q = es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) q(j, i) = q(i, j) = 0.5 * (q(i, j) + q(j, i));
  }
  return GeneralizedForm(std::move(q));
}

}  // namespace lbiplot
