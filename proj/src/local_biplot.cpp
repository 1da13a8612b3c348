#include "lbiplot/local_biplot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lbiplot/error.hpp"

namespace lbiplot {

std::string_view to_string(LbVariant v) {
  switch (v) {
    case LbVariant::analytic: return "analytic";
    case LbVariant::positive: return "positive";
    case LbVariant::negative: return "negative";
    case LbVariant::eps_positive: return "eps-positive";
    case LbVariant::eps_negative: return "eps-negative";
  }
  return "unknown";
}

LbVariant parse_lb_variant(std::string_view name) {
  if (name == "analytic") return LbVariant::analytic;
  if (name == "positive") return LbVariant::positive;
  if (name == "negative") return LbVariant::negative;
  if (name == "eps-positive" || name == "eps_positive") return LbVariant::eps_positive;
  if (name == "eps-negative" || name == "eps_negative") return LbVariant::eps_negative;
  throw ValidationError("unknown mode '" + std::string(name) +
                        "' (expected analytic, positive, negative, eps-positive or eps-negative)");
}

void check_mode(const LbMode& mode, const DistanceSpec& spec) {
  if (mode.uses_epsilon() && !(mode.epsilon > 0.0 && std::isfinite(mode.epsilon))) {
    throw ModeError("epsilon must be a positive finite number");
  }
  const Smoothness s = spec.smoothness();
  if (mode.variant == LbVariant::analytic && s != Smoothness::differentiable) {
    throw ModeError("analytic mode requires a differentiable distance; " + std::string(to_string(spec.kind())) +
                    " is " + std::string(to_string(s)) + " (use positive/negative or eps modes)");
  }
  if ((mode.variant == LbVariant::positive || mode.variant == LbVariant::negative) &&
      s == Smoothness::discontinuous) {
    throw ModeError("one-sided limits do not exist for the discontinuous distance " +
                    std::string(to_string(spec.kind())) + "; use eps-positive or eps-negative");
  }
}

namespace {

// d/dz_j of d(x_i, z)^2, as a p x n matrix.
Eigen::MatrixXd squared_distance_gradient(const DistanceSpec& spec, const DataMatrix& data,
                                          const Eigen::Ref<const Eigen::VectorXd>& z) {
  Eigen::MatrixXd diff = (-data.transpose()).colwise() + z;  // column i is z - x_i
  switch (spec.kind()) {
    case DistanceKind::euclidean: return 2.0 * diff;
    case DistanceKind::generalized_euclidean: return 2.0 * spec.form()->q() * diff;
    default: break;
  }
  throw ModeError("no closed-form gradient for " + std::string(to_string(spec.kind())));
}

}  // namespace

LocalBiplotMatrix lb_axes(const MdsSolution& sol, const DistanceToSamples& dist,
                          const Eigen::Ref<const Eigen::VectorXd>& z, const LbMode& mode) {
  const DistanceSpec& spec = dist.spec();
  check_mode(mode, spec);
  if (dist.sample_count() != sol.sample_count()) {
    throw ShapeError("solution and data have different sample counts");
  }
  const Eigen::Index p = dist.variable_count();
  const Eigen::Index n = dist.sample_count();

  const Eigen::VectorXd d0 = dist(z);  // validates z
  const Eigen::MatrixXd proj = sol.projection();  // 1/2 M Lambda^-1

  LocalBiplotMatrix out;
  out.query_point = z;
  out.mode = mode;

  if (mode.variant == LbVariant::analytic) {
    // 1/2 G M Lambda^-1 = G proj
    out.axes = -squared_distance_gradient(spec, dist.data(), z) * proj;
    return out;
  }

  const bool forward = mode.variant == LbVariant::positive || mode.variant == LbVariant::eps_positive;
  Eigen::MatrixXd f(p, n);
  Eigen::VectorXd shifted = z;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double h = mode.uses_epsilon() ? mode.epsilon : one_sided_limit_step(z(j));
    shifted(j) = forward ? z(j) + h : z(j) - h;
    Eigen::VectorXd dj;
    try {
      dj = dist(shifted);
    } catch (const DomainError& e) {
      std::ostringstream os;
      os << "perturbing variable " << j << " by " << (forward ? "+" : "-") << h
         << " leaves the distance's domain: " << e.what();
      throw DomainError(os.str());
    }
    f.row(j) = forward ? (dj - d0).transpose() / h : (d0 - dj).transpose() / h;
    shifted(j) = z(j);
  }
  // F diag(d) M Lambda^-1 = 2 F diag(d) proj
  out.axes = -2.0 * f * d0.asDiagonal() * proj;
  return out;
}

LocalBiplotMatrix lb_axes(const MdsSolution& sol, const DataMatrix& data, const DistanceSpec& spec,
                          const Eigen::Ref<const Eigen::VectorXd>& z, const LbMode& mode) {
  return lb_axes(sol, DistanceToSamples(spec, data), z, mode);
}

std::vector<LocalBiplotMatrix> LbField::computed() const {
  std::vector<LocalBiplotMatrix> out;
  for (const auto& m : matrices) {
    if (m) out.push_back(*m);
  }
  return out;
}

LbField lb_field(const MdsSolution& sol, const DistanceToSamples& dist, const Eigen::MatrixXd& points,
                 const LbMode& mode) {
  check_mode(mode, dist.spec());
  LbField field;
  field.matrices.resize(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    try {
      field.matrices[static_cast<std::size_t>(r)] = lb_axes(sol, dist, points.row(r).transpose(), mode);
    } catch (const Error& e) {
      field.errors.push_back({static_cast<std::size_t>(r), e.what()});
    }
  }
  return field;
}

double lb_constancy(const std::vector<Eigen::MatrixXd>& field) {
  if (field.empty()) throw ValidationError("lb_constancy needs at least one matrix");
  double max_norm = 0.0;
  for (const auto& m : field) {
    if (m.rows() != field[0].rows() || m.cols() != field[0].cols()) {
      throw ShapeError("local biplot matrices have different dimensions");
    }
    max_norm = std::max(max_norm, m.norm());
  }
  if (max_norm == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t a = 0; a < field.size(); ++a) {
    for (std::size_t b = a + 1; b < field.size(); ++b) worst = std::max(worst, (field[a] - field[b]).norm());
  }
  return worst / max_norm;
}

double lb_constancy(const std::vector<LocalBiplotMatrix>& field) {
  std::vector<Eigen::MatrixXd> axes;
  axes.reserve(field.size());
  for (const auto& m : field) axes.push_back(m.axes);
  return lb_constancy(axes);
}

CorrelationBiplot correlation_biplot(const DataMatrix& data, const MdsSolution& sol) {
  const Eigen::Index n = data.rows();
  if (n < 2) throw ValidationError("correlation biplot needs at least two samples");
  if (sol.m_embed.rows() != n) throw ShapeError("data and embedding have different sample counts");
  const Eigen::Index p = data.cols();
  const Eigen::Index k = sol.m_embed.cols();

  const Eigen::MatrixXd xc = data.rowwise() - data.colwise().mean();
  const Eigen::MatrixXd ec = sol.m_embed.rowwise() - sol.m_embed.colwise().mean();
  const Eigen::VectorXd xs = xc.colwise().norm();
  const Eigen::VectorXd es = ec.colwise().norm();

  CorrelationBiplot out;
  out.values = Eigen::MatrixXd::Zero(p, k);
  out.degenerate_rows.assign(static_cast<std::size_t>(p), false);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (xs(j) == 0.0) {
      out.degenerate_rows[static_cast<std::size_t>(j)] = true;
      continue;
    }
    for (Eigen::Index a = 0; a < k; ++a) {
      if (es(a) == 0.0) continue;
      const double r = xc.col(j).dot(ec.col(a)) / (xs(j) * es(a));
      out.values(j, a) = std::clamp(r, -1.0, 1.0);
    }
  }
  return out;
}

Eigen::MatrixXd align_column_signs(const Eigen::MatrixXd& m, const Eigen::MatrixXd& reference) {
  if (m.rows() != reference.rows() || m.cols() != reference.cols()) {
    throw ShapeError("cannot align matrices of different shapes");
  }
  Eigen::MatrixXd out = m;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    if (m.col(c).dot(reference.col(c)) < 0.0) out.col(c) *= -1.0;
  }
  return out;
}

double cosine_similarity(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("cosine similarity needs equal shapes");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.cwiseProduct(b).sum() / (na * nb);
}

}  // namespace lbiplot
