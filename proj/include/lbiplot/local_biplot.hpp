#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lbiplot/distances.hpp"
#include "lbiplot/mds.hpp"

namespace lbiplot {

enum class LbVariant { analytic, positive, negative, eps_positive, eps_negative };

/// CLI spelling: analytic, positive, negative, eps-positive, eps-negative.
std::string_view to_string(LbVariant v);
LbVariant parse_lb_variant(std::string_view name);

struct LbMode {
  LbVariant variant = LbVariant::analytic;
  /// Step for the eps_* variants. Ignored by the other variants.
  double epsilon = 1.0;

  static LbMode analytic() { return {LbVariant::analytic, 1.0}; }
  static LbMode positive() { return {LbVariant::positive, 1.0}; }
  static LbMode negative() { return {LbVariant::negative, 1.0}; }
  static LbMode eps_positive(double eps) { return {LbVariant::eps_positive, eps}; }
  static LbMode eps_negative(double eps) { return {LbVariant::eps_negative, eps}; }

  bool uses_epsilon() const noexcept {
    return variant == LbVariant::eps_positive || variant == LbVariant::eps_negative;
  }
};

/// Throws ModeError if the mode is not legal for the distance (or epsilon is not positive).
void check_mode(const LbMode& mode, const DistanceSpec& spec);

/// Step used by the positive/negative variants to stand in for the one-sided limit at z_j.
inline double one_sided_limit_step(double zj) { return 1e-7 * (1.0 + std::abs(zj)); }

struct LocalBiplotMatrix {
  Eigen::MatrixXd axes;  // p x k; row j is the axis for variable j
  Eigen::VectorXd query_point;
  LbMode mode;
};

// Local biplot axes: the transposed Jacobian of the supplemental-point map
// f(z) = 1/2 Lambda^-1 M' a(z), with a_i = g_ii - d(x_i, z)^2.
//
//   analytic:          -1/2 G(z) M Lambda^-1,  G_ji = d/dz_j d(x_i, z)^2 (closed form)
//   eps_positive:      -F+(z) diag(d(x_i, z)) M Lambda^-1, forward quotient with step epsilon
//   eps_negative:      same with the backward quotient
//   positive/negative: one-sided quotients at step one_sided_limit_step(z_j)
LocalBiplotMatrix lb_axes(const MdsSolution& sol, const DistanceToSamples& dist,
                          const Eigen::Ref<const Eigen::VectorXd>& z, const LbMode& mode);

LocalBiplotMatrix lb_axes(const MdsSolution& sol, const DataMatrix& data, const DistanceSpec& spec,
                          const Eigen::Ref<const Eigen::VectorXd>& z, const LbMode& mode);

struct PointError {
  std::size_t index;
  std::string message;
};

struct LbField {
  std::vector<std::optional<LocalBiplotMatrix>> matrices;  // one per query point, in order
  std::vector<PointError> errors;

  /// The successfully computed matrices, in order.
  std::vector<LocalBiplotMatrix> computed() const;
};

/// Query points are the rows of `points`. Per-point failures are collected, not thrown.
LbField lb_field(const MdsSolution& sol, const DistanceToSamples& dist, const Eigen::MatrixXd& points,
                 const LbMode& mode);

/// max_{a,b} ||LB_a - LB_b||_F / max_c ||LB_c||_F; 0 iff all matrices are equal.
double lb_constancy(const std::vector<LocalBiplotMatrix>& field);
double lb_constancy(const std::vector<Eigen::MatrixXd>& field);

struct CorrelationBiplot {
  Eigen::MatrixXd values;              // p x k Pearson correlations
  std::vector<bool> degenerate_rows;   // true where the data column has zero variance (row left at 0)
};

/// Correlation of every data column with every embedding column.
CorrelationBiplot correlation_biplot(const DataMatrix& data, const MdsSolution& sol);

/// Flips columns of m so each has non-negative inner product with the same column of reference.
Eigen::MatrixXd align_column_signs(const Eigen::MatrixXd& m, const Eigen::MatrixXd& reference);

/// <a, b>_F / (||a||_F ||b||_F); 0 if either is zero.
double cosine_similarity(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace lbiplot
