#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "lbiplot/tree.hpp"

namespace lbiplot {

/// n x p samples-by-variables; row i is sample x_i.
using DataMatrix = Eigen::MatrixXd;

enum class DistanceKind { euclidean, generalized_euclidean, manhattan, weighted_unifrac, unweighted_unifrac };

enum class Smoothness { differentiable, continuous_nonsmooth, discontinuous };

/// CLI spelling: euclidean, geuclidean, manhattan, wunifrac, uunifrac.
std::string_view to_string(DistanceKind kind);
DistanceKind parse_distance_kind(std::string_view name);
std::string_view to_string(Smoothness s);

/// Relative tolerance for positive-definiteness checks (fraction of the largest eigenvalue).
inline constexpr double kPositiveDefiniteTolerance = 1e-10;

// Symmetric positive-definite Q defining d_Q(x, y) = sqrt((x-y)' Q (x-y)).
class GeneralizedForm {
public:
  /// Throws FormError unless q is exactly symmetric and positive definite.
  explicit GeneralizedForm(Eigen::MatrixXd q);

  const Eigen::MatrixXd& q() const noexcept { return q_; }
  Eigen::Index dim() const noexcept { return q_.rows(); }
  static GeneralizedForm identity(Eigen::Index p) { return GeneralizedForm(Eigen::MatrixXd::Identity(p, p)); }

private:
  Eigen::MatrixXd q_;
};

/// Throws FormError (with `what` in the message) unless m is symmetric positive definite.
void require_spd(const Eigen::MatrixXd& m, std::string_view what, double sym_tol = 0.0);

// A distance function together with whatever it needs (Q or tree).
// Immutable once built; cheap to copy.
class DistanceSpec {
public:
  static DistanceSpec euclidean();
  static DistanceSpec manhattan();
  static DistanceSpec generalized_euclidean(GeneralizedForm form);
  static DistanceSpec weighted_unifrac(std::shared_ptr<const PhyloTree> tree);
  static DistanceSpec unweighted_unifrac(std::shared_ptr<const PhyloTree> tree);

  DistanceKind kind() const noexcept { return kind_; }
  Smoothness smoothness() const noexcept;
  bool is_unifrac() const noexcept {
    return kind_ == DistanceKind::weighted_unifrac || kind_ == DistanceKind::unweighted_unifrac;
  }
  const GeneralizedForm* form() const noexcept { return form_ ? &*form_ : nullptr; }
  const PhyloTree* tree() const noexcept { return tree_.get(); }
  const BranchIncidence* incidence() const noexcept { return incidence_.get(); }

  /// Number of variables the spec is tied to, if any (Q dimension or tip count).
  std::optional<Eigen::Index> dimension() const;

private:
  DistanceSpec() = default;

  DistanceKind kind_ = DistanceKind::euclidean;
  std::optional<GeneralizedForm> form_;
  std::shared_ptr<const PhyloTree> tree_;
  std::shared_ptr<const BranchIncidence> incidence_;
};

/// d(x, y). Exactly 0 when x == y.
double eval(const DistanceSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
            const Eigen::Ref<const Eigen::VectorXd>& y);

/// Checks that x is a legal argument for the spec; throws DomainError/ShapeError otherwise.
void validate_point(const DistanceSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x);

/// delta(i, j) = d(x_i, x_j)^2. Symmetric with an exactly zero diagonal.
Eigen::MatrixXd squared_distance_matrix(const DistanceSpec& spec, const DataMatrix& data);

/// Distances from a fixed sample set to arbitrary query points. Per-sample
/// work (UniFrac branch profiles) is done once at construction.
class DistanceToSamples {
public:
  DistanceToSamples(DistanceSpec spec, const DataMatrix& data);

  /// Returns (d(x_1, z), ..., d(x_n, z)). Throws DomainError if z is not a legal input.
  Eigen::VectorXd operator()(const Eigen::Ref<const Eigen::VectorXd>& z) const;

  const DistanceSpec& spec() const noexcept { return spec_; }
  const DataMatrix& data() const noexcept { return data_; }
  Eigen::Index sample_count() const noexcept { return data_.rows(); }
  Eigen::Index variable_count() const noexcept { return data_.cols(); }

private:
  DistanceSpec spec_;
  DataMatrix data_;
  Eigen::MatrixXd profiles_;  // UniFrac only: B x n branch profiles
};

/// S(i, j) = total length of branches shared by the root paths of tips i and j.
Eigen::MatrixXd shared_branch_length(const PhyloTree& tree);

/// Q = ((1 - blend) I + blend * S_n)^-1 with S_n = S * p / trace(S).
/// Stand-in for tree-aware generalized Euclidean forms; blend = 0 gives Q = I.
GeneralizedForm tree_covariance_q(const PhyloTree& tree, double blend);

}  // namespace lbiplot
