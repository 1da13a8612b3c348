#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lbiplot/distances.hpp"
#include "lbiplot/tree.hpp"

namespace lbiplot {

// Efron's double Poisson with mean parameter mu and dispersion s:
//   f(y) ∝ s^{1/2} e^{-s mu} (e^{-y} y^y / y!) (e mu / y)^{s y},
// normalized by direct summation over the support. s = 1 is Poisson(mu).
class DoublePoisson {
public:
  DoublePoisson(double mu, double s);

  double mu() const noexcept { return mu_; }
  double s() const noexcept { return s_; }
  /// Normalized pmf over 0..support_max(); zero beyond.
  double pmf(std::uint64_t y) const;
  double mean() const;
  double variance() const;
  std::uint64_t support_max() const noexcept { return cdf_.empty() ? 0 : cdf_.size() - 1; }

  /// Inverse-CDF draw from a uniform in [0, 1).
  std::uint64_t quantile(double u) const;

  template <class Rng>
  std::uint64_t operator()(Rng& rng) const {
    return quantile(uniform01(rng));
  }

  /// 53-bit uniform in [0, 1) from a 64-bit engine; identical on every platform.
  template <class Rng>
  static double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }

private:
  double mu_;
  double s_;
  std::vector<double> pmf_;
  std::vector<double> cdf_;  // truncated where cumulative mass exceeds 1 - 1e-12
};

/// One draw; mu = 0 always returns 0.
std::uint64_t double_poisson_sample(double mu, double s, std::mt19937_64& rng);

struct SimulationConfig {
  int depth = 5;  // p = 2^depth
  int n = 20;     // even; first n/2 samples form group 1
  double c1 = 10.0;
  double c2 = 1.0;
  double s = 2.0;
  std::uint64_t seed = 1;

  int p() const { return 1 << depth; }
  /// Throws ValidationError naming the first violated constraint.
  void validate() const;
};

struct SimulatedDataset {
  DataMatrix data;  // n x p counts
  PhyloTree tree;
  std::vector<int> group;    // 1_a
  std::vector<int> shallow;  // 1 for the left tip of each sister pair
  std::vector<int> deep;     // 1 for tips under the root's left child
  Eigen::MatrixXd mean_matrix;  // A
  SimulationConfig config;
};

/// Balanced tree, two sample groups with a deep mass shift and a shallow exclusion
/// effect, counts drawn from DoublePoisson(a_ij, s). Deterministic given the seed.
SimulatedDataset simulate(const SimulationConfig& config);

}  // namespace lbiplot
