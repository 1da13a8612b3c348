#include "lbiplot/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "lbiplot/error.hpp"

namespace lbiplot {

namespace {

constexpr double kTailMass = 1e-12;
constexpr std::uint64_t kMaxSupport = 1u << 22;

double log_unnormalized(std::uint64_t y, double mu, double s) {
  const double base = 0.5 * std::log(s) - s * mu;
  if (y == 0) return base;
  const double yd = static_cast<double>(y);
  const double ly = std::log(yd);
  return base - yd + yd * ly - std::lgamma(yd + 1.0) + s * yd * (1.0 + std::log(mu) - ly);
}

}  // namespace

DoublePoisson::DoublePoisson(double mu, double s) : mu_(mu), s_(s) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ValidationError("double Poisson mean must be finite and >= 0");
  if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("double Poisson dispersion must be positive");
  if (mu == 0.0) {
    pmf_ = {1.0};
    cdf_ = {1.0};
    return;
  }

  // Unnormalized log pmf until the terms past the mode are negligible.
  std::vector<double> logs;
  double peak = -INFINITY;
  for (std::uint64_t y = 0; y < kMaxSupport; ++y) {
    const double l = log_unnormalized(y, mu, s);
    logs.push_back(l);
    peak = std::max(peak, l);
    if (static_cast<double>(y) > mu && l < peak - 60.0) break;
  }
  pmf_.resize(logs.size());
  double total = 0.0;
  for (std::size_t y = 0; y < logs.size(); ++y) {
    pmf_[y] = std::exp(logs[y] - peak);
    total += pmf_[y];
  }
  for (double& v : pmf_) v /= total;

  double acc = 0.0;
  for (double v : pmf_) {
    acc += v;
    cdf_.push_back(acc);
    if (acc > 1.0 - kTailMass) break;
  }
}

double DoublePoisson::pmf(std::uint64_t y) const { return y < pmf_.size() ? pmf_[y] : 0.0; }

double DoublePoisson::mean() const {
  double m = 0.0;
  double mass = 0.0;
  for (std::size_t y = 0; y < cdf_.size(); ++y) {
    m += static_cast<double>(y) * pmf_[y];
    mass += pmf_[y];
  }
  return m / mass;
}

double DoublePoisson::variance() const {
  const double m = mean();
  double v = 0.0;
  double mass = 0.0;
  for (std::size_t y = 0; y < cdf_.size(); ++y) {
    const double dy = static_cast<double>(y) - m;
    v += dy * dy * pmf_[y];
    mass += pmf_[y];
  }
  return v / mass;
}

std::uint64_t DoublePoisson::quantile(double u) const {
  // Scale u onto the truncated mass so every draw lands inside the table.
  const double target = u * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
  if (it == cdf_.end()) --it;
  return static_cast<std::uint64_t>(it - cdf_.begin());
}

std::uint64_t double_poisson_sample(double mu, double s, std::mt19937_64& rng) {
  if (mu == 0.0) return 0;
  return DoublePoisson(mu, s)(rng);
}

void SimulationConfig::validate() const {
  if (depth < 1) throw ValidationError("depth must be at least 1");
  if (depth > 16) throw ValidationError("depth must be at most 16");
  if (n < 2) throw ValidationError("n must be at least 2");
  if (n % 2 != 0) throw ValidationError("n must be even");
  if (!(c1 >= 0.0) || !std::isfinite(c1)) throw ValidationError("c1 must be finite and non-negative");
  if (!std::isfinite(c2)) throw ValidationError("c2 must be finite");
  if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("s must be positive");
}

SimulatedDataset simulate(const SimulationConfig& config) {
  config.validate();
  const int p = config.p();
  const int n = config.n;

  SimulatedDataset out{DataMatrix::Zero(n, p), build_balanced_tree(config.depth, 1.0), {}, {}, {}, {}, config};
  out.group.resize(static_cast<std::size_t>(n));
  out.shallow.resize(static_cast<std::size_t>(p));
  out.deep.resize(static_cast<std::size_t>(p));
  for (int i = 0; i < n; ++i) out.group[static_cast<std::size_t>(i)] = i < n / 2 ? 1 : 0;
  // Tips 2m and 2m+1 are sisters in the balanced tree.
  for (int j = 0; j < p; ++j) {
    out.shallow[static_cast<std::size_t>(j)] = j % 2 == 0 ? 1 : 0;
    out.deep[static_cast<std::size_t>(j)] = j < p / 2 ? 1 : 0;
  }

  out.mean_matrix.resize(n, p);
  for (int i = 0; i < n; ++i) {
    const int a = out.group[static_cast<std::size_t>(i)];
    for (int j = 0; j < p; ++j) {
      const int sh = out.shallow[static_cast<std::size_t>(j)];
      const int dp = out.deep[static_cast<std::size_t>(j)];
      const double exclusion = a * sh + (1 - a) * (1 - sh);
      const double mass = a * dp + (1 - a) * (1 - dp);
      out.mean_matrix(i, j) = config.c1 * exclusion * std::exp(config.c2 * mass);
    }
  }

  std::mt19937_64 rng(config.seed);
  std::map<double, DoublePoisson> laws;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) {
      const double mu = out.mean_matrix(i, j);
      auto it = laws.find(mu);
      if (it == laws.end()) it = laws.emplace(mu, DoublePoisson(mu, config.s)).first;
      // Every cell consumes one draw so the stream layout does not depend on A.
      out.data(i, j) = static_cast<double>(it->second(rng));
    }
  }
  return out;
}

}  // namespace lbiplot
