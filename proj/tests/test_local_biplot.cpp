#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "lbiplot/error.hpp"
#include "lbiplot/gpca.hpp"
#include "lbiplot/local_biplot.hpp"
#include "lbiplot/simulate.hpp"

using namespace lbiplot;

namespace {

struct Fit {
  Eigen::MatrixXd x;
  DistanceToSamples dist;
  MdsSolution sol;
};

Fit fit(const DistanceSpec& spec, const Eigen::MatrixXd& x, Eigen::Index k) {
  return Fit{x, DistanceToSamples(spec, x), classical_mds(squared_distance_matrix(spec, x), k)};
}

// Oracle: central differences of the supplemental map, transposed.
Eigen::MatrixXd fd_jacobian_t(const Fit& f, const Eigen::VectorXd& z, double h) {
  Eigen::MatrixXd jt(z.size(), f.sol.k);
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    Eigen::VectorXd up = z, down = z;
    up(j) += h;
    down(j) -= h;
    jt.row(j) = (embed_supplemental(f.sol, f.dist, up) - embed_supplemental(f.sol, f.dist, down)).transpose() / (2 * h);
  }
  return jt;
}

}  // namespace

TEST_CASE("analytic axes match finite differences") {
  std::mt19937_64 rng(21);
  const Eigen::MatrixXd x = testutil::random_matrix(rng, 14, 5);
  for (const auto& spec : {DistanceSpec::euclidean(),
                           DistanceSpec::generalized_euclidean(GeneralizedForm(testutil::random_spd(rng, 5)))}) {
    const Fit f = fit(spec, x, 3);
    for (int r = 0; r < 20; ++r) {
      const Eigen::VectorXd z = 2.0 * testutil::random_vector(rng, 5);
      const Eigen::MatrixXd lb = lb_axes(f.sol, f.dist, z, LbMode::analytic()).axes;
      CHECK((lb - fd_jacobian_t(f, z, 1e-5)).cwiseAbs().maxCoeff() <= 1e-6);
    }
  }
}

TEST_CASE("euclidean axes are the principal axes") {
  std::mt19937_64 rng(22);
  const Eigen::MatrixXd x = testutil::centered(testutil::random_matrix(rng, 20, 6));
  const Fit f = fit(DistanceSpec::euclidean(), x, 3);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
  const Eigen::MatrixXd v = svd.matrixV().leftCols(3);
  std::vector<LocalBiplotMatrix> field;
  for (int r = 0; r < 10; ++r) {
    field.push_back(lb_axes(f.sol, f.dist, 5.0 * testutil::random_vector(rng, 6), LbMode::analytic()));
    CHECK(testutil::max_dev_up_to_sign(field.back().axes, v) <= 1e-8);
  }
  CHECK(lb_constancy(field) <= 1e-8);
  // At sample points too, where the distance itself has a kink.
  const LbField at_samples = lb_field(f.sol, f.dist, x, LbMode::analytic());
  CHECK(at_samples.errors.empty());
  CHECK(lb_constancy(at_samples.computed()) <= 1e-8);
}

TEST_CASE("generalized euclidean axes equal QV and give the centroid") {
  std::mt19937_64 rng(23);
  for (int r = 0; r < 5; ++r) {
    const Eigen::MatrixXd x = testutil::centered(testutil::random_matrix(rng, 16, 4));
    const Eigen::MatrixXd q = testutil::random_spd(rng, 4);
    const Fit f = fit(DistanceSpec::generalized_euclidean(GeneralizedForm(q)), x, 2);
    const GpcaSolution g = gpca(x, GeneralizedForm(q), std::nullopt, 2, false);
    const Eigen::MatrixXd qv = q * g.v;
    for (int t = 0; t < 10; ++t) {
      const Eigen::VectorXd z = 3.0 * testutil::random_vector(rng, 4);
      const Eigen::MatrixXd lb = lb_axes(f.sol, f.dist, z, LbMode::analytic()).axes;
      CHECK(testutil::max_dev_up_to_sign(lb, qv) <= 1e-8);
      // f(z) = sum_j z_j * LB row j.
      CHECK((embed_supplemental(f.sol, f.dist, z) - lb.transpose() * z).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("one-sided variants converge to the analytic axes") {
  std::mt19937_64 rng(24);
  const Eigen::MatrixXd x = testutil::random_matrix(rng, 12, 4);
  const Fit f = fit(DistanceSpec::euclidean(), x, 2);
  const Eigen::VectorXd z = testutil::random_vector(rng, 4);
  const Eigen::MatrixXd exact = lb_axes(f.sol, f.dist, z, LbMode::analytic()).axes;
  double prev_plus = 1e300, prev_minus = 1e300;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double plus = (lb_axes(f.sol, f.dist, z, LbMode::eps_positive(eps)).axes - exact).norm();
    const double minus = (lb_axes(f.sol, f.dist, z, LbMode::eps_negative(eps)).axes - exact).norm();
    CHECK(plus < prev_plus);
    CHECK(minus < prev_minus);
    CHECK(plus <= 10.0 * eps);
    prev_plus = plus;
    prev_minus = minus;
  }
  CHECK((lb_axes(f.sol, f.dist, z, LbMode::positive()).axes - exact).norm() <= 1e-5);
  CHECK((lb_axes(f.sol, f.dist, z, LbMode::negative()).axes - exact).norm() <= 1e-5);
}

TEST_CASE("mode checks") {
  auto tree = std::make_shared<const PhyloTree>(parse_newick("((A:1,B:1):1,(C:1,D:1):1);"));
  CHECK_THROWS_AS(check_mode(LbMode::analytic(), DistanceSpec::manhattan()), ModeError);
  CHECK_THROWS_AS(check_mode(LbMode::analytic(), DistanceSpec::weighted_unifrac(tree)), ModeError);
  CHECK_THROWS_AS(check_mode(LbMode::positive(), DistanceSpec::unweighted_unifrac(tree)), ModeError);
  CHECK_NOTHROW(check_mode(LbMode::eps_positive(1), DistanceSpec::unweighted_unifrac(tree)));
  CHECK_NOTHROW(check_mode(LbMode::positive(), DistanceSpec::manhattan()));
  CHECK_THROWS_AS(check_mode(LbMode::eps_positive(0), DistanceSpec::euclidean()), ModeError);
  CHECK_THROWS_AS(check_mode(LbMode::eps_negative(-1), DistanceSpec::euclidean()), ModeError);
  for (auto name : {"analytic", "positive", "negative", "eps-positive", "eps-negative"})
    CHECK(to_string(parse_lb_variant(name)) == name);
  CHECK_THROWS_AS(parse_lb_variant("sideways"), ValidationError);
}

TEST_CASE("negative steps out of the UniFrac domain name the variable") {
  auto tree = std::make_shared<const PhyloTree>(parse_newick("((A:1,B:1):1,(C:1,D:1):1);"));
  Eigen::MatrixXd x(4, 4);
  x << 3, 1, 0, 2, 1, 1, 4, 0, 0, 2, 2, 2, 5, 0, 1, 1;
  const Fit f = fit(DistanceSpec::weighted_unifrac(tree), x, 2);
  try {
    lb_axes(f.sol, f.dist, x.row(0).transpose(), LbMode::eps_negative(1.0));
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("variable 2") != std::string::npos);
  }
  // Field keeps going and reports which points failed.
  const LbField field = lb_field(f.sol, f.dist, x, LbMode::eps_negative(1.0));
  REQUIRE(field.matrices.size() == 4);
  CHECK(field.errors.size() == 4);  // every sample has a zero count
  const LbField pos = lb_field(f.sol, f.dist, x, LbMode::eps_positive(1.0));
  CHECK(pos.errors.empty());
  CHECK(pos.computed().size() == 4);
  CHECK(lb_field(f.sol, f.dist, Eigen::MatrixXd(0, 4), LbMode::positive()).matrices.empty());
}

TEST_CASE("weighted UniFrac axes vary across samples") {
  SimulationConfig cfg;
  cfg.depth = 3;
  cfg.n = 10;
  const SimulatedDataset ds = simulate(cfg);
  auto tree = std::make_shared<const PhyloTree>(ds.tree);
  const Fit f = fit(DistanceSpec::weighted_unifrac(tree), ds.data, 2);
  const LbField field = lb_field(f.sol, f.dist, ds.data, LbMode::positive());
  REQUIRE(field.errors.empty());
  CHECK(lb_constancy(field.computed()) > 1e-3);
}

TEST_CASE("constancy statistic") {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Constant(3, 2, 1.5);
  CHECK(lb_constancy(std::vector<Eigen::MatrixXd>{a, a, a}) == 0.0);
  CHECK(lb_constancy(std::vector<Eigen::MatrixXd>{a, 2.0 * a}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(lb_constancy(std::vector<Eigen::MatrixXd>{a, Eigen::MatrixXd::Zero(2, 2)}), ShapeError);
  CHECK_THROWS_AS(lb_constancy(std::vector<Eigen::MatrixXd>{}), ValidationError);
}

TEST_CASE("correlation biplot") {
  std::mt19937_64 rng(25);
  Eigen::MatrixXd x = testutil::random_matrix(rng, 10, 3);
  const Fit f = fit(DistanceSpec::euclidean(), x, 2);
  Eigen::MatrixXd data(10, 3);
  data.col(0) = f.sol.m_embed.col(0);
  data.col(1).setConstant(4.0);
  data.col(2) = x.col(2);
  const CorrelationBiplot c = correlation_biplot(data, f.sol);
  CHECK(c.values(0, 0) == doctest::Approx(1.0));
  CHECK(c.degenerate_rows == std::vector<bool>{false, true, false});
  CHECK(c.values.row(1).isZero());
  CHECK(c.values.cwiseAbs().maxCoeff() <= 1.0);
  MdsSolution one;
  one.m_embed = Eigen::MatrixXd::Ones(1, 1);
  one.k = 1;
  CHECK_THROWS_AS(correlation_biplot(data.topRows(1), one), ValidationError);
}

TEST_CASE("sign alignment and cosine") {
  Eigen::MatrixXd a(3, 2);
  a << 1, 2, 3, 4, 5, 6;
  Eigen::MatrixXd b = a;
  b.col(1) *= -1.0;
  CHECK(align_column_signs(b, a) == a);
  CHECK(cosine_similarity(a, a) == doctest::Approx(1.0));
  CHECK(cosine_similarity(a, -a) == doctest::Approx(-1.0));
}
