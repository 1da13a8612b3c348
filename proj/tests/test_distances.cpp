#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "lbiplot/distances.hpp"
#include "lbiplot/error.hpp"

using namespace lbiplot;

namespace {

// Tips below each node, found by walking up from every tip.
std::vector<std::set<std::size_t>> tips_below(const PhyloTree& t) {
  std::vector<std::set<std::size_t>> below(t.node_count());
  for (std::size_t j = 0; j < t.tip_count(); ++j)
    for (int i = t.tip_node(j); i != -1; i = t.node(i).parent) below[static_cast<std::size_t>(i)].insert(j);
  return below;
}

double naive_wunifrac(const PhyloTree& t, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const auto below = tips_below(t);
  double d = 0.0;
  for (std::size_t i = 1; i < t.node_count(); ++i) {
    double px = 0.0, py = 0.0;
    for (std::size_t j : below[i]) {
      px += x(static_cast<Eigen::Index>(j)) / x.sum();
      py += y(static_cast<Eigen::Index>(j)) / y.sum();
    }
    d += t.node(static_cast<int>(i)).length * std::abs(px - py);
  }
  return d;
}

double naive_uunifrac(const PhyloTree& t, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const auto below = tips_below(t);
  double unique = 0.0, observed = 0.0;
  for (std::size_t i = 1; i < t.node_count(); ++i) {
    bool in_x = false, in_y = false;
    for (std::size_t j : below[i]) {
      in_x = in_x || x(static_cast<Eigen::Index>(j)) > 0;
      in_y = in_y || y(static_cast<Eigen::Index>(j)) > 0;
    }
    const double l = t.node(static_cast<int>(i)).length;
    if (in_x || in_y) observed += l;
    if (in_x != in_y) unique += l;
  }
  return unique / observed;
}

std::shared_ptr<const PhyloTree> tree_of(std::string_view nwk) { return std::make_shared<const PhyloTree>(parse_newick(nwk)); }

}  // namespace

TEST_CASE("two-tip weighted UniFrac") {
  auto t = tree_of("(A:1,B:1);");
  const auto spec = DistanceSpec::weighted_unifrac(t);
  CHECK(eval(spec, Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)) == doctest::Approx(2.0));
  CHECK(eval(spec, Eigen::Vector2d(3, 1), Eigen::Vector2d(6, 2)) == 0.0);
  CHECK(eval(DistanceSpec::unweighted_unifrac(t), Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 1)) == doctest::Approx(0.5));
}

TEST_CASE("UniFrac matches per-branch loop") {
  std::mt19937_64 rng(11);
  auto t = tree_of("(((A:0.3,B:1.2):0.7,(C:0.1,D:0.4):2):0.5,((E:1,F:0.2):0.9,G:1.5):0.25);");
  const Eigen::MatrixXd x = testutil::random_counts(rng, 12, 7);
  for (auto make : {&DistanceSpec::weighted_unifrac, &DistanceSpec::unweighted_unifrac}) {
    const DistanceSpec spec = make(t);
    const Eigen::MatrixXd sq = squared_distance_matrix(spec, x);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index j = 0; j < x.rows(); ++j) {
        const double oracle = spec.kind() == DistanceKind::weighted_unifrac
                                  ? naive_wunifrac(*t, x.row(i), x.row(j))
                                  : naive_uunifrac(*t, x.row(i), x.row(j));
        worst = std::max(worst, std::abs(eval(spec, x.row(i), x.row(j)) - oracle));
        worst = std::max(worst, std::abs(sq(i, j) - oracle * oracle));
      }
    }
    CHECK(worst <= 1e-12);
    CHECK(sq.diagonal().cwiseAbs().maxCoeff() == 0.0);
    CHECK(sq == sq.transpose());
  }
}

TEST_CASE("metric properties") {
  std::mt19937_64 rng(5);
  auto t = tree_of("((A:1,B:2):1,(C:0.5,(D:1,E:1):0.3):2);");
  const Eigen::MatrixXd counts = testutil::random_counts(rng, 8, 5);
  const Eigen::MatrixXd reals = testutil::random_matrix(rng, 8, 5);
  const std::vector<std::pair<DistanceSpec, const Eigen::MatrixXd*>> cases = {
      {DistanceSpec::euclidean(), &reals},
      {DistanceSpec::manhattan(), &reals},
      {DistanceSpec::generalized_euclidean(GeneralizedForm(testutil::random_spd(rng, 5))), &reals},
      {DistanceSpec::weighted_unifrac(t), &counts},
      {DistanceSpec::unweighted_unifrac(t), &counts}};
  for (const auto& [spec, x] : cases) {
    CAPTURE(to_string(spec.kind()));
    for (Eigen::Index i = 0; i < x->rows(); ++i) {
      for (Eigen::Index j = 0; j < x->rows(); ++j) {
        const double dij = eval(spec, x->row(i), x->row(j));
        CHECK(dij >= 0.0);
        CHECK(dij == eval(spec, x->row(j), x->row(i)));
        for (Eigen::Index m = 0; m < x->rows(); ++m) {
          CHECK(dij <= eval(spec, x->row(i), x->row(m)) + eval(spec, x->row(m), x->row(j)) + 1e-12);
        }
      }
    }
  }
  // UniFrac only sees relative abundances.
  const auto w = DistanceSpec::weighted_unifrac(t);
  CHECK(eval(w, counts.row(0), counts.row(1)) ==
        doctest::Approx(eval(w, 3.0 * counts.row(0).transpose(), counts.row(1))).epsilon(1e-14));
}

TEST_CASE("closed forms") {
  const Eigen::Vector3d x(1, 2, 3), y(0, -1, 5);
  CHECK(eval(DistanceSpec::euclidean(), x, y) == doctest::Approx(std::sqrt(1 + 9 + 4)));
  CHECK(eval(DistanceSpec::manhattan(), x, y) == doctest::Approx(6.0));
  Eigen::Matrix3d q;
  q << 2, 1, 0, 1, 2, 0, 0, 0, 1;
  const Eigen::Vector3d v = x - y;
  CHECK(eval(DistanceSpec::generalized_euclidean(GeneralizedForm(q)), x, y) ==
        doctest::Approx(std::sqrt(v.dot(q * v))));
}

TEST_CASE("generalized form factors through L") {
  // d_Q(x, y) = |L'(x - y)| for Q = L L'.
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd q = testutil::random_spd(rng, 4);
  const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(q).matrixL();
  const auto spec = DistanceSpec::generalized_euclidean(GeneralizedForm(q));
  for (int r = 0; r < 10; ++r) {
    const Eigen::VectorXd x = testutil::random_vector(rng, 4), y = testutil::random_vector(rng, 4);
    CHECK(eval(spec, x, y) == doctest::Approx((l.transpose() * (x - y)).norm()).epsilon(1e-12));
  }
}

TEST_CASE("form validation") {
  Eigen::Matrix2d asym;
  asym << 1, 0.5, 0.4, 1;
  CHECK_THROWS_AS(GeneralizedForm{asym}, FormError);
  Eigen::Matrix2d indef;
  indef << 1, 2, 2, 1;
  CHECK_THROWS_AS(GeneralizedForm{indef}, FormError);
  CHECK_THROWS_AS(GeneralizedForm{Eigen::MatrixXd(2, 3)}, FormError);
  CHECK_NOTHROW(GeneralizedForm::identity(3));
}

TEST_CASE("domain and shape errors") {
  auto t = tree_of("(A:1,B:1);");
  const auto w = DistanceSpec::weighted_unifrac(t);
  CHECK_THROWS_AS(validate_point(w, Eigen::Vector2d(1, -1)), DomainError);
  CHECK_THROWS_AS(validate_point(w, Eigen::Vector2d(0, 0)), DomainError);
  CHECK_THROWS_AS(validate_point(w, Eigen::Vector3d(1, 1, 1)), ShapeError);
  CHECK_NOTHROW(validate_point(DistanceSpec::euclidean(), Eigen::Vector2d(0, -3)));
  CHECK_THROWS_AS(eval(DistanceSpec::euclidean(), Eigen::Vector2d(0, 0), Eigen::Vector3d(0, 0, 0)), ShapeError);
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 1, 0, 0;
  CHECK_THROWS_AS(squared_distance_matrix(w, bad), DomainError);
}

TEST_CASE("distances to samples match eval") {
  std::mt19937_64 rng(8);
  auto t = tree_of("((A:1,B:2):1,(C:0.5,D:1):2);");
  const Eigen::MatrixXd x = testutil::random_counts(rng, 6, 4);
  for (const auto& spec : {DistanceSpec::weighted_unifrac(t), DistanceSpec::unweighted_unifrac(t),
                           DistanceSpec::manhattan()}) {
    const DistanceToSamples dist(spec, x);
    const Eigen::VectorXd z = testutil::random_counts(rng, 1, 4).row(0);
    const Eigen::VectorXd d = dist(z);
    for (Eigen::Index i = 0; i < x.rows(); ++i) CHECK(d(i) == doctest::Approx(eval(spec, x.row(i), z)).epsilon(1e-13));
  }
}

TEST_CASE("kinds and smoothness") {
  for (auto name : {"euclidean", "geuclidean", "manhattan", "wunifrac", "uunifrac"})
    CHECK(to_string(parse_distance_kind(name)) == name);
  CHECK_THROWS_AS(parse_distance_kind("cosine"), ValidationError);
  auto t = tree_of("(A:1,B:1);");
  CHECK(DistanceSpec::euclidean().smoothness() == Smoothness::differentiable);
  CHECK(DistanceSpec::manhattan().smoothness() == Smoothness::continuous_nonsmooth);
  CHECK(DistanceSpec::weighted_unifrac(t).smoothness() == Smoothness::continuous_nonsmooth);
  CHECK(DistanceSpec::unweighted_unifrac(t).smoothness() == Smoothness::discontinuous);
  CHECK(DistanceSpec::weighted_unifrac(t).dimension() == 2);
  CHECK(!DistanceSpec::euclidean().dimension());
}

TEST_CASE("tree covariance form") {
  const PhyloTree t = parse_newick("((A:1,B:1):1,C:2);");
  CHECK(tree_covariance_q(t, 0.0).q() == Eigen::MatrixXd::Identity(3, 3));
  const Eigen::MatrixXd s = shared_branch_length(t);
  Eigen::Matrix3d expected_s;
  expected_s << 2, 1, 0, 1, 2, 0, 0, 0, 2;
  CHECK((s - expected_s).norm() == 0.0);
  // blend 0.5: trace 6 over 3 tips scales S by 1/2.
  const Eigen::MatrixXd q = tree_covariance_q(t, 0.5).q();
  const Eigen::MatrixXd oracle = (0.5 * Eigen::Matrix3d::Identity() + 0.25 * expected_s).inverse();
  CHECK((q - oracle).norm() <= 1e-12);
  CHECK(q == q.transpose());
  // S is singular for a star with zero-length branches.
  CHECK_THROWS_AS(tree_covariance_q(parse_newick("(A:0,B:0,C:1);"), 1.0), FormError);
  CHECK_THROWS_AS(tree_covariance_q(t, 1.5), ValidationError);
}
