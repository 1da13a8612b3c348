#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lbiplot/error.hpp"
#include "lbiplot/tree.hpp"

using namespace lbiplot;

namespace {

// Oracle: depth of a tip by walking parent links.
double root_distance(const PhyloTree& t, int node) {
  double d = 0.0;
  for (int i = node; t.node(i).parent != -1; i = t.node(i).parent) d += t.node(i).length;
  return d;
}

}  // namespace

TEST_CASE("parse simple tree") {
  const PhyloTree t = parse_newick("((A:1,B:2):0.5,C:3);");
  CHECK(t.tip_count() == 3);
  CHECK(t.branch_count() == 4);
  CHECK(t.tip_order() == std::vector<std::string>{"A", "B", "C"});
  CHECK(root_distance(t, t.tip_node(1)) == doctest::Approx(2.5));
  CHECK(t.missing_length_count() == 0);
}

TEST_CASE("missing lengths default to one and are counted") {
  const PhyloTree t = parse_newick("(A,B:2)root;");
  CHECK(t.missing_length_count() == 1);
  CHECK(t.node(t.tip_node(0)).length == 1.0);
}

TEST_CASE("quoted labels, comments and internal labels") {
  const PhyloTree t = parse_newick("(('a b':1,[note]C:2)inner:1,'x''y':1);");
  CHECK(t.tip_order() == std::vector<std::string>{"a b", "C", "x'y"});
  const PhyloTree back = parse_newick(t.to_newick());
  CHECK(back.tip_order() == t.tip_order());
}

TEST_CASE("parse errors carry offsets") {
  auto offset_of = [](std::string_view s) -> long {
    try {
      parse_newick(s);
    } catch (const ParseError& e) {
      return static_cast<long>(e.offset());
    }
    return -1;
  };
  CHECK(offset_of("") >= 0);
  CHECK(offset_of("((A,B);") >= 0);
  CHECK(offset_of("(A,B));") >= 0);
  CHECK(offset_of("(A,B)") >= 0);
  CHECK(offset_of("(A,A);") >= 0);
  CHECK(offset_of("(A,B); x") >= 0);
  CHECK(offset_of("(A:-1,B);") >= 0);
  CHECK_THROWS_AS(parse_newick("(A:x,B);"), ParseError);
}

TEST_CASE("round trip is stable") {
  const PhyloTree t = parse_newick("((A:0.1,B:0.2):0.30000000000000004,(C:1e-5,D:7):2);");
  const std::string once = t.to_newick();
  CHECK(parse_newick(once).to_newick() == once);
  CHECK(tree_digest(t) == tree_digest(parse_newick(once)));
  CHECK(tree_digest(t).size() == 16);
  CHECK(tree_digest(t) != tree_digest(parse_newick("((A:0.1,B:0.2):0.3,(C:1e-5,D:7):2);")));
}

TEST_CASE("incidence column sums equal tip depth") {
  const PhyloTree t = parse_newick("(((A:1,B:2):3,C:4):5,(D:6,(E:7,F:8):9):10);");
  const BranchIncidence inc = branch_incidence(t);
  REQUIRE(inc.matrix.rows() == static_cast<Eigen::Index>(t.branch_count()));
  REQUIRE(inc.matrix.cols() == 6);
  for (std::size_t j = 0; j < t.tip_count(); ++j) {
    const double depth = inc.lengths.dot(inc.matrix.col(static_cast<Eigen::Index>(j)));
    CHECK(depth == doctest::Approx(root_distance(t, t.tip_node(j))));
  }
  // A branch's tip set is the union of its children's sets.
  for (std::size_t b = 0; b < inc.branch_nodes.size(); ++b) {
    const auto& node = t.node(inc.branch_nodes[b]);
    if (node.children.empty()) {
      CHECK(inc.matrix.row(static_cast<Eigen::Index>(b)).sum() == 1.0);
      continue;
    }
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(inc.matrix.cols());
    for (int c : node.children) sum += inc.matrix.row(c - 1);
    CHECK(sum == inc.matrix.row(static_cast<Eigen::Index>(b)));
  }
}

TEST_CASE("balanced tree") {
  const PhyloTree t = build_balanced_tree(3, 0.5);
  CHECK(t.tip_count() == 8);
  CHECK(t.branch_count() == 14);
  CHECK(t.tip_order().front() == "t1");
  CHECK(t.tip_order().back() == "t8");
  for (std::size_t j = 0; j < t.tip_count(); ++j) CHECK(root_distance(t, t.tip_node(j)) == doctest::Approx(1.5));
  // Sister pairs are adjacent in tip order.
  CHECK(t.node(t.tip_node(0)).parent == t.node(t.tip_node(1)).parent);
  CHECK(parse_newick(t.to_newick()).to_newick() == t.to_newick());
  CHECK_THROWS_AS(build_balanced_tree(0), ValidationError);
}

TEST_CASE("constructor rejects bad records") {
  std::vector<PhyloTree::Node> nodes(2);
  nodes[1].parent = 0;
  nodes[1].length = 1.0;
  nodes[0].children = {1};
  CHECK_THROWS_AS(PhyloTree{nodes}, ValidationError);  // unlabeled tip
  nodes[1].label = "A";
  CHECK(PhyloTree(nodes).tip_count() == 1);
  nodes[1].length = -1.0;
  CHECK_THROWS_AS(PhyloTree{nodes}, ValidationError);
}
