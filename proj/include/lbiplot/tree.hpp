#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace lbiplot {

// Rooted phylogenetic tree with branch lengths.
//
// Nodes are stored in preorder, so a node's parent always has a smaller
// index than the node itself and the root is node 0. The branch above a
// node is identified with that node; the root has no branch.
class PhyloTree {
public:
  struct Node {
    int parent = -1;  // -1 for the root
    double length = 0.0;  // branch length to parent; ignored for the root
    std::optional<std::string> label;  // set for tips only
    std::vector<int> children;
  };

  PhyloTree() = default;

  /// Builds a tree from preorder node records; validates every invariant.
  explicit PhyloTree(std::vector<Node> nodes);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  int root() const noexcept { return 0; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t branch_count() const noexcept { return nodes_.empty() ? 0 : nodes_.size() - 1; }
  std::size_t tip_count() const noexcept { return tip_nodes_.size(); }
  bool is_tip(int i) const { return node(i).children.empty(); }

  /// Tip labels in left-to-right order; column j of a paired data matrix is tip j.
  const std::vector<std::string>& tip_order() const noexcept { return tip_labels_; }
  /// Node index of the j-th tip in tip order.
  int tip_node(std::size_t j) const { return tip_nodes_.at(j); }
  /// Position of a tip label in tip order, or nullopt.
  std::optional<std::size_t> tip_index(std::string_view label) const;

  /// Number of branch lengths that were absent in the source text and defaulted to 1.
  std::size_t missing_length_count() const noexcept { return missing_lengths_; }
  void set_missing_length_count(std::size_t n) noexcept { missing_lengths_ = n; }

  /// Canonical Newick: tips labelled, internal labels dropped, lengths at 17 significant digits.
  std::string to_newick() const;

private:
  std::vector<Node> nodes_;
  std::vector<int> tip_nodes_;
  std::vector<std::string> tip_labels_;
  std::size_t missing_lengths_ = 0;
};

// B x p incidence of tips below branches. Row b corresponds to the branch
// above node branch_nodes[b]; rows follow node index order (root excluded).
struct BranchIncidence {
  Eigen::MatrixXd matrix;  // entries are exactly 0.0 or 1.0
  Eigen::VectorXd lengths;
  std::vector<int> branch_nodes;
};

/// Parses a single Newick tree. Internal node labels are accepted and ignored.
/// Missing branch lengths default to 1.0 and are counted on the result.
PhyloTree parse_newick(std::string_view text);

/// Reads and parses a Newick file.
PhyloTree read_newick_file(const std::string& path);

BranchIncidence branch_incidence(const PhyloTree& tree);

/// Full binary tree with 2^depth tips labelled t1..tp, every branch of equal length.
PhyloTree build_balanced_tree(int depth, double branch_length = 1.0);

/// 64-bit FNV-1a of the canonical Newick, as 16 hex digits.
std::string tree_digest(const PhyloTree& tree);

}  // namespace lbiplot
