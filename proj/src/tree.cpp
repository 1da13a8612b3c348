#include "lbiplot/tree.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "lbiplot/error.hpp"

namespace lbiplot {

PhyloTree::PhyloTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ValidationError("tree has no nodes");
  if (nodes_[0].parent != -1) throw ValidationError("node 0 must be the root");

  for (auto& n : nodes_) n.children.clear();
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.parent < 0 || static_cast<std::size_t>(n.parent) >= i) {
      throw ValidationError("node " + std::to_string(i) + " has parent index " +
                            std::to_string(n.parent) + "; parents must precede children");
    }
    if (!(n.length >= 0.0) || !std::isfinite(n.length)) {
      throw ValidationError("node " + std::to_string(i) + " has invalid branch length");
    }
    nodes_[static_cast<std::size_t>(n.parent)].children.push_back(static_cast<int>(i));
  }

  // Tips in left-to-right (preorder) order.
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].children.empty()) {
      nodes_[i].label.reset();
      continue;
    }
    if (!nodes_[i].label || nodes_[i].label->empty()) {
      throw ValidationError("tip node " + std::to_string(i) + " has no label");
    }
    if (!seen.insert(*nodes_[i].label).second) {
      throw ValidationError("duplicate tip label '" + *nodes_[i].label + "'");
    }
    tip_nodes_.push_back(static_cast<int>(i));
    tip_labels_.push_back(*nodes_[i].label);
  }
}

std::optional<std::size_t> PhyloTree::tip_index(std::string_view label) const {
  for (std::size_t j = 0; j < tip_labels_.size(); ++j) {
    if (tip_labels_[j] == label) return j;
  }
  return std::nullopt;
}

namespace {

std::string format_length(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool is_label_char(char c) {
  return !(c == '(' || c == ')' || c == ',' || c == ':' || c == ';' || c == '[' ||
           std::isspace(static_cast<unsigned char>(c)));
}

void write_subtree(const PhyloTree& tree, int i, std::string& out) {
  const auto& n = tree.node(i);
  if (!n.children.empty()) {
    out += '(';
    for (std::size_t c = 0; c < n.children.size(); ++c) {
      if (c) out += ',';
      write_subtree(tree, n.children[c], out);
    }
    out += ')';
  } else {
    const std::string& label = *n.label;
    bool plain = true;
    for (char c : label) plain = plain && is_label_char(c) && c != '\'';
    if (plain) {
      out += label;
    } else {
      out += '\'';
      for (char c : label) {
        out += c;
        if (c == '\'') out += '\'';
      }
      out += '\'';
    }
  }
  if (n.parent >= 0) {
    out += ':';
    out += format_length(n.length);
  }
}

class NewickParser {
public:
  explicit NewickParser(std::string_view text) : text_(text) {}

  PhyloTree parse() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty Newick input", pos_);
    parse_node(-1);
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != ';') {
      if (pos_ < text_.size() && text_[pos_] == ')') {
        throw ParseError("unbalanced parentheses: unexpected ')'", pos_);
      }
      throw ParseError("expected ';' at end of tree", pos_);
    }
    ++pos_;
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("trailing characters after ';'", pos_);

    std::unordered_set<std::string> labels;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].children.empty()) {
        if (!nodes_[i].label || nodes_[i].label->empty()) {
          throw ParseError("tip without a label", label_offsets_[i]);
        }
        if (!labels.insert(*nodes_[i].label).second) {
          throw ParseError("duplicate tip label '" + *nodes_[i].label + "'", label_offsets_[i]);
        }
      }
    }
    PhyloTree tree(std::move(nodes_));
    tree.set_missing_length_count(missing_);
    return tree;
  }

private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '[') {
        // bracketed comment
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ']') ++pos_;
        if (pos_ >= text_.size()) throw ParseError("unterminated comment", start);
        ++pos_;
      } else {
        break;
      }
    }
  }

  int parse_node(int parent) {
    int idx = static_cast<int>(nodes_.size());
    nodes_.push_back(PhyloTree::Node{parent, 1.0, std::nullopt, {}});
    label_offsets_.push_back(pos_);
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      std::size_t open = pos_;
      ++pos_;
      for (;;) {
        int child = parse_node(idx);
        nodes_[static_cast<std::size_t>(idx)].children.push_back(child);
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unbalanced parentheses: '(' never closed", open);
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
      }
    }
    skip_ws();
    label_offsets_[static_cast<std::size_t>(idx)] = pos_;
    std::string label = parse_label();
    if (!label.empty()) nodes_[static_cast<std::size_t>(idx)].label = std::move(label);
    skip_ws();
    bool has_length = false;
    if (pos_ < text_.size() && text_[pos_] == ':') {
      ++pos_;
      skip_ws();
      nodes_[static_cast<std::size_t>(idx)].length = parse_number();
      has_length = true;
    }
    if (parent >= 0 && !has_length) ++missing_;
    return idx;
  }

  std::string parse_label() {
    std::string out;
    if (pos_ < text_.size() && text_[pos_] == '\'') {
      std::size_t start = pos_++;
      for (;;) {
        if (pos_ >= text_.size()) throw ParseError("unterminated quoted label", start);
        char c = text_[pos_++];
        if (c == '\'') {
          if (pos_ < text_.size() && text_[pos_] == '\'') {
            out += '\'';
            ++pos_;
          } else {
            break;
          }
        } else {
          out += c;
        }
      }
      return out;
    }
    // Underscores are kept verbatim: tip labels double as CSV column names.
    while (pos_ < text_.size() && is_label_char(text_[pos_])) out += text_[pos_++];
    return out;
  }

  double parse_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
            text_[pos_] == 'e' || text_[pos_] == 'E' || text_[pos_] == '-' || text_[pos_] == '+')) {
      ++pos_;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc() || ptr != text_.data() + pos_ || start == pos_) {
      throw ParseError("invalid branch length", start);
    }
    if (v < 0.0) throw ParseError("negative branch length", start);
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t missing_ = 0;
  std::vector<PhyloTree::Node> nodes_;
  std::vector<std::size_t> label_offsets_;
};

}  // namespace

std::string PhyloTree::to_newick() const {
  std::string out;
  if (!nodes_.empty()) write_subtree(*this, 0, out);
  out += ';';
  return out;
}

PhyloTree parse_newick(std::string_view text) { return NewickParser(text).parse(); }

PhyloTree read_newick_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open tree file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_newick(ss.str());
}

BranchIncidence branch_incidence(const PhyloTree& tree) {
  const std::size_t nb = tree.branch_count();
  const std::size_t p = tree.tip_count();
  BranchIncidence inc;
  inc.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(p));
  inc.lengths.resize(static_cast<Eigen::Index>(nb));
  inc.branch_nodes.resize(nb);

  // row of node i (i >= 1) is i - 1
  for (std::size_t i = 1; i < tree.node_count(); ++i) {
    inc.branch_nodes[i - 1] = static_cast<int>(i);
    inc.lengths(static_cast<Eigen::Index>(i - 1)) = tree.node(static_cast<int>(i)).length;
  }
  for (std::size_t j = 0; j < p; ++j) {
    for (int v = tree.tip_node(j); v > 0; v = tree.node(v).parent) {
      inc.matrix(v - 1, static_cast<Eigen::Index>(j)) = 1.0;
    }
  }
  return inc;
}

PhyloTree build_balanced_tree(int depth, double branch_length) {
  if (depth < 1) throw ValidationError("depth must be at least 1");
  // 2^(depth+1) - 1 nodes must fit in int
  if (depth > 29) throw ValidationError("depth " + std::to_string(depth) + " overflows the node index type");
  if (!(branch_length >= 0.0) || !std::isfinite(branch_length)) {
    throw ValidationError("branch length must be finite and non-negative");
  }

  std::vector<PhyloTree::Node> nodes;
  nodes.reserve((std::size_t{1} << (depth + 1)) - 1);
  int tip_counter = 0;
  // iterative preorder
  struct Frame {
    int parent;
    int level;
  };
  std::vector<Frame> stack{{-1, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    PhyloTree::Node n;
    n.parent = f.parent;
    n.length = f.parent < 0 ? 0.0 : branch_length;
    int idx = static_cast<int>(nodes.size());
    if (f.level == depth) n.label = "t" + std::to_string(++tip_counter);
    nodes.push_back(std::move(n));
    if (f.level < depth) {
      stack.push_back({idx, f.level + 1});  // right, popped second
      stack.push_back({idx, f.level + 1});  // left
    }
  }
  return PhyloTree(std::move(nodes));
}

std::string tree_digest(const PhyloTree& tree) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : tree.to_newick()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace lbiplot
