#include "lbiplot/bundle.hpp"

#include <unordered_map>
#include <unordered_set>

#include "lbiplot/error.hpp"
#include "lbiplot/gpca.hpp"

namespace lbiplot {

json AnalysisOptions::to_json() const {
  json j;
  j["data"] = data_path;
  j["id_col"] = id_column;
  j["distance"] = distance;
  j["tree"] = tree_path ? json(*tree_path) : json(nullptr);
  j["q"] = q_path ? json(*q_path) : json(nullptr);
  j["k"] = k;
  j["center"] = center;
  return j;
}

AnalysisOptions AnalysisOptions::from_json(const json& j) {
  try {
    AnalysisOptions o;
    o.data_path = j.at("data").get<std::string>();
    o.id_column = j.value("id_col", false);
    o.distance = j.at("distance").get<std::string>();
    if (j.contains("tree") && !j["tree"].is_null()) o.tree_path = j["tree"].get<std::string>();
    if (j.contains("q") && !j["q"].is_null()) o.q_path = j["q"].get<std::string>();
    o.k = j.at("k").get<int>();
    o.center = j.value("center", false);
    return o;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("bundle config is incomplete: ") + e.what());
  }
}

LabeledMatrix align_to_tips(const LabeledMatrix& data, const PhyloTree& tree) {
  const auto& tips = tree.tip_order();
  std::unordered_map<std::string, std::size_t> col_of;
  for (std::size_t c = 0; c < data.columns.size(); ++c) {
    if (!col_of.emplace(data.columns[c], c).second) {
      throw ValidationError("duplicate column name '" + data.columns[c] + "'");
    }
  }
  std::vector<std::string> mismatches;
  std::unordered_set<std::string> tipset(tips.begin(), tips.end());
  for (const auto& t : tips) {
    if (!col_of.count(t)) mismatches.push_back("tip '" + t + "' has no data column");
  }
  for (const auto& c : data.columns) {
    if (!tipset.count(c)) mismatches.push_back("column '" + c + "' is not a tip of the tree");
  }
  if (!mismatches.empty()) {
    std::string msg = "tip labels and data columns do not match (" + std::to_string(mismatches.size()) +
                      " mismatches):";
    for (std::size_t i = 0; i < mismatches.size() && i < 5; ++i) msg += "\n  " + mismatches[i];
    throw ValidationError(msg);
  }
  LabeledMatrix out;
  out.ids = data.ids;
  out.columns = tips;
  out.values.resize(data.values.rows(), static_cast<Eigen::Index>(tips.size()));
  for (std::size_t j = 0; j < tips.size(); ++j) {
    out.values.col(static_cast<Eigen::Index>(j)) = data.values.col(static_cast<Eigen::Index>(col_of[tips[j]]));
  }
  return out;
}

DistanceSpec make_distance_spec(DistanceKind kind, const std::shared_ptr<const PhyloTree>& tree,
                                const std::optional<Eigen::MatrixXd>& q, Eigen::Index p) {
  const bool needs_tree = kind == DistanceKind::weighted_unifrac || kind == DistanceKind::unweighted_unifrac;
  const bool needs_q = kind == DistanceKind::generalized_euclidean;
  const std::string name(to_string(kind));
  if (needs_tree && !tree) throw ValidationError(name + " requires --tree");
  if (!needs_tree && tree) throw ValidationError(name + " does not use a tree; drop --tree");
  if (needs_q && !q) throw ValidationError(name + " requires --q");
  if (!needs_q && q) throw ValidationError(name + " does not use a Q matrix; drop --q");

  switch (kind) {
    case DistanceKind::euclidean: return DistanceSpec::euclidean();
    case DistanceKind::manhattan: return DistanceSpec::manhattan();
    case DistanceKind::generalized_euclidean:
      if (q->rows() != p || q->cols() != p) {
        throw ShapeError("Q is " + std::to_string(q->rows()) + "x" + std::to_string(q->cols()) +
                         " but the data has " + std::to_string(p) + " variables");
      }
      return DistanceSpec::generalized_euclidean(GeneralizedForm(*q));
    case DistanceKind::weighted_unifrac: return DistanceSpec::weighted_unifrac(tree);
    case DistanceKind::unweighted_unifrac: return DistanceSpec::unweighted_unifrac(tree);
  }
  throw ValidationError("unknown distance");
}

Analysis run_analysis(const AnalysisOptions& options, LabeledMatrix data, std::shared_ptr<const PhyloTree> tree,
                      std::optional<Eigen::MatrixXd> q) {
  if (options.k < 1) throw ValidationError("--k must be positive");
  if (data.values.rows() < 2) throw ValidationError("need at least two samples");
  const DistanceKind kind = parse_distance_kind(options.distance);

  Analysis a;
  a.options = options;
  a.tree = std::move(tree);
  a.data = a.tree ? align_to_tips(data, *a.tree) : std::move(data);
  if (options.center) a.data.values = center_columns(a.data.values);

  DistanceSpec spec = make_distance_spec(kind, a.tree, q, a.data.values.cols());
  a.distances = std::make_shared<const DistanceToSamples>(spec, a.data.values);
  const Eigen::MatrixXd delta = squared_distance_matrix(spec, a.data.values);
  a.solution = classical_mds(delta, options.k);
  return a;
}

Analysis run_analysis(const AnalysisOptions& options) {
  LabeledMatrix data = read_labeled_csv(options.data_path, options.id_column);
  std::shared_ptr<const PhyloTree> tree;
  if (options.tree_path) tree = std::make_shared<const PhyloTree>(read_newick_file(*options.tree_path));
  std::optional<Eigen::MatrixXd> q;
  if (options.q_path) q = read_matrix_csv(*options.q_path);
  return run_analysis(options, std::move(data), std::move(tree), std::move(q));
}

Eigen::MatrixXd load_points(const Analysis& analysis, const std::string& points, bool id_column) {
  if (points == "samples") return analysis.data.values;
  LabeledMatrix pts = read_labeled_csv(points, id_column);
  const auto& vars = analysis.data.columns;
  std::unordered_map<std::string, std::size_t> col_of;
  for (std::size_t c = 0; c < pts.columns.size(); ++c) col_of.emplace(pts.columns[c], c);
  if (pts.columns.size() != vars.size()) {
    throw ValidationError("points file has " + std::to_string(pts.columns.size()) + " columns, expected " +
                          std::to_string(vars.size()));
  }
  Eigen::MatrixXd out(pts.values.rows(), static_cast<Eigen::Index>(vars.size()));
  for (std::size_t j = 0; j < vars.size(); ++j) {
    auto it = col_of.find(vars[j]);
    if (it == col_of.end()) throw ValidationError("points file lacks variable '" + vars[j] + "'");
    out.col(static_cast<Eigen::Index>(j)) = pts.values.col(static_cast<Eigen::Index>(it->second));
  }
  if (analysis.options.center) {
    // Query points live in the same (centered) coordinates as the data.
    const LabeledMatrix raw = read_labeled_csv(analysis.options.data_path, analysis.options.id_column);
    const LabeledMatrix aligned = analysis.tree ? align_to_tips(raw, *analysis.tree) : raw;
    out = out.rowwise() - aligned.values.colwise().mean();
  }
  return out;
}

json lb_matrix_to_json(const LocalBiplotMatrix& m) {
  json j;
  j["point"] = to_json(m.query_point);
  j["mode"] = std::string(to_string(m.mode.variant));
  j["epsilon"] = m.mode.uses_epsilon() ? json(m.mode.epsilon) : json(nullptr);
  j["axes"] = to_json(m.axes);
  return j;
}

json make_bundle(const Analysis& a) {
  const MdsSolution& sol = a.solution;
  json b;
  b["config"] = a.options.to_json();
  b["embedding"] = {{"ids", a.data.ids}, {"coords", to_json(sol.m_embed)}};
  b["eigenvalues"] = to_json(sol.all_eigenvalues);
  b["inertia"] = {{"positive", sol.inertia.positive},
                  {"negative", sol.inertia.negative},
                  {"discarded", sol.inertia.discarded}};
  b["retained_rank"] = sol.retained_rank();
  b["variables"] = a.data.columns;
  b["dims"] = {{"n", sol.sample_count()}, {"p", a.data.values.cols()}, {"k", sol.k}};
  b["lb"] = json::array();
  b["lb_constancy"] = nullptr;
  b["lb_errors"] = json::array();
  b["correlation"] = nullptr;
  b["correlation_degenerate"] = nullptr;
  json params = json::object();
  params["smoothness"] = std::string(to_string(a.spec().smoothness()));
  if (a.options.q_path) params["q"] = *a.options.q_path;
  if (a.options.tree_path) params["tree"] = *a.options.tree_path;
  b["distance"] = {{"kind", a.options.distance}, {"params", params}};
  b["tree_digest"] = a.tree ? json(tree_digest(*a.tree)) : json(nullptr);
  return b;
}

void add_lb_to_bundle(json& bundle, const LbField& field, const LbMode& mode) {
  json lb = json::array();
  for (const auto& m : field.matrices) {
    if (m) lb.push_back(lb_matrix_to_json(*m));
  }
  bundle["lb"] = std::move(lb);
  const auto computed = field.computed();
  bundle["lb_constancy"] = computed.empty() ? json(nullptr) : json(lb_constancy(computed));
  json errors = json::array();
  for (const auto& e : field.errors) errors.push_back({{"index", e.index}, {"error", e.message}});
  bundle["lb_errors"] = std::move(errors);
  bundle["config"]["mode"] = std::string(to_string(mode.variant));
  bundle["config"]["epsilon"] = mode.uses_epsilon() ? json(mode.epsilon) : json(nullptr);
}

void add_correlation_to_bundle(json& bundle, const CorrelationBiplot& corr) {
  bundle["correlation"] = to_json(corr.values);
  json flags = json::array();
  for (bool d : corr.degenerate_rows) flags.push_back(d);
  bundle["correlation_degenerate"] = flags;
}

std::vector<std::string> check_bundle(const json& b) {
  std::vector<std::string> problems;
  auto need = [&](const char* key) {
    if (!b.contains(key)) {
      problems.push_back(std::string("missing key '") + key + "'");
      return false;
    }
    return true;
  };
  if (!b.is_object()) return {"bundle is not a JSON object"};
  for (const char* key : {"config", "embedding", "eigenvalues", "inertia", "lb", "correlation", "distance",
                          "tree_digest"}) {
    need(key);
  }
  if (!problems.empty()) return problems;

  try {
    const auto& ids = b["embedding"].at("ids");
    const auto& coords = b["embedding"].at("coords");
    const std::size_t n = ids.size();
    if (coords.size() != n) problems.push_back("embedding has " + std::to_string(coords.size()) + " rows but " +
                                               std::to_string(n) + " ids");
    std::optional<std::size_t> k;
    for (const auto& row : coords) {
      if (!k) k = row.size();
      if (row.size() != *k) problems.push_back("embedding rows have different lengths");
    }
    if (b.contains("dims")) {
      const auto& d = b["dims"];
      if (d.at("n").get<std::size_t>() != n) problems.push_back("dims.n disagrees with the embedding");
      if (k && d.at("k").get<std::size_t>() != *k) problems.push_back("dims.k disagrees with the embedding");
    }
    if (b["eigenvalues"].size() != n) problems.push_back("eigenvalue count differs from sample count");
    std::optional<std::size_t> p;
    if (b.contains("variables")) p = b["variables"].size();
    if (b.contains("dims") && p && b["dims"].at("p").get<std::size_t>() != *p) {
      problems.push_back("dims.p disagrees with the variable list");
    }
    for (std::size_t i = 0; i < b["lb"].size(); ++i) {
      const auto& e = b["lb"][i];
      const auto& axes = e.at("axes");
      const std::string tag = "lb[" + std::to_string(i) + "]";
      if (!p) p = axes.size();
      if (axes.size() != *p) problems.push_back(tag + " has " + std::to_string(axes.size()) + " rows, expected p");
      if (e.at("point").size() != *p) problems.push_back(tag + " point length differs from p");
      for (const auto& row : axes) {
        if (k && row.size() != *k) {
          problems.push_back(tag + " has rows of length " + std::to_string(row.size()) + ", expected k");
          break;
        }
      }
    }
    if (!b["correlation"].is_null()) {
      const auto& c = b["correlation"];
      if (p && c.size() != *p) problems.push_back("correlation matrix row count differs from p");
      for (const auto& row : c) {
        if (k && row.size() != *k) {
          problems.push_back("correlation matrix column count differs from k");
          break;
        }
      }
    }
  } catch (const json::exception& e) {
    problems.push_back(std::string("malformed bundle: ") + e.what());
  }
  return problems;
}

json simulation_sidecar(const SimulatedDataset& ds) {
  const auto& c = ds.config;
  json j;
  j["config"] = {{"depth", c.depth}, {"n", c.n}, {"p", c.p()}, {"c1", c.c1},
                 {"c2", c.c2},       {"s", c.s}, {"seed", c.seed}};
  j["group"] = ds.group;
  j["shallow"] = ds.shallow;
  j["deep"] = ds.deep;
  j["tips"] = ds.tree.tip_order();
  j["tree_digest"] = tree_digest(ds.tree);
  return j;
}

}  // namespace lbiplot
