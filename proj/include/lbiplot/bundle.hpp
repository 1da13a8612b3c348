#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lbiplot/csv.hpp"
#include "lbiplot/distances.hpp"
#include "lbiplot/json_writer.hpp"
#include "lbiplot/local_biplot.hpp"
#include "lbiplot/mds.hpp"
#include "lbiplot/simulate.hpp"

namespace lbiplot {

// Everything needed to reproduce an embedding from files on disk.
struct AnalysisOptions {
  std::string data_path;
  bool id_column = false;
  std::string distance = "euclidean";
  std::optional<std::string> tree_path;
  std::optional<std::string> q_path;
  int k = 2;
  bool center = false;

  json to_json() const;
  static AnalysisOptions from_json(const json& j);
};

// Loaded inputs plus the fitted MDS solution. Immutable after run_analysis.
struct Analysis {
  AnalysisOptions options;
  LabeledMatrix data;  // columns in tip order when a tree is used
  std::shared_ptr<const PhyloTree> tree;
  std::shared_ptr<const DistanceToSamples> distances;
  MdsSolution solution;

  const DistanceSpec& spec() const { return distances->spec(); }
};

/// Reorders data columns to the tree's tip order; ValidationError listing up to
/// five mismatched names when the label sets differ.
LabeledMatrix align_to_tips(const LabeledMatrix& data, const PhyloTree& tree);

/// Builds the distance spec from in-memory inputs (used by run_analysis and tests).
DistanceSpec make_distance_spec(DistanceKind kind, const std::shared_ptr<const PhyloTree>& tree,
                                const std::optional<Eigen::MatrixXd>& q, Eigen::Index p);

Analysis run_analysis(const AnalysisOptions& options);
Analysis run_analysis(const AnalysisOptions& options, LabeledMatrix data, std::shared_ptr<const PhyloTree> tree,
                      std::optional<Eigen::MatrixXd> q);

/// Query points for `--points`: "samples" or a CSV whose header names the variables.
Eigen::MatrixXd load_points(const Analysis& analysis, const std::string& points, bool id_column);

/// Base bundle: config, embedding, eigenvalues, inertia, distance, tree digest;
/// lb empty, correlation null.
json make_bundle(const Analysis& analysis);

void add_lb_to_bundle(json& bundle, const LbField& field, const LbMode& mode);
void add_correlation_to_bundle(json& bundle, const CorrelationBiplot& corr);

/// Problems with the bundle's mutual dimension consistency; empty when valid.
std::vector<std::string> check_bundle(const json& bundle);

json lb_matrix_to_json(const LocalBiplotMatrix& m);

/// JSON sidecar for a simulated dataset: group/shallow/deep vectors and the config echo.
json simulation_sidecar(const SimulatedDataset& ds);

}  // namespace lbiplot
