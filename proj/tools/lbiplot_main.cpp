// lbiplot: classical MDS with local biplot axes.
//
//   lbiplot simulate --depth 5 --n 20 --seed 7 --out sim/
//   lbiplot mds --data sim/counts.csv --tree sim/tree.nwk --distance wunifrac --k 2 --out run/
//   lbiplot lb  --bundle run/bundle.json --mode positive --points samples --out run_lb/
//   lbiplot serve --bundle run/bundle.json --port 8080
//   lbiplot check run_lb/bundle.json
//
// Exit codes: 0 success, 2 validation/domain error, 3 numeric failure.

#include <csignal>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lbiplot/bundle.hpp"
#include "lbiplot/error.hpp"
#include "lbiplot/explorer.hpp"
#include "lbiplot/simulate.hpp"

namespace fs = std::filesystem;
using namespace lbiplot;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct InputFlags {
  std::string data;
  bool id_col = false;
  std::string distance = "euclidean";
  std::string tree;
  std::string q;
  int k = 2;
  std::string center = "off";
  std::string bundle;

  void attach(CLI::App* cmd, bool allow_bundle) {
    cmd->add_option("--data", data, "Samples CSV (header row of variable names)");
    cmd->add_flag("--id-col", id_col, "First CSV column holds sample ids");
    cmd->add_option("--distance", distance, "euclidean|geuclidean|manhattan|wunifrac|uunifrac")
        ->check(CLI::IsMember({"euclidean", "geuclidean", "manhattan", "wunifrac", "uunifrac"}));
    cmd->add_option("--tree", tree, "Newick tree (UniFrac distances)");
    cmd->add_option("--q", q, "Header-free CSV with the Q matrix (geuclidean)");
    cmd->add_option("--k", k, "Embedding dimension");
    cmd->add_option("--center", center, "Center data columns before computing distances")
        ->check(CLI::IsMember({"on", "off"}));
    if (allow_bundle) cmd->add_option("--bundle", bundle, "Reuse the inputs recorded in an existing bundle");
  }

  AnalysisOptions options() const {
    if (!bundle.empty()) {
      json b = json::parse(read_text_file(bundle));
      if (!b.contains("config")) throw ValidationError("bundle '" + bundle + "' has no config section");
      return AnalysisOptions::from_json(b["config"]);
    }
    if (data.empty()) throw ValidationError("--data is required (or --bundle)");
    AnalysisOptions o;
    o.data_path = data;
    o.id_column = id_col;
    o.distance = distance;
    if (!tree.empty()) o.tree_path = tree;
    if (!q.empty()) o.q_path = q;
    o.k = k;
    o.center = center == "on";
    return o;
  }
};

void emit(const json& bundle, const std::string& out_dir) {
  const std::string text = dump_json(bundle);
  if (out_dir.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(out_dir);
  write_text_file((fs::path(out_dir) / "bundle.json").string(), text);
}

int cmd_simulate(const SimulationConfig& config, const std::string& out_dir) {
  config.validate();
  if (out_dir.empty()) throw ValidationError("--out is required");
  const SimulatedDataset ds = simulate(config);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_text_file((dir / "counts.csv").string(), format_labeled_csv(ds.tree.tip_order(), ds.data));
  write_text_file((dir / "tree.nwk").string(), ds.tree.to_newick() + "\n");
  write_text_file((dir / "sidecar.json").string(), dump_json(simulation_sidecar(ds)));
  std::cerr << "wrote " << (dir / "counts.csv").string() << ", " << (dir / "tree.nwk").string() << ", "
            << (dir / "sidecar.json").string() << "\n";
  return 0;
}

int cmd_mds(const InputFlags& in, bool with_correlation, const std::string& out_dir) {
  const Analysis a = run_analysis(in.options());
  json bundle = make_bundle(a);
  if (with_correlation) add_correlation_to_bundle(bundle, correlation_biplot(a.data.values, a.solution));
  emit(bundle, out_dir);
  return 0;
}

int cmd_lb(const InputFlags& in, const std::string& mode_name, double epsilon, const std::string& points,
           bool with_correlation, const std::string& out_dir) {
  const Analysis a = run_analysis(in.options());
  const LbMode mode{parse_lb_variant(mode_name), epsilon};
  check_mode(mode, a.spec());
  const Eigen::MatrixXd pts = load_points(a, points, a.options.id_column);

  const LbField field = lb_field(a.solution, *a.distances, pts, mode);
  json bundle = make_bundle(a);
  add_lb_to_bundle(bundle, field, mode);
  bundle["config"]["points"] = points;
  if (with_correlation) add_correlation_to_bundle(bundle, correlation_biplot(a.data.values, a.solution));
  emit(bundle, out_dir);

  if (!field.errors.empty()) {
    for (std::size_t i = 0; i < field.errors.size() && i < 5; ++i) {
      std::cerr << "error: point " << field.errors[i].index << ": " << field.errors[i].message << "\n";
    }
    if (field.errors.size() > 5) std::cerr << "(" << field.errors.size() - 5 << " more)\n";
    return kExitValidation;
  }
  return 0;
}

ExplorerServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const InputFlags& in, const std::string& host, int port, const std::string& static_dir) {
  auto analysis = std::make_shared<const Analysis>(run_analysis(in.options()));
  auto explorer = std::make_shared<const Explorer>(analysis);
  ServeOptions opts;
  opts.host = host;
  opts.port = port;
  if (!static_dir.empty()) opts.static_dir = static_dir;
  ExplorerServer server(explorer, opts);
  const auto bound = server.bind();
  if (!bound) throw ValidationError("cannot bind " + host + ":" + std::to_string(port) + " (port in use?)");
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  std::cerr << "serving on http://" << host << ":" << *bound << "/\n";
  server.listen();
  g_server = nullptr;
  return 0;
}

int cmd_check(const std::string& path) {
  const json b = json::parse(read_text_file(path));
  const auto problems = check_bundle(b);
  for (const auto& p : problems) std::cerr << "error: " << p << "\n";
  if (!problems.empty()) return kExitValidation;
  std::cerr << "ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical MDS embeddings with local biplot axes"};
  app.require_subcommand(1);

  SimulationConfig sim;
  std::string sim_out;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate the two-group phylogenetic count dataset");
  simulate_cmd->add_option("--depth", sim.depth, "Tree depth (p = 2^depth tips)");
  simulate_cmd->add_option("--n", sim.n, "Number of samples (even)");
  simulate_cmd->add_option("--c1", sim.c1, "Base abundance");
  simulate_cmd->add_option("--c2", sim.c2, "Log mass shift between tree halves");
  simulate_cmd->add_option("--s", sim.s, "Double-Poisson dispersion");
  simulate_cmd->add_option("--seed", sim.seed, "RNG seed");
  simulate_cmd->add_option("--out", sim_out, "Output directory");

  InputFlags mds_in;
  bool mds_corr = false;
  std::string mds_out;
  auto* mds_cmd = app.add_subcommand("mds", "Classical scaling; writes an analysis bundle");
  mds_in.attach(mds_cmd, false);
  mds_cmd->add_flag("--correlation", mds_corr, "Include the correlation biplot");
  mds_cmd->add_option("--out", mds_out, "Output directory (bundle.json); stdout if omitted");

  InputFlags lb_in;
  std::string lb_mode = "analytic";
  double lb_eps = 1.0;
  std::string lb_points = "samples";
  bool lb_corr = false;
  std::string lb_out;
  auto* lb_cmd = app.add_subcommand("lb", "Local biplot axes at query points");
  lb_in.attach(lb_cmd, true);
  lb_cmd->add_option("--mode", lb_mode, "analytic|positive|negative|eps-positive|eps-negative")
      ->check(CLI::IsMember({"analytic", "positive", "negative", "eps-positive", "eps-negative"}));
  lb_cmd->add_option("--epsilon", lb_eps, "Step for the eps modes (1 suits count data)");
  lb_cmd->add_option("--points", lb_points, "'samples' or a CSV of query points");
  lb_cmd->add_flag("--correlation", lb_corr, "Include the correlation biplot");
  lb_cmd->add_option("--out", lb_out, "Output directory (bundle.json); stdout if omitted");

  InputFlags serve_in;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the JSON API (and optional static UI)");
  serve_in.attach(serve_cmd, true);
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--port", port, "Port");
  serve_cmd->add_option("--static", static_dir, "Directory of UI assets served at /");

  std::string check_path;
  auto* check_cmd = app.add_subcommand("check", "Validate a bundle's internal consistency");
  check_cmd->add_option("bundle", check_path, "Bundle JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*simulate_cmd) return cmd_simulate(sim, sim_out);
    if (*mds_cmd) return cmd_mds(mds_in, mds_corr, mds_out);
    if (*lb_cmd) return cmd_lb(lb_in, lb_mode, lb_eps, lb_points, lb_corr, lb_out);
    if (*serve_cmd) return cmd_serve(serve_in, host, port, static_dir);
    if (*check_cmd) return cmd_check(check_path);
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const json::exception& e) {
    std::cerr << "error: invalid JSON: " << e.what() << "\n";
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
