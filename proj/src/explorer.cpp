#include "lbiplot/explorer.hpp"

#include <httplib.h>

#include "lbiplot/error.hpp"

namespace lbiplot {

namespace {

constexpr const char* kIndexPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>lbiplot explorer</title></head>
<body>
<h1>lbiplot explorer</h1>
<p>No static UI directory was given (<code>--static DIR</code>). The JSON API is available:</p>
<ul>
<li>GET /api/embedding</li>
<li>GET /api/meta</li>
<li>GET /api/correlation</li>
<li>POST /api/lb {"point": [...], "mode": "positive", "epsilon": 1}</li>
</ul>
</body></html>
)";

ApiResponse error_response(int status, const std::string& message) { return {status, json{{"error", message}}}; }

LbMode default_mode(const DistanceSpec& spec) {
  switch (spec.smoothness()) {
    case Smoothness::differentiable: return LbMode::analytic();
    case Smoothness::continuous_nonsmooth: return LbMode::positive();
    case Smoothness::discontinuous: return LbMode::eps_positive(1.0);
  }
  return LbMode::positive();
}

}  // namespace

Explorer::Explorer(std::shared_ptr<const Analysis> analysis)
    : analysis_(std::move(analysis)), correlation_(correlation_biplot(analysis_->data.values, analysis_->solution)) {}

ApiResponse Explorer::embedding() const {
  const auto& a = *analysis_;
  json body;
  body["ids"] = a.data.ids;
  body["coords"] = to_json(a.solution.m_embed);
  body["k"] = a.solution.k;
  return {200, body};
}

ApiResponse Explorer::meta() const {
  const auto& a = *analysis_;
  json body = make_bundle(a);
  body.erase("embedding");
  body.erase("lb");
  body.erase("lb_errors");
  body.erase("lb_constancy");
  body.erase("correlation");
  body["default_mode"] = std::string(to_string(default_mode(a.spec()).variant));
  return {200, body};
}

ApiResponse Explorer::correlation() const {
  json body;
  body["variables"] = analysis_->data.columns;
  body["values"] = to_json(correlation_.values);
  json degenerate = json::array();
  for (bool d : correlation_.degenerate_rows) degenerate.push_back(d);
  body["degenerate_rows"] = degenerate;
  return {200, body};
}

ApiResponse Explorer::local_biplot(const std::string& request_body) const {
  const auto& a = *analysis_;
  json req;
  try {
    req = json::parse(request_body);
  } catch (const json::parse_error& e) {
    return error_response(400, std::string("request body is not valid JSON: ") + e.what());
  }
  if (!req.is_object()) return error_response(400, "request body must be a JSON object");

  try {
    const Eigen::Index p = a.data.values.cols();
    Eigen::VectorXd point;
    if (req.contains("point")) {
      point = vector_from_json(req["point"]);
      if (point.size() != p) {
        return error_response(400, "point has length " + std::to_string(point.size()) + ", expected " +
                                       std::to_string(p));
      }
    } else if (req.contains("sample")) {
      const auto& s = req["sample"];
      std::optional<std::size_t> row;
      if (s.is_number_integer()) {
        const auto idx = s.get<long long>();
        if (idx >= 0 && idx < static_cast<long long>(a.data.ids.size())) row = static_cast<std::size_t>(idx);
      } else if (s.is_string()) {
        for (std::size_t i = 0; i < a.data.ids.size(); ++i) {
          if (a.data.ids[i] == s.get<std::string>()) row = i;
        }
      }
      if (!row) return error_response(400, "unknown sample " + s.dump());
      point = a.data.values.row(static_cast<Eigen::Index>(*row)).transpose();
    } else {
      return error_response(400, "request needs 'point' or 'sample'");
    }

    LbMode mode = default_mode(a.spec());
    if (req.contains("mode") && !req["mode"].is_null()) {
      if (!req["mode"].is_string()) return error_response(400, "mode must be a string");
      mode.variant = parse_lb_variant(req["mode"].get<std::string>());
    }
    if (req.contains("epsilon") && !req["epsilon"].is_null()) {
      if (!req["epsilon"].is_number()) return error_response(400, "epsilon must be a number");
      mode.epsilon = req["epsilon"].get<double>();
    }

    const LocalBiplotMatrix lb = lb_axes(a.solution, *a.distances, point, mode);
    json body = lb_matrix_to_json(lb);
    body["embedding"] = to_json(embed_supplemental(a.solution, *a.distances, point));
    body["variables"] = a.data.columns;
    return {200, body};
  } catch (const NumericError& e) {
    return error_response(500, e.what());
  } catch (const Error& e) {
    return error_response(400, e.what());
  }
}

struct ExplorerServer::Impl {
  std::shared_ptr<const Explorer> explorer;
  ServeOptions options;
  httplib::Server server;
};

namespace {

void reply(httplib::Response& res, const ApiResponse& r) {
  res.status = r.status;
  res.set_content(dump_json(r.body, -1), "application/json");
}

}  // namespace

ExplorerServer::ExplorerServer(std::shared_ptr<const Explorer> explorer, ServeOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->explorer = std::move(explorer);
  impl_->options = std::move(options);
  auto& srv = impl_->server;
  // httplib's default SO_REUSEPORT would let a second server share an occupied port.
  srv.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  const Explorer* ex = impl_->explorer.get();

  srv.Get("/api/embedding", [ex](const httplib::Request&, httplib::Response& res) { reply(res, ex->embedding()); });
  srv.Get("/api/meta", [ex](const httplib::Request&, httplib::Response& res) { reply(res, ex->meta()); });
  srv.Get("/api/correlation",
          [ex](const httplib::Request&, httplib::Response& res) { reply(res, ex->correlation()); });
  srv.Post("/api/lb", [ex](const httplib::Request& req, httplib::Response& res) {
    reply(res, ex->local_biplot(req.body));
  });

  if (impl_->options.static_dir) {
    if (!srv.set_mount_point("/", *impl_->options.static_dir)) {
      throw ValidationError("static directory '" + *impl_->options.static_dir + "' does not exist");
    }
  } else {
    srv.Get("/", [](const httplib::Request&, httplib::Response& res) { res.set_content(kIndexPage, "text/html"); });
  }
  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      res.set_content(dump_json(json{{"error", "HTTP " + std::to_string(res.status)}}, -1), "application/json");
    }
  });
}

ExplorerServer::~ExplorerServer() = default;

std::optional<int> ExplorerServer::bind() {
  auto& srv = impl_->server;
  if (impl_->options.port == 0) {
    const int port = srv.bind_to_any_port(impl_->options.host);
    if (port <= 0) return std::nullopt;
    return port;
  }
  if (!srv.bind_to_port(impl_->options.host, impl_->options.port)) return std::nullopt;
  return impl_->options.port;
}

void ExplorerServer::listen() { impl_->server.listen_after_bind(); }

void ExplorerServer::stop() { impl_->server.stop(); }

}  // namespace lbiplot
