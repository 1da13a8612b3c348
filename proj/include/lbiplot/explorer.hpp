#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "lbiplot/bundle.hpp"

namespace lbiplot {

struct ApiResponse {
  int status = 200;
  json body;
};

// Read-only JSON API over one fitted analysis. All handlers are const and
// share the immutable Analysis, so concurrent requests need no locking.
class Explorer {
public:
  explicit Explorer(std::shared_ptr<const Analysis> analysis);

  ApiResponse embedding() const;
  ApiResponse meta() const;
  ApiResponse correlation() const;
  /// Body: {"point": [...]} or {"sample": id-or-index}, plus "mode" and optional "epsilon".
  /// Reply: {point, mode, epsilon, axes, embedding}, where embedding is f(point).
  ApiResponse local_biplot(const std::string& request_body) const;

  const Analysis& analysis() const noexcept { return *analysis_; }

private:
  std::shared_ptr<const Analysis> analysis_;
  CorrelationBiplot correlation_;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::string> static_dir;
};

class ExplorerServer {
public:
  ExplorerServer(std::shared_ptr<const Explorer> explorer, ServeOptions options);
  ~ExplorerServer();
  ExplorerServer(const ExplorerServer&) = delete;
  ExplorerServer& operator=(const ExplorerServer&) = delete;

  /// Binds the port (0 picks a free one). Returns the bound port, or nullopt if binding failed.
  std::optional<int> bind();
  /// Blocks serving requests until stop() is called.
  void listen();
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lbiplot
