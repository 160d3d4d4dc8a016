#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "justify/interaction.hpp"
#include "justify/justification.hpp"

namespace justify {

struct ServerOptions {
  std::string host = "0.0.0.0";
  int port = 8080;  // 0 picks a free port
  std::optional<std::filesystem::path> ui_dir;
};

/// HTTP+JSON front end:
///
///   GET  /items
///   GET  /items/{id}/justification?model=M
///   GET  /items/{id}/quotes?aspect=A&adjective=J | &sign=up|down
///   GET  /items/{id}/dimensions/{fine}?offset=K
///   GET  /items/{id}/reviews?offset=K
///   POST /sessions
///   POST /ratings
///   POST /events
///   GET  /sessions/{id}/metrics
///
/// Errors come back as {"error": "..."} with 400 (bad input) or 404.
class HttpServer {
 public:
  HttpServer(const JustificationService& service, InteractionStore& store, ServerOptions options);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds and returns the port actually used.
  int bind();
  /// Serves until stop(); call bind() first.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace justify
