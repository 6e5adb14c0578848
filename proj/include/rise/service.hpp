#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "rise/store.hpp"

namespace rise {

struct ServiceOptions {
  ReportOptions report;
  Eigen::Index max_points = 5000;
  // Built web UI bundle served at "/"; a placeholder page is served when empty
  // or missing.
  std::filesystem::path ui_dir;
};

/// HTTP status for a library error.
int http_status(ErrorCode code);

// JSON API under /api/v1 over a Store:
//
//   GET  /api/v1/runs                          run summaries, ordered by id
//   GET  /api/v1/curve?run=&attribute=&env=    curve payload with indicators
//   GET  /api/v1/report?run=&attribute=&env=   indicator report only
//   POST /api/v1/runs                          multipart upload, 201 + run_id
class ApiServer {
 public:
  explicit ApiServer(Store& store, ServiceOptions options = {});
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds the listening socket; port 0 picks a free port. False on failure.
  bool bind(const std::string& host, int port);
  int port() const;
  /// Serves until stop() is called. Requires a successful bind().
  bool listen();
  void stop();
  bool is_running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rise
