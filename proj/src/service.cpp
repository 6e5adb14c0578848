#include "rise/service.hpp"

#include <httplib.h>

#include <sstream>

#include "rise/json_io.hpp"

namespace rise {

using nlohmann::json;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownRun:
    case ErrorCode::UnknownAttribute:
    case ErrorCode::UnknownEnvironment:
      return 404;
    case ErrorCode::MissingGroup:
      return 422;
    case ErrorCode::DuplicateRun:
      return 409;
    case ErrorCode::StoreError:
    case ErrorCode::IoError:
      return 500;
    default:
      return 400;
  }
}

namespace {

constexpr const char* kJson = "application/json";

constexpr const char* kPlaceholderPage =
    "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>RISE</title></head>\n"
    "<body><h1>RISE residual inspection service</h1>\n"
    "<p>The web UI bundle is not installed. The JSON API is available:</p>\n"
    "<ul><li>GET /api/v1/runs</li><li>GET /api/v1/curve?run=&amp;attribute=&amp;env=</li>"
    "<li>GET /api/v1/report?run=&amp;attribute=&amp;env=</li><li>POST /api/v1/runs</li></ul>\n"
    "</body></html>\n";

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, const Error& e) {
  send_json(res, http_status(e.code()), error_body(e));
}

void send_bad_request(httplib::Response& res, const std::string& message) {
  send_json(res, 400, {{"error", {{"code", "bad_request"}, {"message", message}}}});
}

std::optional<Selection> selection_from(const httplib::Request& req, httplib::Response& res) {
  if (!req.has_param("run") || !req.has_param("attribute")) {
    send_bad_request(res, "query parameters 'run' and 'attribute' are required");
    return std::nullopt;
  }
  Selection s;
  s.run_id = req.get_param_value("run");
  s.attribute = req.get_param_value("attribute");
  s.environment = req.has_param("env") ? req.get_param_value("env") : "all";
  return s;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

struct ApiServer::Impl {
  Impl(Store& s, ServiceOptions o) : store(s), options(std::move(o)) { install(); }

  void install();
  void upload(const httplib::Request& req, httplib::Response& res);

  Store& store;
  ServiceOptions options;
  httplib::Server server;
  int bound_port = -1;
};

void ApiServer::Impl::install() {
  // httplib's default adds SO_REUSEPORT, which lets a second server share a
  // busy port; an occupied port must fail to bind instead.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });

  server.Get("/api/v1/runs", [this](const httplib::Request&, httplib::Response& res) {
    try {
      json body = json::array();
      for (const auto& run : store.list_runs()) body.push_back(run_summary_json(run));
      send_json(res, 200, body);
    } catch (const Error& e) {
      send_json(res, 500, error_body(e));
    }
  });

  server.Get("/api/v1/curve", [this](const httplib::Request& req, httplib::Response& res) {
    const auto selection = selection_from(req, res);
    if (!selection) return;
    try {
      const auto analysis = evaluate(store, *selection, options.report);
      send_json(res, 200, curve_payload(analysis, options.max_points));
    } catch (const Error& e) {
      send_error(res, e);
    }
  });

  server.Get("/api/v1/report", [this](const httplib::Request& req, httplib::Response& res) {
    const auto selection = selection_from(req, res);
    if (!selection) return;
    try {
      send_json(res, 200, json(evaluate(store, *selection, options.report).report));
    } catch (const Error& e) {
      send_error(res, e);
    }
  });

  server.Post("/api/v1/runs", [this](const httplib::Request& req, httplib::Response& res) {
    upload(req, res);
  });

  std::error_code ec;
  if (!options.ui_dir.empty() && std::filesystem::is_directory(options.ui_dir, ec)) {
    server.set_mount_point("/", options.ui_dir.string());
  } else {
    server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
    });
  }
}

void ApiServer::Impl::upload(const httplib::Request& req, httplib::Response& res) {
  if (!req.is_multipart_form_data()) {
    send_bad_request(res, "expected multipart/form-data");
    return;
  }
  auto field = [&](const char* name) -> std::optional<std::string> {
    if (!req.has_file(name)) return std::nullopt;
    return req.get_file_value(name).content;
  };
  const auto run_id = field("run_id");
  const auto attributes = field("attributes");
  const auto csv = req.has_file("predictions") ? field("predictions") : field("file");
  if (!run_id || !attributes || !csv) {
    send_bad_request(res, "multipart fields 'run_id', 'attributes' and 'predictions' are required");
    return;
  }
  try {
    std::istringstream in(*csv);
    const auto table = parse_predictions(in);
    RunManifest entry;
    entry.run_id = *run_id;
    entry.dataset = field("dataset").value_or("");
    entry.algorithm = field("algorithm").value_or(*run_id);
    entry.attribute_names = split_list(*attributes);
    entry.threshold = options.report.threshold;
    const auto id = store.register_run(std::move(entry), table);
    send_json(res, 201, {{"run_id", id}});
  } catch (const Error& e) {
    // Store write failures are server-side; everything else is the upload.
    const int status = e.code() == ErrorCode::DuplicateRun ? 409
                       : (e.code() == ErrorCode::IoError || e.code() == ErrorCode::StoreError)
                           ? 500
                           : 400;
    send_json(res, status, error_body(e));
  }
}

ApiServer::ApiServer(Store& store, ServiceOptions options)
    : impl_(std::make_unique<Impl>(store, std::move(options))) {}

ApiServer::~ApiServer() { stop(); }

bool ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    impl_->bound_port = impl_->server.bind_to_any_port(host);
    return impl_->bound_port > 0;
  }
  if (!impl_->server.bind_to_port(host, port)) return false;
  impl_->bound_port = port;
  return true;
}

int ApiServer::port() const { return impl_->bound_port; }

bool ApiServer::listen() { return impl_->server.listen_after_bind(); }

void ApiServer::stop() {
  if (impl_) impl_->server.stop();
}

bool ApiServer::is_running() const { return impl_->server.is_running(); }

}  // namespace rise
