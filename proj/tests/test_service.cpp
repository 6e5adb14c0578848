#include <doctest.h>

#include "rise/json_io.hpp"
#include "support/fixtures.hpp"
#include "support/server.hpp"
#include "support/temp_dir.hpp"

using namespace rise;
using nlohmann::json;
using testing::RunningServer;
using testing::TempDir;

namespace {

const std::vector<std::string> kFixtureRuns = {"IGA", "IRM", "MBDG", "identical", "shifted"};

std::string query(const std::string& path, const std::string& run, const std::string& attribute,
                  const std::string& env = "all") {
  return path + "?run=" + run + "&attribute=" + attribute + "&env=" + env;
}

json get_json(httplib::Client& c, const std::string& path, int expected_status) {
  const auto res = c.Get(path);
  REQUIRE(res);
  CHECK(res->status == expected_status);
  CHECK(res->get_header_value("Content-Type") == "application/json");
  return json::parse(res->body);
}

httplib::MultipartFormDataItems upload_form(const std::string& run_id, const std::string& csv,
                                            const std::string& attributes = "gender") {
  return {{"run_id", run_id, "", ""},
          {"attributes", attributes, "", ""},
          {"dataset", "uploaded", "", ""},
          {"predictions", csv, "predictions.csv", "text/csv"}};
}

// Valid CSV with `rows` data lines alternating groups; prob < 0.5 in group 0
// when `silent_group0` so its positive rate is zero.
std::string csv_text(int rows, bool silent_group0 = false, int only_group = -1) {
  std::string out = "prob,label,gender,env\n";
  for (int i = 0; i < rows; ++i) {
    const int g = only_group >= 0 ? only_group : i % 2;
    double p = 0.05 + 0.9 * ((i * 37) % 101) / 100.0;
    if (silent_group0 && g == 0) p = 0.4 * p;
    out += std::to_string(p) + "," + std::to_string((i * 7) % 3 == 0 ? 1 : 0) + "," +
           std::to_string(g) + ",lab\n";
  }
  return out;
}

}  // namespace

TEST_CASE("service: runs listing") {
  TempDir dir;
  Store empty(dir / "empty", Store::Mode::CreateIfMissing);
  {
    RunningServer server(empty);
    auto c = server.client();
    CHECK(get_json(c, "/api/v1/runs", 200) == json::array());
  }

  const Store fixtures(testing::fixture_store());
  Store store(testing::fixture_store());
  RunningServer server(store);
  auto c = server.client();
  const auto runs = get_json(c, "/api/v1/runs", 200);
  REQUIRE(runs.size() == kFixtureRuns.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    CHECK(runs[i]["run_id"] == kFixtureRuns[i]);
    CHECK(runs[i]["attributes"] == json({"gender", "age"}));
    CHECK(runs[i]["environments"] == json({"clear", "rainy"}));
    CHECK(runs[i]["dataset"] == "synthetic");
  }
}

TEST_CASE("service: malformed store is a server error") {
  TempDir dir;
  Store store(dir.path(), Store::Mode::CreateIfMissing);
  std::ofstream(dir / "manifest.json") << "[1, 2";
  RunningServer server(store);
  auto c = server.client();
  const auto body = get_json(c, "/api/v1/runs", 500);
  CHECK(body["error"]["code"] == "store_error");
  get_json(c, query("/api/v1/report", "IGA", "gender"), 500);
}

TEST_CASE("service: curve and report payloads") {
  Store store(testing::fixture_store());
  RunningServer server(store);
  auto c = server.client();

  const auto curve = get_json(c, query("/api/v1/curve", "IGA", "gender"), 200);
  CHECK(curve["n_total"] == 2000);
  CHECK(curve["n_points"] == 2000);
  CHECK(curve["downsampled"] == false);
  CHECK(curve["points"]["rank"].size() == 2000);
  CHECK(curve["points"]["rank"].back() == 1.0);
  CHECK(curve["segments"].size() == 6);
  for (const char* scope : {"global", "group0", "group1"}) {
    CHECK(curve["knees"][scope].contains("left"));
    CHECK(curve["knees"][scope].contains("right"));
  }
  const auto report = get_json(c, query("/api/v1/report", "IGA", "gender"), 200);
  CHECK(curve["report"] == report);
  CHECK(report["counts"]["n_total"] == 2000);
  CHECK(report["selection"] == json({{"run_id", "IGA"}, {"attribute", "gender"},
                                     {"environment", "all"}}));
  for (const char* key : {"acc", "dp", "md", "f_mean", "f_shift", "f_acc"}) {
    CHECK(report["indicators"].contains(key));
  }

  const auto clear = get_json(c, query("/api/v1/report", "IGA", "gender", "clear"), 200);
  CHECK(clear["counts"]["n_total"] < 2000);

  const auto same = get_json(c, query("/api/v1/report", "identical", "gender"), 200);
  CHECK(same["indicators"]["f_mean"] == 1.0);
  CHECK(same["indicators"]["f_shift"] == 0.0);
  CHECK(same["indicators"]["f_acc"] == 0.0);
  CHECK(same["indicators"]["md"] == 0.0);
  CHECK(same["indicators"]["dp"] == 1.0);
}

TEST_CASE("service: down-sampled curve carries the full-data indicators") {
  Store store(testing::fixture_store());
  ServiceOptions options;
  options.max_points = 100;
  RunningServer server(store, options);
  auto c = server.client();
  for (const auto& run : kFixtureRuns) {
    const auto curve = get_json(c, query("/api/v1/curve", run, "gender"), 200);
    CHECK(curve["downsampled"] == true);
    CHECK(curve["n_points"].get<int>() <= 100);
    CHECK(curve["points"]["residual"].size() == curve["n_points"].get<std::size_t>());
    CHECK(curve["report"] == get_json(c, query("/api/v1/report", run, "gender"), 200));
  }
}

TEST_CASE("service: selection errors") {
  TempDir dir;
  testing::copy_fixture_store(dir / "store");
  Store store(dir / "store");
  PredictionTable solo;
  {
    std::istringstream in(csv_text(30, false, 0));
    solo = parse_predictions(in);
  }
  RunManifest m;
  m.run_id = "solo";
  m.attribute_names = {"gender"};
  store.register_run(m, solo);

  RunningServer server(store);
  auto c = server.client();
  CHECK(get_json(c, query("/api/v1/curve", "nope", "gender"), 404)["error"]["code"] ==
        "unknown_run");
  CHECK(get_json(c, query("/api/v1/curve", "IGA", "race"), 404)["error"]["code"] ==
        "unknown_attribute");
  CHECK(get_json(c, query("/api/v1/report", "IGA", "gender", "snow"), 404)["error"]["code"] ==
        "unknown_environment");
  const auto missing = get_json(c, query("/api/v1/curve", "solo", "gender"), 422);
  CHECK(missing["error"]["code"] == "missing_group");
  CHECK(missing["error"]["message"].get<std::string>().find("missing group 1") !=
        std::string::npos);
  CHECK(get_json(c, "/api/v1/report?run=IGA", 400)["error"]["code"] == "bad_request");
}

TEST_CASE("service: undefined DP is null with a reason") {
  TempDir dir;
  Store store(dir.path(), Store::Mode::CreateIfMissing);
  RunningServer server(store);
  auto c = server.client();
  const auto res = c.Post("/api/v1/runs", upload_form("quiet", csv_text(60, true)));
  REQUIRE(res);
  REQUIRE(res->status == 201);
  const auto report = get_json(c, query("/api/v1/report", "quiet", "gender"), 200);
  CHECK(report["indicators"]["dp"].is_null());
  CHECK(report["notes"]["dp"]["reason"] == "zero_base_rate");
}

TEST_CASE("service: uploads") {
  TempDir dir;
  Store store(dir.path(), Store::Mode::CreateIfMissing);
  RunningServer server(store);
  auto c = server.client();

  auto res = c.Post("/api/v1/runs", upload_form("fresh", csv_text(40)));
  REQUIRE(res);
  CHECK(res->status == 201);
  CHECK(json::parse(res->body) == json({{"run_id", "fresh"}}));
  const auto runs = get_json(c, "/api/v1/runs", 200);
  REQUIRE(runs.size() == 1);
  CHECK(runs[0]["algorithm"] == "fresh");
  CHECK(runs[0]["environments"] == json({"lab"}));
  get_json(c, query("/api/v1/report", "fresh", "gender"), 200);

  res = c.Post("/api/v1/runs", upload_form("fresh", csv_text(40)));
  REQUIRE(res);
  CHECK(res->status == 409);
  CHECK(json::parse(res->body)["error"]["code"] == "duplicate_run");

  // Data line 16 sits on physical line 17.
  auto bad = csv_text(20);
  const auto at = [&] {
    std::size_t pos = 0;
    for (int i = 0; i < 16; ++i) pos = bad.find('\n', pos) + 1;
    return pos;
  }();
  bad.replace(at, bad.find(',', at) - at, "1.7");
  res = c.Post("/api/v1/runs", upload_form("bad", bad));
  REQUIRE(res);
  CHECK(res->status == 400);
  const auto err = json::parse(res->body)["error"];
  CHECK(err["line"] == 17);
  CHECK(err["field"] == "prob");
  CHECK(err["message"].get<std::string>().find("17") != std::string::npos);

  res = c.Post("/api/v1/runs", upload_form("mismatch", csv_text(20), "gender,age"));
  REQUIRE(res);
  CHECK(res->status == 400);

  res = c.Post("/api/v1/runs", httplib::MultipartFormDataItems{{"run_id", "x", "", ""}});
  REQUIRE(res);
  CHECK(res->status == 400);
  res = c.Post("/api/v1/runs", "{}", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK(get_json(c, "/api/v1/runs", 200).size() == 1);
}

TEST_CASE("service: repeated GETs are byte-identical") {
  Store store(testing::fixture_store());
  RunningServer server(store);
  auto c = server.client();
  for (const std::string path : {std::string("/api/v1/runs"), query("/api/v1/curve", "MBDG", "age"),
                                 query("/api/v1/report", "shifted", "gender", "rainy")}) {
    const auto a = c.Get(path);
    const auto b = c.Get(path);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(a->status == 200);
    CHECK(a->body == b->body);
  }
}

TEST_CASE("service: reports equal direct library calls") {
  const Store store(testing::fixture_store());
  Store served(testing::fixture_store());
  RunningServer server(served);
  auto c = server.client();
  for (const auto& run : kFixtureRuns) {
    for (const std::string attr : {"gender", "age"}) {
      for (const std::string env : {"all", "clear", "rainy"}) {
        const auto body = get_json(c, query("/api/v1/report", run, attr, env), 200);
        const auto direct = evaluate(store, {run, attr, env}).report;
        CHECK(body == json(direct));
      }
    }
  }
}

TEST_CASE("service: static root and CORS") {
  Store store(testing::fixture_store());
  {
    RunningServer server(store);
    auto c = server.client();
    const auto res = c.Get("/");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Content-Type").starts_with("text/html"));
    CHECK(res->body.find("/api/v1/runs") != std::string::npos);

    const auto api = c.Get("/api/v1/runs");
    REQUIRE(api);
    CHECK(api->get_header_value("Access-Control-Allow-Origin") == "*");
    const auto pre = c.Options("/api/v1/report");
    REQUIRE(pre);
    CHECK(pre->status == 204);
    CHECK(pre->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);
  }

  TempDir ui;
  std::ofstream(ui / "index.html") << "<html>bundle</html>";
  ServiceOptions options;
  options.ui_dir = ui.path();
  RunningServer server(store, options);
  auto c = server.client();
  const auto res = c.Get("/");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->body == "<html>bundle</html>");
  CHECK(c.Get("/api/v1/runs")->status == 200);
}
