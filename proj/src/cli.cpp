#include "rise/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "rise/report_table.hpp"
#include "rise/service.hpp"
#include "rise/store.hpp"
#include "rise/svg_plot.hpp"

namespace rise {

namespace {

std::atomic<ApiServer*> g_serving{nullptr};

extern "C" void stop_serving(int) {
  if (auto* server = g_serving.load()) server->stop();
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateRun: return exit_code::kDuplicate;
    case ErrorCode::IoError:
    case ErrorCode::StoreError: return exit_code::kIo;
    default: return exit_code::kInput;
  }
}

int report_error(std::ostream& err, const Error& e) {
  err << "rise: " << to_string(e.code()) << ": " << e.what() << '\n';
  return exit_for(e.code());
}

std::string resolve_store(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("RISE_STORE_DIR"); env && *env) return env;
  return {};
}

struct SelectionArgs {
  std::string store;
  std::string attribute;
  std::string env = "all";
  double threshold = kDefaultThreshold;
};

void add_selection_flags(CLI::App* cmd, SelectionArgs& args) {
  cmd->add_option("--store,--store-dir", args.store, "Store directory (default: $RISE_STORE_DIR)");
  cmd->add_option("--attribute", args.attribute, "Protected attribute column")->required();
  cmd->add_option("--env", args.env, "Environment tag or 'all'");
  cmd->add_option("--threshold", args.threshold, "Classification threshold for Acc/DP/MD")
      ->check(CLI::Range(0.0, 1.0));
}

std::string row_label(const RunManifest& run) {
  return run.algorithm.empty() ? run.run_id : run.algorithm;
}

}  // namespace

int run_cli(int argc, const char* const* argv, const CliStreams& io) {
  CLI::App app{"Residual inspection of classifier fairness"};
  app.name("rise");
  app.require_subcommand(1);

  // ingest
  struct {
    std::string store, run, dataset, algorithm, file;
    std::vector<std::string> attributes;
    double threshold = kDefaultThreshold;
  } ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate a prediction CSV and register a run");
  ingest_cmd->add_option("--store,--store-dir", ingest.store, "Store directory");
  ingest_cmd->add_option("--run", ingest.run, "Run identifier")->required();
  ingest_cmd->add_option("--dataset", ingest.dataset, "Dataset name")->required();
  ingest_cmd->add_option("--algorithm", ingest.algorithm, "Algorithm name")->required();
  ingest_cmd->add_option("--attributes", ingest.attributes, "Comma-separated attribute columns")
      ->required()
      ->delimiter(',');
  ingest_cmd->add_option("--threshold", ingest.threshold, "Threshold for precomputed metrics")
      ->check(CLI::Range(0.0, 1.0));
  ingest_cmd->add_option("FILE", ingest.file, "Prediction CSV")->required();

  // report
  SelectionArgs report_sel;
  std::vector<std::string> report_runs;
  std::string report_format = "table";
  std::string report_source = "live";
  bool report_split = false;
  auto* report_cmd = app.add_subcommand("report", "Print indicator rows for one or more runs");
  add_selection_flags(report_cmd, report_sel);
  report_cmd->add_option("--run", report_runs, "Run identifier(s)")->required()->delimiter(',');
  report_cmd->add_option("--format", report_format, "table or csv")
      ->check(CLI::IsMember({"table", "csv"}));
  report_cmd->add_option("--source", report_source,
                         "live: compute residual indicators; stored: print recorded values")
      ->check(CLI::IsMember({"live", "stored"}));
  report_cmd->add_flag("--split", report_split, "With --env all, one row per environment");

  // plot
  SelectionArgs plot_sel;
  std::string plot_run, plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "Write the sorted residual view as SVG");
  add_selection_flags(plot_cmd, plot_sel);
  plot_cmd->add_option("--run", plot_run, "Run identifier")->required();
  plot_cmd->add_option("-o,--output", plot_out, "Output SVG file")->required();

  // serve
  struct {
    std::string store, host = "127.0.0.1", ui_dir;
    int port = 8080;
    double threshold = kDefaultThreshold;
  } serve;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API and web UI");
  serve_cmd->add_option("--store,--store-dir", serve.store, "Store directory");
  serve_cmd->add_option("--host", serve.host, "Bind address");
  serve_cmd->add_option("--port", serve.port, "Port (0 picks a free port)")
      ->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--ui-dir", serve.ui_dir, "Built web UI bundle to serve at /");
  serve_cmd->add_option("--threshold", serve.threshold, "Classification threshold")
      ->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    io.out << app.help();
    return exit_code::kOk;
  } catch (const CLI::CallForAllHelp& e) {
    io.out << app.help("", CLI::AppFormatMode::All);
    return exit_code::kOk;
  } catch (const CLI::ParseError& e) {
    io.err << "rise: " << e.what() << '\n';
    return exit_code::kInput;
  }

  auto need_store = [&](const std::string& flag) -> std::optional<std::string> {
    auto dir = resolve_store(flag);
    if (dir.empty()) io.err << "rise: no store directory (use --store or RISE_STORE_DIR)\n";
    return dir.empty() ? std::nullopt : std::optional(dir);
  };

  try {
    if (*ingest_cmd) {
      const auto dir = need_store(ingest.store);
      if (!dir) return exit_code::kInput;
      PredictionTable table;
      try {
        table = parse_predictions(std::filesystem::path(ingest.file));
      } catch (const Error& e) {
        io.err << "rise: " << ingest.file << ": " << e.what() << '\n';
        return exit_for(e.code());
      }
      Store store(*dir, Store::Mode::CreateIfMissing);
      RunManifest entry;
      entry.run_id = ingest.run;
      entry.dataset = ingest.dataset;
      entry.algorithm = ingest.algorithm;
      entry.attribute_names = ingest.attributes;
      entry.threshold = ingest.threshold;
      io.out << store.register_run(std::move(entry), table) << '\n';
      return exit_code::kOk;
    }

    if (*report_cmd) {
      const auto dir = need_store(report_sel.store);
      if (!dir) return exit_code::kInput;
      Store store(*dir);
      ReportOptions options;
      options.threshold = report_sel.threshold;
      std::vector<ReportRow> rows;
      for (const auto& run_id : report_runs) {
        const auto run = store.get_run(run_id);
        std::vector<std::pair<std::string, std::string>> targets;  // label, env
        if (report_split && report_sel.env == "all") {
          for (const auto& env : run.environments) targets.emplace_back(row_label(run) + "@" + env, env);
        } else {
          targets.emplace_back(row_label(run), report_sel.env);
        }
        for (const auto& [label, env] : targets) {
          if (report_source == "stored") {
            auto row = row_from_stored(label, run, env, report_sel.attribute);
            if (!row) {
              io.err << "rise: run '" << run_id << "' has no stored indicators for environment '"
                     << env << "' and attribute '" << report_sel.attribute << "'\n";
              return exit_code::kInput;
            }
            rows.push_back(std::move(*row));
          } else {
            const Selection sel{run_id, report_sel.attribute, env};
            rows.push_back(row_from_report(label, evaluate(store, sel, options).report));
          }
        }
      }
      io.out << (report_format == "csv" ? render_csv(rows) : render_table(rows));
      return exit_code::kOk;
    }

    if (*plot_cmd) {
      const auto dir = need_store(plot_sel.store);
      if (!dir) return exit_code::kInput;
      Store store(*dir);
      ReportOptions options;
      options.threshold = plot_sel.threshold;
      const auto analysis =
          evaluate(store, {plot_run, plot_sel.attribute, plot_sel.env}, options);
      const auto svg = render_svg(analysis);
      std::ofstream out(plot_out, std::ios::binary | std::ios::trunc);
      if (!out || !(out << svg) || !out.flush()) {
        io.err << "rise: cannot write " << plot_out << '\n';
        return exit_code::kIo;
      }
      return exit_code::kOk;
    }

    if (*serve_cmd) {
      const auto dir = need_store(serve.store);
      if (!dir) return exit_code::kInput;
      std::error_code ec;
      if (!std::filesystem::is_directory(*dir, ec)) {
        io.err << "rise: store directory does not exist: " << *dir << '\n';
        return exit_code::kInput;
      }
      Store store(*dir);
      ServiceOptions options;
      options.report.threshold = serve.threshold;
      options.ui_dir = serve.ui_dir;
      ApiServer server(store, options);
      if (!server.bind(serve.host, serve.port)) {
        io.err << "rise: cannot bind " << serve.host << ':' << serve.port << '\n';
        return exit_code::kBind;
      }
      io.out << "rise: serving " << *dir << " at http://" << serve.host << ':' << server.port()
             << std::endl;
      g_serving.store(&server);
      auto previous_int = std::signal(SIGINT, stop_serving);
      auto previous_term = std::signal(SIGTERM, stop_serving);
      if (io.on_serving) io.on_serving(server);
      server.listen();
      std::signal(SIGINT, previous_int);
      std::signal(SIGTERM, previous_term);
      g_serving.store(nullptr);
      return exit_code::kOk;
    }
  } catch (const Error& e) {
    return report_error(io.err, e);
  }
  return exit_code::kInput;
}

}  // namespace rise
