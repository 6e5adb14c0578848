// Regenerates tests/fixtures/store: five synthetic runs plus recorded table
// rows for IGA, IRM and MBDG.
//
//   make_fixture_store <empty-dir>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "rise/store.hpp"
#include "support/synthetic.hpp"

using namespace rise;
using testing::Engine;

namespace {

constexpr int kRows = 2000;

// Attribute 0 is the record's group ("gender"); attribute 1 ("age") and the
// environment are independent coin flips, shared by consecutive pairs so that
// duplicated groups stay duplicated inside each environment.
PredictionTable to_table(const std::vector<PredictionRecord>& records, Engine& rng) {
  std::bernoulli_distribution coin(0.5);
  PredictionTable t;
  t.attribute_names = {"gender", "age"};
  int age = 0;
  std::string env;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i % 2 == 0) {
      age = coin(rng) ? 1 : 0;
      env = coin(rng) ? "rainy" : "clear";
    }
    const auto& r = records[i];
    const double prob = std::round(r.prob_positive * 1e4) / 1e4;
    t.rows.push_back({prob, r.label, {r.group, age}, env});
  }
  return t;
}

RecordedIndicators recorded(double acc, double dp, double md, double f_mean, double f_shift,
                            double f_acc) {
  return {Indicator::defined(acc),    Indicator::defined(dp),      Indicator::defined(md),
          Indicator::defined(f_mean), Indicator::defined(f_shift), Indicator::defined(f_acc)};
}

double median_abs_residual(const std::vector<PredictionRecord>& records, GroupId group) {
  std::vector<double> e;
  for (const auto& r : records) {
    if (r.group == group) e.push_back(std::abs(r.prob_positive - r.label));
  }
  std::sort(e.begin(), e.end());
  const auto m = e.size() / 2;
  return e.size() % 2 ? e[m] : 0.5 * (e[m - 1] + e[m]);
}

void add(Store& store, const std::string& id, const std::string& algorithm,
         const PredictionTable& table, std::optional<RecordedIndicators> row = std::nullopt) {
  RunManifest m;
  m.run_id = id;
  m.dataset = "synthetic";
  m.algorithm = algorithm;
  m.attribute_names = table.attribute_names;
  m.created_at = "2026-01-01T00:00:00Z";
  if (row) m.recorded["all"]["gender"] = *row;
  store.register_run(std::move(m), table);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixture_store <empty-dir>\n";
    return 2;
  }
  Store store(argv[1], Store::Mode::CreateIfMissing);
  testing::AccurateModel model;
  model.base_rate = 0.65;

  Engine rng(1);
  add(store, "IGA", "IGA", to_table(testing::accurate_records(rng, kRows, model), rng),
      recorded(0.983, 0.858, 0.056, 0.942, 0.395, 1.449));

  rng.seed(2);
  add(store, "IRM", "IRM", to_table(testing::constant_records(kRows / 2, 0.65), rng),
      recorded(0.489, 0.972, 0.000, 0.960, 0.017, 0.001));

  rng.seed(3);
  auto biased = testing::accurate_records(rng, kRows, model);
  biased = testing::shift_hard_examples(biased, 0.15, median_abs_residual(biased, 1));
  add(store, "MBDG", "MBDG", to_table(biased, rng),
      recorded(0.960, 0.828, 0.023, 0.933, 0.042, 0.040));

  rng.seed(4);
  const auto base = testing::accurate_records(rng, kRows / 2, {});
  add(store, "identical", "identical", to_table(testing::duplicated_groups(base), rng));

  rng.seed(5);
  auto shifted = testing::accurate_records(rng, kRows, {});
  shifted = testing::shift_hard_examples(shifted, 0.15, 0.0);
  add(store, "shifted", "shifted", to_table(shifted, rng));
  return 0;
}
