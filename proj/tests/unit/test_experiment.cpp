#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lassocv/errors.hpp"
#include "lassocv/experiment.hpp"
#include "lassocv/serialize.hpp"

using namespace lassocv;

namespace {

// Small, fast sweep on the shipped base rows.
ExperimentConfig mini_config() {
  ExperimentConfig config = default_config();
  config.n_schedule = {20, 40};
  config.reps = 2;
  config.m_draws = 12;
  config.grid_resolution = 20;
  config.master_seed = 314159;
  return config;
}

std::vector<SweepRecord> parse_records_csv(const std::string& csv) {
  std::vector<SweepRecord> out;
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::istringstream cell_stream(line);
    std::string cell;
    while (std::getline(cell_stream, cell, ',')) {
      cells.push_back(cell);
    }
    REQUIRE(cells.size() == 16);
    auto num = [&](int idx) {
      double value = 0.0;
      const auto& s = cells[static_cast<std::size_t>(idx)];
      std::from_chars(s.data(), s.data() + s.size(), value);
      return value;
    };
    SweepRecord r;
    r.n = std::stoi(cells[1]);
    r.rep = std::stoi(cells[2]);
    r.seed = std::stoull(cells[3]);
    r.lambda_hat = num(4);
    r.lambda_star = num(5);
    r.risk_at_hat = num(6);
    r.risk_at_star = num(7);
    r.risk_gap = num(8);
    r.risk_gap_se = num(9);
    r.sup_gap = num(10);
    r.sup_gap_se = num(11);
    r.loo_stability = num(12);
    r.realized_max_slope = num(13);
    r.lipschitz_bound = num(14);
    r.slope_ratio_max = num(15);
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_SUITE("cli_experiments") {
  TEST_CASE("default config is valid and matches its documented shape") {
    const ExperimentConfig config = default_config();
    config.validate();
    CHECK(config.p == 5);
    CHECK(config.n_schedule == std::vector<int>{50, 100, 200, 400, 800});
    CHECK(config.reps == 20);
    CHECK(config.m_draws == 200);
    CHECK(config.design.base_rows.size() == 10);
    for (const auto& row : config.design.base_rows) {
      CHECK(row.norm() <= 2.0);
    }
    const DesignMatrix d = generate_design(config.design.with_n(50));
    CHECK(d.gram_min_eigenvalue() > 0.0);
  }

  TEST_CASE("shipped config file matches the built-in default") {
    const std::filesystem::path file =
        std::filesystem::path(LASSOCV_SOURCE_DIR) / "configs" / "default_sweep.json";
    const ExperimentConfig shipped = load_config_file(file.string());
    const ExperimentConfig builtin = default_config();
    CHECK(config_to_json(shipped) == config_to_json(builtin));
  }

  TEST_CASE("config json round trip") {
    const ExperimentConfig config = mini_config();
    const ExperimentConfig back = config_from_json(config_to_json(config));
    CHECK(back.n_schedule == config.n_schedule);
    CHECK(back.p == config.p);
    CHECK((back.theta - config.theta).norm() == 0.0);
    CHECK(back.sigma == config.sigma);
    CHECK(back.reps == config.reps);
    CHECK(back.m_draws == config.m_draws);
    CHECK(back.master_seed == config.master_seed);
    CHECK(back.design.base_rows.size() == config.design.base_rows.size());
    CHECK(config_to_json(back) == config_to_json(config));
  }

  TEST_CASE("config validation rejects bad schedules") {
    ExperimentConfig config = mini_config();
    config.n_schedule = {40, 40};
    CHECK_THROWS_AS(config.validate(), DimensionMismatch);
    config.n_schedule = {15};  // not a block multiple
    CHECK_THROWS_AS(config.validate(), BadBlockSize);
    config = mini_config();
    config.reps = 0;
    CHECK_THROWS_AS(config.validate(), DimensionMismatch);
  }

  TEST_CASE("sweep is deterministic byte for byte") {
    const ExperimentConfig config = mini_config();
    const ExperimentReport a = run_consistency_sweep(config);
    const ExperimentReport b = run_consistency_sweep(config);
    CHECK(records_csv(a) == records_csv(b));
    CHECK(report_json(a) == report_json(b));
    CHECK(aggregates_csv(a) == aggregates_csv(b));
    CHECK(a.records.size() == 4);
    CHECK(a.failures.empty());
  }

  TEST_CASE("seed isolation: extra reps leave existing records untouched") {
    ExperimentConfig config = mini_config();
    const ExperimentReport smaller = run_consistency_sweep(config);
    config.reps = 3;
    const ExperimentReport larger = run_consistency_sweep(config);
    for (const auto& before : smaller.records) {
      bool found = false;
      for (const auto& after : larger.records) {
        if (after.n == before.n && after.rep == before.rep) {
          found = true;
          CHECK(after.seed == before.seed);
          CHECK(after.lambda_hat == before.lambda_hat);
          CHECK(after.risk_gap == before.risk_gap);
          CHECK(after.sup_gap == before.sup_gap);
        }
      }
      CHECK(found);
    }
  }

  TEST_CASE("noiseless sweep has identically zero risk gaps") {
    ExperimentConfig config = mini_config();
    config.sigma = 0.0;
    const ExperimentReport report = run_consistency_sweep(config);
    REQUIRE_FALSE(report.records.empty());
    for (const auto& r : report.records) {
      // Zero up to representation noise: the CV vertex can sit O(1e-16)
      // away from the oracle grid point.
      CHECK(std::abs(r.risk_gap) <= 1e-20);
      CHECK(std::abs(r.lambda_hat - r.lambda_star) <= 1e-12);
      CHECK(r.risk_at_hat <= 1e-20);
    }
  }

  TEST_CASE("sweep records honor the per-segment slope bound and paired gaps") {
    const ExperimentReport report = run_consistency_sweep(mini_config());
    for (const auto& r : report.records) {
      CHECK(r.slope_ratio_max <= 1.0 + 1e-8);
      CHECK(r.realized_max_slope > 0.0);
      CHECK(r.lipschitz_bound >= r.realized_max_slope / std::sqrt(5.0) - 1e-12);
      // The oracle grid contains lambda_hat, so the paired gap cannot go
      // below zero, let alone -3 standard errors.
      CHECK(r.risk_gap >= 0.0);
      CHECK(r.risk_gap >= -3.0 * r.risk_gap_se);
      CHECK(r.lambda_hat >= 0.0);
      CHECK(r.lambda_star >= 0.0);
    }
  }

  TEST_CASE("emit: empty report gives header-only CSV, rows otherwise") {
    ExperimentReport empty;
    empty.config = mini_config();
    CHECK(records_csv(empty) ==
          "schema_version,n,rep,seed,lambda_hat,lambda_star,risk_at_hat,risk_at_star,"
          "risk_gap,risk_gap_se,sup_gap,sup_gap_se,loo_stability,realized_max_slope,"
          "lipschitz_bound,slope_ratio_max\n");

    const ExperimentReport report = run_consistency_sweep(mini_config());
    const std::string csv = records_csv(report);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + static_cast<long>(report.records.size()));
  }

  TEST_CASE("aggregates recomputed from the emitted CSV match the embedded ones") {
    const ExperimentReport report = run_consistency_sweep(mini_config());
    const std::vector<SweepRecord> parsed = parse_records_csv(records_csv(report));
    REQUIRE(parsed.size() == report.records.size());
    const std::vector<NAggregate> recomputed = aggregates_from_records(parsed);
    REQUIRE(recomputed.size() == report.aggregates.size());
    for (std::size_t k = 0; k < recomputed.size(); ++k) {
      CHECK(recomputed[k].n == report.aggregates[k].n);
      CHECK(recomputed[k].median_gap == report.aggregates[k].median_gap);
      CHECK(recomputed[k].q25_gap == report.aggregates[k].q25_gap);
      CHECK(recomputed[k].q75_gap == report.aggregates[k].q75_gap);
      CHECK(recomputed[k].median_supgap == report.aggregates[k].median_supgap);
      CHECK(recomputed[k].median_stability == report.aggregates[k].median_stability);
    }
  }

  TEST_CASE("emit_report writes the requested files") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "lassocv_emit_test";
    fs::remove_all(dir);
    const ExperimentReport report = run_consistency_sweep(mini_config());
    const auto csv_paths = emit_report(report, ReportFormat::Csv, dir.string());
    const auto json_paths = emit_report(report, ReportFormat::Json, dir.string());
    const auto plot_paths = emit_report(report, ReportFormat::PlotData, dir.string());
    REQUIRE(csv_paths.size() == 1);
    REQUIRE(json_paths.size() == 1);
    REQUIRE(plot_paths.size() == 1);
    for (const auto& path : {csv_paths[0], json_paths[0], plot_paths[0]}) {
      CHECK(fs::exists(path));
    }
    std::ifstream in(csv_paths[0], std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    CHECK(buffer.str() == records_csv(report));
    fs::remove_all(dir);
  }

  TEST_CASE("format_double round-trips through parsing") {
    for (double v : {0.1, 1.0 / 3.0, 1e-17, 123456.789, 0.0, -2.5e8}) {
      const std::string s = format_double(v);
      double back = 0.0;
      std::from_chars(s.data(), s.data() + s.size(), back);
      CHECK(back == v);
      CHECK(s.find(',') == std::string::npos);
    }
  }
}
