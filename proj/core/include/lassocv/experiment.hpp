#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lassocv/design.hpp"

namespace lassocv {

/// Everything a consistency sweep needs. A single master seed pins every
/// draw: child seeds are derived per (n, rep, purpose), so adding
/// repetitions or schedule entries never disturbs existing records.
struct ExperimentConfig {
  DesignSpec design;            // n is taken from n_schedule entries
  std::vector<int> n_schedule;  // strictly increasing
  int p = 0;
  Eigen::VectorXd theta;
  double sigma = 1.0;
  NoiseFamily noise;
  int reps = 1;
  int m_draws = 200;
  std::uint64_t master_seed = 0;
  std::string output_dir = "out";
  int grid_resolution = 100;

  GroundTruth truth() const { return GroundTruth::make(theta, sigma, noise); }
  void validate() const;  // throws DimensionMismatch on an inconsistent config
};

/// The shipped default: a ten-row replicated block in R^5 (row norms < 2),
/// a 3-sparse target, unit Gaussian noise, n from 50 to 800.
ExperimentConfig default_config();

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config_file(const std::string& path);

struct SweepRecord {
  int n = 0;
  int rep = 0;
  std::uint64_t seed = 0;  // dataset child seed
  double lambda_hat = 0.0;
  double lambda_star = 0.0;
  double risk_at_hat = 0.0;
  double risk_at_star = 0.0;
  double risk_gap = 0.0;
  double risk_gap_se = 0.0;
  double sup_gap = 0.0;
  double sup_gap_se = 0.0;
  double loo_stability = 0.0;
  double realized_max_slope = 0.0;
  double lipschitz_bound = 0.0;
  double slope_ratio_max = 0.0;  // max over segments of ||slope|| / segment bound
};

struct SweepFailure {
  int n = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  std::string reason;
};

struct NAggregate {
  int n = 0;
  int records = 0;
  double median_gap = 0.0;
  double q25_gap = 0.0;
  double q75_gap = 0.0;
  double median_supgap = 0.0;
  double q25_supgap = 0.0;
  double q75_supgap = 0.0;
  double median_stability = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<SweepRecord> records;    // fixed (n, rep) order
  std::vector<SweepFailure> failures;  // skipped records, with their seeds
  std::vector<NAggregate> aggregates;
};

/// Runs the full consistency sweep: per (n, rep) realize a dataset, locate
/// the CV minimizer and the Monte-Carlo oracle minimizer on shared draws,
/// and collect the gap and stability diagnostics. Degenerate records are
/// skipped and logged; the sweep itself always completes.
ExperimentReport run_consistency_sweep(const ExperimentConfig& config);

std::vector<NAggregate> aggregates_from_records(const std::vector<SweepRecord>& records);

enum class ReportFormat { Csv, Json, PlotData };

// In-memory renderings (byte-stable given the report).
std::string records_csv(const ExperimentReport& report);
std::string aggregates_csv(const ExperimentReport& report);
std::string report_json(const ExperimentReport& report);

/// Writes the chosen rendering into out_dir (records.csv / report.json /
/// aggregates.csv); returns the written paths. Throws IoFailure.
std::vector<std::string> emit_report(const ExperimentReport& report, ReportFormat format,
                                     const std::string& out_dir);

}  // namespace lassocv
