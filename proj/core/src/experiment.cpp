#include "lassocv/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lassocv/cv.hpp"
#include "lassocv/diagnostics.hpp"
#include "lassocv/errors.hpp"
#include "lassocv/risk.hpp"
#include "lassocv/rng.hpp"
#include "lassocv/serialize.hpp"
#include "lassocv/stats.hpp"

namespace lassocv {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

}  // namespace

void ExperimentConfig::validate() const {
  if (p <= 0 || static_cast<int>(theta.size()) != p) {
    throw DimensionMismatch("theta length must equal p");
  }
  if (n_schedule.empty()) {
    throw DimensionMismatch("n_schedule must be non-empty");
  }
  for (std::size_t k = 0; k + 1 < n_schedule.size(); ++k) {
    if (n_schedule[k] >= n_schedule[k + 1]) {
      throw DimensionMismatch("n_schedule must be strictly increasing");
    }
  }
  if (reps < 1) {
    throw DimensionMismatch("reps must be at least 1");
  }
  if (m_draws < 2) {
    throw DimensionMismatch("m_draws must be at least 2");
  }
  if (sigma < 0.0) {
    throw DimensionMismatch("sigma must be nonnegative");
  }
  // Every schedule entry must instantiate cleanly (block multiples, rank).
  for (int n : n_schedule) {
    const DesignMatrix d = generate_design(design.with_n(n));
    if (d.p() != p) {
      throw DimensionMismatch("design p disagrees with config p");
    }
    if (n < p + 2) {
      throw DimensionMismatch("n must be at least p + 2 for leave-one-out fits");
    }
  }
}

ExperimentConfig default_config() {
  // Ten fixed base rows in R^5, all with norm below 2, in general position.
  const std::vector<std::vector<double>> rows = {
      {0.9, -0.4, 0.7, 0.1, -0.3},  {-0.5, 1.1, 0.2, -0.6, 0.4},
      {0.3, 0.8, -1.0, 0.5, 0.2},   {1.0, 0.3, 0.4, -0.8, -0.6},
      {-0.7, -0.2, 0.9, 0.9, 0.1},  {0.2, -0.9, -0.3, -0.4, 1.0},
      {0.6, 0.5, 0.5, 1.0, -0.2},   {-1.1, 0.6, -0.4, 0.3, 0.7},
      {0.4, -0.7, 1.1, -0.2, 0.5},  {-0.3, 0.2, 0.1, 0.7, -1.2}};
  std::vector<Eigen::VectorXd> base;
  base.reserve(rows.size());
  for (const auto& r : rows) {
    base.push_back(Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size())));
  }

  ExperimentConfig config;
  config.design = DesignSpec::replicated_block(std::move(base), 50);
  config.n_schedule = {50, 100, 200, 400, 800};
  config.p = 5;
  config.theta = Eigen::VectorXd(5);
  config.theta << 1.0, -1.0, 0.5, 0.0, 0.0;
  config.sigma = 1.0;
  config.noise = NoiseFamily::gaussian();
  config.reps = 20;
  config.m_draws = 200;
  config.master_seed = 1729;
  config.output_dir = "out";
  return config;
}

namespace {

json design_to_json(const DesignSpec& spec) {
  json j;
  switch (spec.family) {
    case DesignFamily::ReplicatedBlock: {
      j["family"] = "replicated_block";
      json rows = json::array();
      for (const auto& row : spec.base_rows) {
        json r = json::array();
        for (Eigen::Index i = 0; i < row.size(); ++i) r.push_back(row[i]);
        rows.push_back(std::move(r));
      }
      j["base_rows"] = std::move(rows);
      break;
    }
    case DesignFamily::BoundedBall:
      j["family"] = "bounded_ball";
      j["radius"] = spec.radius;
      j["seed"] = spec.seed;
      break;
    case DesignFamily::ScaledOrthogonal:
      j["family"] = "scaled_orthogonal";
      break;
  }
  return j;
}

DesignSpec design_from_json(const json& j, int p) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "replicated_block") {
    std::vector<Eigen::VectorXd> base;
    for (const auto& row : j.at("base_rows")) {
      Eigen::VectorXd r(static_cast<Eigen::Index>(row.size()));
      Eigen::Index i = 0;
      for (const auto& v : row) r[i++] = v.get<double>();
      base.push_back(std::move(r));
    }
    return DesignSpec::replicated_block(std::move(base), 0);
  }
  if (family == "bounded_ball") {
    return DesignSpec::bounded_ball(j.at("radius").get<double>(), 0, p,
                                    j.value("seed", std::uint64_t{0}));
  }
  if (family == "scaled_orthogonal") {
    return DesignSpec::scaled_orthogonal(0, p);
  }
  throw IoFailure("unknown design family: " + family);
}

std::string noise_name(const NoiseFamily& noise) {
  switch (noise.kind) {
    case NoiseFamily::Kind::StandardGaussian:
      return "gaussian";
    case NoiseFamily::Kind::Rademacher:
      return "rademacher";
    case NoiseFamily::Kind::UniformUnitVariance:
      return "uniform";
  }
  return "gaussian";
}

NoiseFamily noise_from_name(const std::string& name) {
  if (name == "gaussian") return NoiseFamily::gaussian();
  if (name == "rademacher") return NoiseFamily::rademacher();
  if (name == "uniform") return NoiseFamily::uniform();
  throw IoFailure("unknown noise family: " + name);
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["design"] = design_to_json(config.design);
  j["n_schedule"] = config.n_schedule;
  j["p"] = config.p;
  json theta = json::array();
  for (Eigen::Index i = 0; i < config.theta.size(); ++i) theta.push_back(config.theta[i]);
  j["theta"] = std::move(theta);
  j["sigma"] = config.sigma;
  j["noise"] = noise_name(config.noise);
  j["reps"] = config.reps;
  j["m_draws"] = config.m_draws;
  j["master_seed"] = config.master_seed;
  j["output_dir"] = config.output_dir;
  j["grid_resolution"] = config.grid_resolution;
  return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoFailure(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig config;
  config.p = j.at("p").get<int>();
  config.design = design_from_json(j.at("design"), config.p);
  config.n_schedule = j.at("n_schedule").get<std::vector<int>>();
  {
    const auto& theta = j.at("theta");
    config.theta = Eigen::VectorXd(static_cast<Eigen::Index>(theta.size()));
    Eigen::Index i = 0;
    for (const auto& v : theta) config.theta[i++] = v.get<double>();
  }
  config.sigma = j.at("sigma").get<double>();
  config.noise = noise_from_name(j.at("noise").get<std::string>());
  config.reps = j.at("reps").get<int>();
  config.m_draws = j.at("m_draws").get<int>();
  config.master_seed = j.at("master_seed").get<std::uint64_t>();
  config.output_dir = j.value("output_dir", std::string("out"));
  config.grid_resolution = j.value("grid_resolution", 100);
  config.validate();
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoFailure("cannot open config file: " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json(buffer.str());
}

ExperimentReport run_consistency_sweep(const ExperimentConfig& config) {
  config.validate();
  const GroundTruth truth = config.truth();

  ExperimentReport report;
  report.config = config;

  for (int n : config.n_schedule) {
    const DesignMatrix design = generate_design(config.design.with_n(n));
    for (int rep = 0; rep < config.reps; ++rep) {
      const std::uint64_t data_seed =
          derive_seed(config.master_seed, "sweep-data", static_cast<std::uint64_t>(n),
                      static_cast<std::uint64_t>(rep));
      const std::uint64_t risk_seed =
          derive_seed(config.master_seed, "sweep-risk", static_cast<std::uint64_t>(n),
                      static_cast<std::uint64_t>(rep));
      try {
        const Dataset data = realize(design, truth, data_seed);
        const LassoPath full = compute_path(data.design, data.response);
        const LooPathSet loo = loo_paths(data);
        const CvCurve curve = cv_curve(data, loo);
        const double lambda_hat = curve.lambda_hat();

        const RiskContext context(design, truth, config.m_draws, risk_seed);
        std::vector<double> extras = full.knots();
        extras.push_back(lambda_hat);
        const std::vector<double> grid =
            default_lambda_grid(curve.lambda_top(), config.grid_resolution, extras);
        const RiskCurve rcurve = risk_curve(context, grid);
        const RiskEstimate gap = risk_gap(context, lambda_hat, rcurve.lambda_star);
        const SupGapResult sup = sup_cv_risk_gap(data, curve, context, grid);
        const LipschitzDiagnostic lip = lipschitz_diagnostic(full, design);

        SweepRecord record;
        record.n = n;
        record.rep = rep;
        record.seed = data_seed;
        record.lambda_hat = lambda_hat;
        record.lambda_star = rcurve.lambda_star;
        record.risk_at_hat = context.estimate_at(lambda_hat).estimate;
        record.risk_at_star = context.estimate_at(rcurve.lambda_star).estimate;
        record.risk_gap = gap.estimate;
        record.risk_gap_se = gap.std_error;
        record.sup_gap = sup.value;
        record.sup_gap_se = sup.mc_std_error;
        record.loo_stability = loo_stability(full, loo);
        record.realized_max_slope = lip.realized_max_slope;
        record.lipschitz_bound = lip.lipschitz_bound;
        for (std::size_t s = 0; s < lip.segment_slope_norms.size(); ++s) {
          if (lip.segment_bounds[s] > 0.0) {
            record.slope_ratio_max = std::max(
                record.slope_ratio_max, lip.segment_slope_norms[s] / lip.segment_bounds[s]);
          }
        }
        report.records.push_back(record);
      } catch (const RankDeficientFold& e) {
        report.failures.push_back({n, rep, data_seed, e.what()});
      } catch (const NoConvergence& e) {
        report.failures.push_back({n, rep, data_seed, e.what()});
      } catch (const DegenerateTie& e) {
        report.failures.push_back({n, rep, data_seed, e.what()});
      }
    }
  }
  report.aggregates = aggregates_from_records(report.records);
  return report;
}

std::vector<NAggregate> aggregates_from_records(const std::vector<SweepRecord>& records) {
  std::vector<int> sizes;
  for (const auto& r : records) {
    if (std::find(sizes.begin(), sizes.end(), r.n) == sizes.end()) {
      sizes.push_back(r.n);
    }
  }
  std::sort(sizes.begin(), sizes.end());

  std::vector<NAggregate> out;
  for (int n : sizes) {
    std::vector<double> gaps;
    std::vector<double> supgaps;
    std::vector<double> stabilities;
    for (const auto& r : records) {
      if (r.n == n) {
        gaps.push_back(r.risk_gap);
        supgaps.push_back(r.sup_gap);
        stabilities.push_back(r.loo_stability);
      }
    }
    NAggregate agg;
    agg.n = n;
    agg.records = static_cast<int>(gaps.size());
    agg.median_gap = median(gaps);
    agg.q25_gap = quantile(gaps, 0.25);
    agg.q75_gap = quantile(gaps, 0.75);
    agg.median_supgap = median(supgaps);
    agg.q25_supgap = quantile(supgaps, 0.25);
    agg.q75_supgap = quantile(supgaps, 0.75);
    agg.median_stability = median(stabilities);
    out.push_back(agg);
  }
  return out;
}

std::string records_csv(const ExperimentReport& report) {
  std::string out =
      "schema_version,n,rep,seed,lambda_hat,lambda_star,risk_at_hat,risk_at_star,"
      "risk_gap,risk_gap_se,sup_gap,sup_gap_se,loo_stability,realized_max_slope,"
      "lipschitz_bound,slope_ratio_max\n";
  for (const auto& r : report.records) {
    out += std::to_string(kSchemaVersion) + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.rep) + ',' + std::to_string(r.seed) + ',' +
           format_double(r.lambda_hat) + ',' + format_double(r.lambda_star) + ',' +
           format_double(r.risk_at_hat) + ',' + format_double(r.risk_at_star) + ',' +
           format_double(r.risk_gap) + ',' + format_double(r.risk_gap_se) + ',' +
           format_double(r.sup_gap) + ',' + format_double(r.sup_gap_se) + ',' +
           format_double(r.loo_stability) + ',' + format_double(r.realized_max_slope) + ',' +
           format_double(r.lipschitz_bound) + ',' + format_double(r.slope_ratio_max) + '\n';
  }
  return out;
}

std::string aggregates_csv(const ExperimentReport& report) {
  std::string out =
      "schema_version,n,records,median_gap,q25_gap,q75_gap,median_supgap,q25_supgap,"
      "q75_supgap,median_stability\n";
  for (const auto& a : report.aggregates) {
    out += std::to_string(kSchemaVersion) + ',' + std::to_string(a.n) + ',' +
           std::to_string(a.records) + ',' + format_double(a.median_gap) + ',' +
           format_double(a.q25_gap) + ',' + format_double(a.q75_gap) + ',' +
           format_double(a.median_supgap) + ',' + format_double(a.q25_supgap) + ',' +
           format_double(a.q75_supgap) + ',' + format_double(a.median_stability) + '\n';
  }
  return out;
}

std::string report_json(const ExperimentReport& report) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = json::parse(config_to_json(report.config));
  json records = json::array();
  for (const auto& r : report.records) {
    json rec;
    rec["n"] = r.n;
    rec["rep"] = r.rep;
    rec["seed"] = r.seed;
    rec["lambda_hat"] = r.lambda_hat;
    rec["lambda_star"] = r.lambda_star;
    rec["risk_at_hat"] = r.risk_at_hat;
    rec["risk_at_star"] = r.risk_at_star;
    rec["risk_gap"] = r.risk_gap;
    rec["risk_gap_se"] = r.risk_gap_se;
    rec["sup_gap"] = r.sup_gap;
    rec["sup_gap_se"] = r.sup_gap_se;
    rec["loo_stability"] = r.loo_stability;
    rec["realized_max_slope"] = r.realized_max_slope;
    rec["lipschitz_bound"] = r.lipschitz_bound;
    rec["slope_ratio_max"] = r.slope_ratio_max;
    records.push_back(std::move(rec));
  }
  j["records"] = std::move(records);
  json failures = json::array();
  for (const auto& f : report.failures) {
    json fail;
    fail["n"] = f.n;
    fail["rep"] = f.rep;
    fail["seed"] = f.seed;
    fail["reason"] = f.reason;
    failures.push_back(std::move(fail));
  }
  j["failures"] = std::move(failures);
  json aggregates = json::array();
  for (const auto& a : report.aggregates) {
    json agg;
    agg["n"] = a.n;
    agg["records"] = a.records;
    agg["median_gap"] = a.median_gap;
    agg["q25_gap"] = a.q25_gap;
    agg["q75_gap"] = a.q75_gap;
    agg["median_supgap"] = a.median_supgap;
    agg["q25_supgap"] = a.q25_supgap;
    agg["q75_supgap"] = a.q75_supgap;
    agg["median_stability"] = a.median_stability;
    aggregates.push_back(std::move(agg));
  }
  j["aggregates"] = std::move(aggregates);
  return j.dump(2);
}

std::vector<std::string> emit_report(const ExperimentReport& report, ReportFormat format,
                                     const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw IoFailure("cannot create output directory " + out_dir + ": " + ec.message());
  }
  auto write = [&](const std::string& name, const std::string& content) {
    const std::string path = (fs::path(out_dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) {
      throw IoFailure("failed to write " + path);
    }
    return path;
  };
  switch (format) {
    case ReportFormat::Csv:
      return {write("records.csv", records_csv(report))};
    case ReportFormat::Json:
      return {write("report.json", report_json(report))};
    case ReportFormat::PlotData:
      return {write("aggregates.csv", aggregates_csv(report))};
  }
  throw IoFailure("unknown report format");
}

}  // namespace lassocv
