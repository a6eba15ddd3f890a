// lasso-cv-lab: command-line surface for the lasso path / exact LOO-CV /
// predictive-risk experiment library.
//
// Subcommands: path, cv, risk, diagnose, sweep. Exit codes: 0 success,
// 1 hard error, 2 a diagnose check failed its threshold.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lassocv/cv.hpp"
#include "lassocv/diagnostics.hpp"
#include "lassocv/errors.hpp"
#include "lassocv/experiment.hpp"
#include "lassocv/lasso_path.hpp"
#include "lassocv/risk.hpp"
#include "lassocv/rng.hpp"
#include "lassocv/serialize.hpp"
#include "lassocv/stats.hpp"

namespace {

using lassocv::format_double;
namespace fs = std::filesystem;

struct GlobalOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  std::string format;
};

lassocv::ExperimentConfig resolve_config(const GlobalOptions& opts) {
  lassocv::ExperimentConfig config = opts.config_path.empty()
                                         ? lassocv::default_config()
                                         : lassocv::load_config_file(opts.config_path);
  if (opts.seed_set) {
    config.master_seed = opts.seed;
  }
  if (!opts.out_dir.empty()) {
    config.output_dir = opts.out_dir;
  }
  config.validate();
  return config;
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw lassocv::IoFailure("cannot create output directory " + dir);
  }
  const std::string path = (fs::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) {
    throw lassocv::IoFailure("failed to write " + path);
  }
}

lassocv::Dataset dataset_for(const lassocv::ExperimentConfig& config, int n) {
  const auto design = lassocv::generate_design(config.design.with_n(n));
  const std::uint64_t seed =
      lassocv::derive_seed(config.master_seed, "sweep-data", static_cast<std::uint64_t>(n),
                           std::uint64_t{0});
  return lassocv::realize(design, config.truth(), seed);
}

int run_path(const GlobalOptions& opts, int n_override) {
  const auto config = resolve_config(opts);
  const int n = n_override > 0 ? n_override : config.n_schedule.front();
  const auto data = dataset_for(config, n);
  const auto path = lassocv::compute_path(data.design, data.response);

  std::string csv = "lambda";
  for (int j = 1; j <= config.p; ++j) {
    csv += ",theta_" + std::to_string(j);
  }
  csv += '\n';
  for (double knot : path.knots()) {
    csv += format_double(knot);
    const Eigen::VectorXd theta = path.eval(knot);
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
      csv += ',' + format_double(theta[j]);
    }
    csv += '\n';
  }
  std::cout << csv;
  if (!opts.out_dir.empty()) {
    write_file(config.output_dir, "path.csv", csv);
  }
  return 0;
}

int run_cv(const GlobalOptions& opts, int n_override) {
  const auto config = resolve_config(opts);
  const int n = n_override > 0 ? n_override : config.n_schedule.front();
  const auto data = dataset_for(config, n);
  const auto curve = lassocv::cv_curve(data);

  std::vector<double> points = curve.breakpoints();
  const auto vertices = curve.interval_vertices();
  points.insert(points.end(), vertices.begin(), vertices.end());
  std::sort(points.begin(), points.end());
  std::string csv = "lambda,cv_risk\n";
  for (double lambda : points) {
    csv += format_double(lambda) + ',' + format_double(curve.eval(lambda)) + '\n';
  }
  write_file(config.output_dir, "cv.csv", csv);
  const std::string summary = lassocv::cv_summary_json(curve);
  write_file(config.output_dir, "cv_summary.json", summary + "\n");
  std::cout << summary << '\n';
  return 0;
}

int run_risk(const GlobalOptions& opts, int n_override, int m_draws_override) {
  const auto config = resolve_config(opts);
  const int n = n_override > 0 ? n_override : config.n_schedule.front();
  const int m = m_draws_override > 0 ? m_draws_override : config.m_draws;
  const auto design = lassocv::generate_design(config.design.with_n(n));
  const auto truth = config.truth();

  const lassocv::RiskContext context(
      design, truth, m,
      lassocv::derive_seed(config.master_seed, "sweep-risk", static_cast<std::uint64_t>(n),
                           std::uint64_t{0}));
  const double lambda_top = context.max_lambda_max() * 1.01;
  const auto grid = lassocv::default_lambda_grid(lambda_top, config.grid_resolution);
  const auto curve = lassocv::risk_curve(context, grid);

  std::string csv = "lambda,risk,std_error\n";
  for (std::size_t g = 0; g < curve.lambdas.size(); ++g) {
    csv += format_double(curve.lambdas[g]) + ',' + format_double(curve.estimates[g]) + ',' +
           format_double(curve.std_errors[g]) + '\n';
  }
  write_file(config.output_dir, "risk.csv", csv);

  nlohmann::json j;
  j["lambda_star"] = curve.lambda_star;
  j["risk_at_star"] = context.estimate_at(curve.lambda_star).estimate;
  const std::string summary = j.dump();
  write_file(config.output_dir, "risk_summary.json", summary + "\n");
  std::cout << summary << '\n';
  return 0;
}

struct Verdict {
  std::string check;
  bool pass = false;
  double statistic = 0.0;
  double threshold = 0.0;
};

int finish_diagnose(const lassocv::ExperimentConfig& config, const Verdict& verdict,
                    const std::string& csv) {
  write_file(config.output_dir, "diagnose_" + verdict.check + ".csv", csv);
  nlohmann::json j;
  j["check"] = verdict.check;
  j["pass"] = verdict.pass;
  j["statistic"] = verdict.statistic;
  j["threshold"] = verdict.threshold;
  const std::string summary = j.dump();
  write_file(config.output_dir, "diagnose_" + verdict.check + ".json", summary + "\n");
  std::cout << summary << '\n';
  return verdict.pass ? 0 : 2;
}

// Ratio-of-medians trend between the ends of the schedule; passes when the
// value at the large n is at most `factor` times the value at the small n.
template <typename PerRep>
int trend_check(const lassocv::ExperimentConfig& config, const std::string& name, double factor,
                PerRep&& per_rep) {
  const int n_lo = config.n_schedule.front();
  const int n_hi = config.n_schedule.back();
  std::string csv = "n,rep,value\n";
  std::vector<double> lo_values;
  std::vector<double> hi_values;
  for (int n : {n_lo, n_hi}) {
    const auto design = lassocv::generate_design(config.design.with_n(n));
    for (int rep = 0; rep < config.reps; ++rep) {
      const double value = per_rep(design, n, rep);
      csv += std::to_string(n) + ',' + std::to_string(rep) + ',' + format_double(value) + '\n';
      (n == n_lo ? lo_values : hi_values).push_back(value);
    }
  }
  const double lo = lassocv::median(lo_values);
  const double hi = lassocv::median(hi_values);
  Verdict verdict;
  verdict.check = name;
  verdict.statistic = lo > 0.0 ? hi / lo : 0.0;
  verdict.threshold = factor;
  verdict.pass = verdict.statistic <= factor;
  return finish_diagnose(config, verdict, csv);
}

int run_diagnose(const GlobalOptions& opts, const std::string& check, long trials) {
  const auto config = resolve_config(opts);
  const auto truth = config.truth();

  if (check == "stability") {
    return trend_check(config, check, 0.5,
                       [&](const lassocv::DesignMatrix& design, int n, int rep) {
                         const auto data = lassocv::realize(
                             design, truth,
                             lassocv::derive_seed(config.master_seed, "sweep-data",
                                                  static_cast<std::uint64_t>(n),
                                                  static_cast<std::uint64_t>(rep)));
                         return lassocv::loo_stability(data);
                       });
  }
  if (check == "supgap") {
    return trend_check(config, check, 0.5,
                       [&](const lassocv::DesignMatrix& design, int n, int rep) {
                         return lassocv::sup_cv_risk_gap(
                                    design, truth, config.m_draws,
                                    lassocv::derive_seed(config.master_seed, "diag-supgap",
                                                         static_cast<std::uint64_t>(n),
                                                         static_cast<std::uint64_t>(rep)))
                             .value;
                       });
  }
  if (check == "mean") {
    return trend_check(
        config, check, 0.5, [&](const lassocv::DesignMatrix& design, int n, int rep) {
          const auto data = lassocv::realize(
              design, truth,
              lassocv::derive_seed(config.master_seed, "diag-mean-ref",
                                   static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(rep)));
          const auto full = lassocv::compute_path(data.design, data.response);
          const auto grid = lassocv::default_lambda_grid(full.lambda_max() * 1.01, 25);
          return lassocv::mean_convergence_probe(
                     design, truth, grid, config.m_draws,
                     lassocv::derive_seed(config.master_seed, "diag-mean",
                                          static_cast<std::uint64_t>(n),
                                          static_cast<std::uint64_t>(rep)))
              .sup_deviation;
        });
  }
  if (check == "decomp") {
    const int n = config.n_schedule.front();
    const auto design = lassocv::generate_design(config.design.with_n(n));
    std::string csv = "instance,lambda,lhs,term_a,term_b,term_c,combined_std_error\n";
    double worst = -std::numeric_limits<double>::infinity();
    for (int instance = 0; instance < 10; ++instance) {
      const std::uint64_t seed = lassocv::derive_seed(config.master_seed, "diag-decomp",
                                                      static_cast<std::uint64_t>(instance));
      const auto probe = lassocv::realize(design, truth, lassocv::derive_seed(seed, "top"));
      const double top = lassocv::compute_path(probe.design, probe.response).lambda_max() * 1.2;
      for (int k = 0; k < 20; ++k) {
        const double lambda = top * static_cast<double>(k) / 19.0;
        const auto record =
            lassocv::decomposition_terms(design, truth, lambda, config.m_draws, seed);
        const double excess = record.lhs - (record.term_a + record.term_b + record.term_c) -
                              3.0 * record.combined_std_error;
        worst = std::max(worst, excess);
        csv += std::to_string(instance) + ',' + format_double(lambda) + ',' +
               format_double(record.lhs) + ',' + format_double(record.term_a) + ',' +
               format_double(record.term_b) + ',' + format_double(record.term_c) + ',' +
               format_double(record.combined_std_error) + '\n';
      }
    }
    Verdict verdict{check, worst <= 0.0, worst, 0.0};
    return finish_diagnose(config, verdict, csv);
  }
  if (check == "tail") {
    const int n = 100;
    const std::vector<double> t_values = {1.0, 2.0, 4.0};
    const Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
    std::string csv = "family,t,analytic_bound,empirical_exceedance,allowance\n";
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& [name, family] :
         {std::pair{std::string("gaussian"), lassocv::NoiseFamily::gaussian()},
          std::pair{std::string("rademacher"), lassocv::NoiseFamily::rademacher()}}) {
      const auto report = lassocv::quadratic_form_tail(
          family, n, mu, t_values, trials,
          lassocv::derive_seed(config.master_seed, "diag-tail", lassocv::tag64(name)));
      for (std::size_t k = 0; k < t_values.size(); ++k) {
        const double bound = report.analytic_bound[k];
        const double allowance =
            bound + 3.0 * std::sqrt(bound * (1.0 - bound) / static_cast<double>(trials));
        worst = std::max(worst, report.empirical_exceedance[k] - allowance);
        csv += name + ',' + format_double(t_values[k]) + ',' + format_double(bound) + ',' +
               format_double(report.empirical_exceedance[k]) + ',' + format_double(allowance) +
               '\n';
      }
    }
    Verdict verdict{check, worst <= 0.0, worst, 0.0};
    return finish_diagnose(config, verdict, csv);
  }
  if (check == "biii") {
    const std::vector<int> n_values = {config.n_schedule.front(), config.n_schedule.back()};
    const auto decay =
        lassocv::biii_decay(config.design, truth, n_values, config.reps,
                            lassocv::derive_seed(config.master_seed, "diag-biii"));
    std::string csv = "n,rep,value\n";
    for (std::size_t k = 0; k < decay.n_values.size(); ++k) {
      for (std::size_t rep = 0; rep < decay.raw[k].size(); ++rep) {
        csv += std::to_string(decay.n_values[k]) + ',' + std::to_string(rep) + ',' +
               format_double(decay.raw[k][rep]) + '\n';
      }
    }
    Verdict verdict;
    verdict.check = check;
    verdict.statistic = decay.medians.back() > 0.0 ? decay.medians.front() / decay.medians.back()
                                                   : std::numeric_limits<double>::infinity();
    verdict.threshold = 2.0;
    verdict.pass = verdict.statistic > 2.0;
    return finish_diagnose(config, verdict, csv);
  }
  throw lassocv::IoFailure("unknown diagnose check: " + check);
}

int run_sweep(const GlobalOptions& opts) {
  const auto config = resolve_config(opts);
  const auto report = lassocv::run_consistency_sweep(config);

  std::vector<lassocv::ReportFormat> formats;
  if (opts.format.empty()) {
    formats = {lassocv::ReportFormat::Csv, lassocv::ReportFormat::Json,
               lassocv::ReportFormat::PlotData};
  } else if (opts.format == "csv") {
    formats = {lassocv::ReportFormat::Csv};
  } else if (opts.format == "json") {
    formats = {lassocv::ReportFormat::Json};
  } else if (opts.format == "plotdata") {
    formats = {lassocv::ReportFormat::PlotData};
  } else {
    throw lassocv::IoFailure("unknown format: " + opts.format);
  }
  for (const auto format : formats) {
    for (const auto& path : lassocv::emit_report(report, format, config.output_dir)) {
      std::cout << "wrote " << path << '\n';
    }
  }
  for (const auto& agg : report.aggregates) {
    std::cout << "n=" << agg.n << " median_risk_gap=" << format_double(agg.median_gap)
              << " median_sup_gap=" << format_double(agg.median_supgap) << '\n';
  }
  if (!report.failures.empty()) {
    std::cout << report.failures.size() << " record(s) skipped; see report.json\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lasso solution paths, exact leave-one-out CV, and risk-consistency experiments"};
  app.require_subcommand(1);

  GlobalOptions opts;
  int n_override = 0;
  int m_draws_override = 0;
  std::string check;
  long trials = 100000;

  auto add_global = [&](CLI::App* cmd) {
    cmd->add_option("--config", opts.config_path, "JSON experiment config (default: built-in)");
    cmd->add_option("--seed", opts.seed, "master seed override")
        ->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--format", opts.format, "sweep output: csv, json or plotdata");
  };

  CLI::App* path_cmd = app.add_subcommand("path", "print the full-sample solution path as CSV");
  add_global(path_cmd);
  path_cmd->add_option("--n", n_override, "sample size (default: first schedule entry)");

  CLI::App* cv_cmd = app.add_subcommand("cv", "exact leave-one-out CV curve and minimizer");
  add_global(cv_cmd);
  cv_cmd->add_option("--n", n_override, "sample size (default: first schedule entry)");

  CLI::App* risk_cmd = app.add_subcommand("risk", "Monte-Carlo predictive risk curve");
  add_global(risk_cmd);
  risk_cmd->add_option("--n", n_override, "sample size (default: first schedule entry)");
  risk_cmd->add_option("--m-draws", m_draws_override, "Monte-Carlo replicates");

  CLI::App* diag_cmd = app.add_subcommand("diagnose", "run one verification check");
  add_global(diag_cmd);
  diag_cmd
      ->add_option("--check", check, "stability | mean | decomp | tail | biii | supgap")
      ->required();
  diag_cmd->add_option("--trials", trials, "trials for the tail check (default 1e5)");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run the consistency sweep and emit reports");
  add_global(sweep_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (path_cmd->parsed()) return run_path(opts, n_override);
    if (cv_cmd->parsed()) return run_cv(opts, n_override);
    if (risk_cmd->parsed()) return run_risk(opts, n_override, m_draws_override);
    if (diag_cmd->parsed()) return run_diagnose(opts, check, trials);
    if (sweep_cmd->parsed()) return run_sweep(opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
