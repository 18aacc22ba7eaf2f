#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "hotv/csv.hpp"
#include "hotv/errors.hpp"
#include "hotv/harness.hpp"
#include "hotv/parallel.hpp"
#include "hotv/verify.hpp"

namespace hotv::cli {

namespace {

namespace fs = std::filesystem;

struct SolverFlags {
  double beta = SolverConfig{}.beta;
  int outer_max = SolverConfig{}.outer_max;
  double outer_tol = SolverConfig{}.outer_tol;
  int inner_max = SolverConfig{}.inner_max;
  double inner_tol = SolverConfig{}.inner_tol;

  void attach(CLI::App* app) {
    app->add_option("--beta", beta, "ADMM penalty parameter")->capture_default_str();
    app->add_option("--outer-max", outer_max, "ADMM iteration limit")->capture_default_str();
    app->add_option("--outer-tol", outer_tol, "ADMM relative-change tolerance")->capture_default_str();
    app->add_option("--inner-max", inner_max, "CG iteration limit per ADMM step")->capture_default_str();
    app->add_option("--inner-tol", inner_tol, "CG relative residual tolerance")->capture_default_str();
  }

  SolverConfig config() const {
    SolverConfig cfg;
    cfg.beta = beta;
    cfg.outer_max = outer_max;
    cfg.outer_tol = outer_tol;
    cfg.inner_max = inner_max;
    cfg.inner_tol = inner_tol;
    return cfg;
  }
};

struct CommonFlags {
  std::uint64_t seed = 1;
  int jobs = default_jobs();
  std::string out = "hotv_out";

  void attach(CLI::App* app) {
    app->add_option("--seed", seed, "Master seed")->capture_default_str();
    app->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--out", out, "Output directory")->envname("HOTV_OUT")->capture_default_str();
  }
};

struct SimulateFlags {
  CommonFlags common;
  SolverFlags solver;
  long long trials = 100;
  std::size_t n = 256;
  std::vector<int> orders{1, 2, 3, 4};
  std::optional<double> sigma;
  std::optional<double> rate;
  double density = 0.1;
  double lambda_lo = LambdaSearchSpec{}.grid_lo;
  double lambda_hi = LambdaSearchSpec{}.grid_hi;
  int coarse_points = LambdaSearchSpec{}.coarse_points;
  double refine_tol = LambdaSearchSpec{}.refine_tol;
};

struct ReconstructFlags {
  CommonFlags common;
  SolverFlags solver;
  std::string phantom = "shepp-logan";
  std::size_t n = 64;
  double lambda1 = 0.0;
  std::vector<int> orders{1, 2, 3, 4};
  bool scaled_only = false;
  bool unscaled_only = false;
  double snr = 23.75;
  bool snr_db = false;
  double rate = 0.5;
  double density = 0.1;
};

struct VerifyFlags {
  CommonFlags common;
  int kmax = 4;
  std::size_t n = 64;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Only the active subcommand is written, under its own section, and unset
// optional values are dropped so the file loads back through --config.
void write_effective_config(const CLI::App& sub, const fs::path& dir) {
  std::istringstream in(sub.config_to_str(true, false));
  std::string text = "[" + sub.get_name() + "]\n";
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line.ends_with("=\"\"")) continue;
    text += line + '\n';
  }
  csv::write_file(dir / "run_config.txt", text);
}

int cmd_simulate(const CLI::App& app, const SimulateFlags& f) {
  if (f.trials < 1) throw UsageError("--trials must be >= 1");
  CampaignOptions opt;
  opt.n = f.n;
  opt.orders = f.orders;
  opt.sigma = f.sigma;
  opt.sampling_rate = f.rate;
  opt.density = f.density;
  opt.jobs = f.common.jobs;
  opt.search.grid_lo = f.lambda_lo;
  opt.search.grid_hi = f.lambda_hi;
  opt.search.coarse_points = f.coarse_points;
  opt.search.refine_tol = f.refine_tol;
  opt.search.solver = f.solver.config();
  try {
    opt.validate();
    opt.search.solver.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }

  const fs::path out = f.common.out;
  fs::create_directories(out);
  write_effective_config(app, out);

  const auto table = run_1d_campaign(static_cast<std::size_t>(f.trials), f.common.seed, opt);
  CampaignSummary summary;
  if (table.failures < table.trials.size()) summary = summarize_campaign(table.trials);
  write_campaign_directory(out, table, summary);

  std::printf("%-3s %7s %20s %20s %16s\n", "k", "trials", "mean 2^(1-k)lam", "median 2^(1-k)lam",
              "median rel.err");
  for (const auto& s : summary.orders) {
    std::printf("%-3d %7zu %20.6g %20.6g %16.4f\n", s.order, s.trials, s.mean_scaled_lambda,
                s.median_scaled_lambda, s.median_rel_error);
  }
  std::printf("failed trials: %zu / %zu -> %s\n", table.failures, table.trials.size(),
              table.valid ? "valid" : "INVALID");
  return table.valid ? kSuccess : kCampaignInvalid;
}

int cmd_reconstruct(const CLI::App& app, const ReconstructFlags& f) {
  const auto phantom = parse_phantom(f.phantom);
  if (!phantom) throw UsageError("unknown phantom '" + f.phantom + "' (shepp-logan | smooth)");
  if (!(f.lambda1 > 0.0)) throw UsageError("--lambda1 must be > 0");
  if (f.scaled_only && f.unscaled_only) throw UsageError("--scaled and --unscaled are exclusive");
  if (f.n < 32) throw UsageError("--n must be >= 32");
  for (int k : f.orders) {
    if (k < 1 || k > PATransform::kMaxOrder) throw UsageError("--orders out of range");
  }

  Experiment2DOptions opt;
  opt.orders = f.orders;
  opt.snr = f.snr;
  opt.snr_db = f.snr_db;
  opt.sampling_rate = f.rate;
  opt.density = f.density;
  opt.solver = f.solver.config();
  opt.jobs = f.common.jobs;

  const fs::path out = f.common.out;
  fs::create_directories(out);
  write_effective_config(app, out);

  const auto problem = make_2d_problem(*phantom, f.n, f.common.seed, opt);
  Experiment2DResult result;
  result.truth_seminorms = seminorm_profile(problem.truth);

  // With order 1 alone both modes coincide, so only one set of rows is kept.
  const bool only_tv = f.orders.size() == 1 && f.orders.front() == 1;
  const bool want_scaled = !f.unscaled_only;
  const bool want_unscaled = !f.scaled_only && !only_tv;
  if (want_scaled) {
    auto rows = reconstruct_orders(problem, f.lambda1, true, opt);
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  }
  if (want_unscaled) {
    auto rows = reconstruct_orders(problem, f.lambda1, false, opt);
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  }
  result.rows.push_back(least_squares_baseline(problem, opt.baseline_iterations));

  std::ostringstream metrics;
  write_metrics_csv(metrics, result);
  csv::write_file(out / "metrics.csv", metrics.str());
  std::ostringstream img;
  csv::write_image(img, problem.truth);
  csv::write_file(out / "images" / "phantom.csv", img.str());
  for (const auto& row : result.rows) {
    std::ostringstream os;
    csv::write_image(os, row.image);
    const std::string name =
        row.mode == "baseline" ? "baseline" : row.mode + "_k" + std::to_string(row.order);
    csv::write_file(out / "images" / (name + ".csv"), os.str());
  }

  std::printf("phantom %s, n=%zu, realized SNR %.4g\n", f.phantom.c_str(), f.n, problem.realized_snr);
  std::printf("%-9s %2s %12s %14s %12s %12s %12s %12s\n", "mode", "k", "lambda", "rel.data.err",
              "T1", "T2", "T3", "T4");
  std::printf("%-9s %2s %12s %14s %12.5g %12.5g %12.5g %12.5g\n", "phantom", "-", "-", "-",
              result.truth_seminorms[0], result.truth_seminorms[1], result.truth_seminorms[2],
              result.truth_seminorms[3]);
  for (const auto& r : result.rows) {
    std::printf("%-9s %2d %12.5g %14.6g %12.5g %12.5g %12.5g %12.5g\n", r.mode.c_str(), r.order,
                r.lambda, r.rel_data_error, r.seminorms[0], r.seminorms[1], r.seminorms[2],
                r.seminorms[3]);
  }
  return kSuccess;
}

int cmd_verify(const CLI::App& app, const VerifyFlags& f) {
  if (f.kmax < 1 || f.kmax > PATransform::kMaxOrder) {
    throw UsageError("--kmax must lie in [1, " + std::to_string(PATransform::kMaxOrder) + "]");
  }
  if (f.n < 16) throw UsageError("--n must be >= 16");
  VerifyOptions opt;
  opt.kmax = f.kmax;
  opt.n = f.n;
  opt.seed = f.common.seed;

  const auto checks = run_identity_suites(opt);
  bool all = true;
  std::ostringstream table;
  table << "check,passed,detail\n";
  for (const auto& c : checks) {
    all = all && c.passed;
    std::printf("%-22s %-4s %s\n", c.name.c_str(), c.passed ? "PASS" : "FAIL", c.detail.c_str());
    table << c.name << ',' << (c.passed ? 1 : 0) << ",\"" << c.detail << "\"\n";
  }
  const fs::path out = f.common.out;
  fs::create_directories(out);
  write_effective_config(app, out);
  csv::write_file(out / "verify.csv", table.str());
  std::printf("%s\n", all ? "all identity checks passed" : "IDENTITY CHECK FAILURE");
  return all ? kSuccess : kVerificationFailed;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Higher-order total variation (polynomial annihilation) regularization toolkit",
               "hotv"};
  app.set_config("--config", "", "Read options from a TOML/INI config file");
  app.require_subcommand(1);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Randomized 1D optimal-lambda campaign");
  sim.common.attach(simulate);
  sim.solver.attach(simulate);
  simulate->add_option("--trials", sim.trials, "Number of trials")->capture_default_str();
  simulate->add_option("--n", sim.n, "Signal length")->capture_default_str();
  simulate->add_option("--orders", sim.orders, "PA orders")->delimiter(',')->capture_default_str();
  simulate->add_option("--sigma", sim.sigma, "Fixed noise level (default: uniform on [0, 3])");
  simulate->add_option("--rate", sim.rate, "Fixed sampling rate (default: uniform on [0.25, 1])");
  simulate->add_option("--density", sim.density, "Nonzero fraction of A")->capture_default_str();
  simulate->add_option("--lambda-lo", sim.lambda_lo, "Search range lower end")->capture_default_str();
  simulate->add_option("--lambda-hi", sim.lambda_hi, "Search range upper end")->capture_default_str();
  simulate->add_option("--coarse-points", sim.coarse_points, "Coarse grid size")->capture_default_str();
  simulate->add_option("--refine-tol", sim.refine_tol, "Relative bracket width")->capture_default_str();

  ReconstructFlags rec;
  auto* reconstruct = app.add_subcommand("reconstruct", "2D phantom reconstruction study");
  rec.common.attach(reconstruct);
  rec.solver.attach(reconstruct);
  reconstruct->add_option("--phantom", rec.phantom, "shepp-logan | smooth")->capture_default_str();
  reconstruct->add_option("--n", rec.n, "Image side length")->capture_default_str();
  reconstruct->add_option("--lambda1", rec.lambda1, "TV fidelity weight")->required();
  reconstruct->add_option("--orders", rec.orders, "PA orders")->delimiter(',')->capture_default_str();
  reconstruct->add_flag("--scaled", rec.scaled_only, "Only run with lambda = 2^(k-1) lambda1");
  reconstruct->add_flag("--unscaled", rec.unscaled_only, "Only run with lambda = lambda1");
  reconstruct->add_option("--snr", rec.snr, "Target SNR of the data")->capture_default_str();
  reconstruct->add_flag("--snr-db", rec.snr_db, "Read --snr in decibels instead of a linear ratio");
  reconstruct->add_option("--rate", rec.rate, "Sampling rate")->capture_default_str();
  reconstruct->add_option("--density", rec.density, "Nonzero fraction of A")->capture_default_str();

  VerifyFlags ver;
  auto* verify = app.add_subcommand("verify", "Exact operator identity checks");
  ver.common.attach(verify);
  verify->add_option("--kmax", ver.kmax, "Largest order checked")->capture_default_str();
  verify->add_option("--n", ver.n, "Grid size for the norm checks")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(*simulate, sim);
    if (reconstruct->parsed()) return cmd_reconstruct(*reconstruct, rec);
    if (verify->parsed()) return cmd_verify(*verify, ver);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCampaignInvalid;
  }
  return kUsageError;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("hotv");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace hotv::cli
