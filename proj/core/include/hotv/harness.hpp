#pragma once

// Experiment orchestration: the randomized 1D optimal-lambda campaign and the
// 2D phantom reconstruction study, plus their on-disk formats.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hotv/geometry.hpp"
#include "hotv/lambda.hpp"
#include "hotv/linsys.hpp"
#include "hotv/solver.hpp"

namespace hotv {

// ---------------------------------------------------------------------------
// 1D campaign

struct CampaignOptions {
  std::size_t n = 256;
  double density = 0.1;
  std::vector<int> orders{1, 2, 3, 4};
  double rate_lo = 0.25;
  double rate_hi = 1.0;
  double sigma_lo = 0.0;
  double sigma_hi = 3.0;
  /// Fixed overrides for the randomized fields.
  std::optional<double> sigma;
  std::optional<double> sampling_rate;
  LambdaSearchSpec search;
  int jobs = 1;

  void validate() const;
};

/// Every randomized quantity of one trial, derived from (master_seed, trial_id).
struct TrialSpec {
  std::uint64_t trial_id = 0;
  std::uint64_t master_seed = 0;
  std::size_t n = 256;
  std::size_t rows = 0;
  /// rows / n exactly.
  double sampling_rate = 0.0;
  double density = 0.1;
  double sigma = 0.0;
  std::vector<int> orders;
  std::uint64_t signal_seed = 0;
  std::uint64_t operator_seed = 0;
  std::uint64_t noise_seed = 0;
};

TrialSpec make_trial_spec(std::uint64_t master_seed, std::uint64_t trial_id,
                          const CampaignOptions& options);

struct OrderOutcome {
  int order = 0;
  double lambda_opt = 0.0;
  /// Scaling relative error against the order-1 optimum (0 for k = 1, NaN
  /// when order 1 was not searched).
  double rel_error = 0.0;
  /// ||f_true - f*(lambda_opt)||_2
  double l2_error = 0.0;
  bool range_too_narrow = false;
  std::vector<LambdaSample> curve;
};

struct TrialResult {
  TrialSpec spec;
  std::vector<OrderOutcome> orders;
  bool failed = false;
  std::string failure;

  const OrderOutcome* find(int order) const;
};

struct CampaignTable {
  std::vector<TrialResult> trials;  ///< sorted by trial_id
  std::size_t failures = 0;
  /// False once more than 10% of trials failed.
  bool valid = true;
};

TrialResult run_trial(const TrialSpec& spec, const CampaignOptions& options);

CampaignTable run_1d_campaign(std::size_t trials, std::uint64_t master_seed,
                              const CampaignOptions& options);

/// Histogram of scaling relative errors: fixed-width bins over [lo, hi) plus
/// underflow and overflow counts.
struct Histogram {
  static constexpr double kLo = -1.0;
  static constexpr double kHi = 2.0;
  static constexpr double kWidth = 0.05;
  static constexpr std::size_t kBins = 60;

  std::array<std::size_t, kBins> counts{};
  std::size_t underflow = 0;
  std::size_t overflow = 0;

  void add(double value);
  std::size_t total() const;
  static double bin_lo(std::size_t bin);
};

struct OrderSummary {
  int order = 0;
  std::size_t trials = 0;
  /// Statistics of 2^(1-k) lambda_opt_k over completed trials.
  double mean_scaled_lambda = 0.0;
  double median_scaled_lambda = 0.0;
  /// Statistics of the scaling relative error.
  double mean_rel_error = 0.0;
  double median_rel_error = 0.0;
  Histogram histogram;
};

struct CampaignSummary {
  std::size_t completed_trials = 0;
  std::vector<OrderSummary> orders;

  const OrderSummary* find(int order) const;
};

/// Throws DomainError when no trial completed.
CampaignSummary summarize_campaign(const std::vector<TrialResult>& results);

double median(std::vector<double> values);

/// campaign.csv: trial_id,k,lambda_opt,rel_error,l2_err (completed trials only).
void write_campaign_csv(std::ostream& out, const std::vector<TrialResult>& results);
/// Rebuilds lambda_opt / rel_error / l2_error per trial; other fields stay default.
std::vector<TrialResult> read_campaign_csv(std::istream& in);

/// summary.csv: k,trials,mean_scaled_lambda,median_scaled_lambda,mean_rel_error,median_rel_error
void write_summary_csv(std::ostream& out, const CampaignSummary& summary);
/// histogram.csv: k,bin_lo,bin_hi,count (under/overflow use -inf / inf edges)
void write_histogram_csv(std::ostream& out, const CampaignSummary& summary);
void write_histogram_svg(std::ostream& out, const CampaignSummary& summary);

/// campaign.csv, summary.csv, histogram.csv, histogram.svg, trials.csv and
/// curves/trial<id>_k<k>.csv under `dir`.
void write_campaign_directory(const std::filesystem::path& dir, const CampaignTable& table,
                              const CampaignSummary& summary);

// ---------------------------------------------------------------------------
// 2D experiment

enum class Phantom { SheppLogan, Smooth };

std::optional<Phantom> parse_phantom(const std::string& name);
std::string phantom_name(Phantom p);

struct Experiment2DOptions {
  double sampling_rate = 0.5;
  double density = 0.1;
  double snr = 23.75;
  bool snr_db = false;
  std::vector<int> orders{1, 2, 3, 4};
  SolverConfig solver;
  /// Iterations of CG on the normal equations for the least-squares baseline.
  int baseline_iterations = 200;
  int jobs = 1;
};

struct Problem2D {
  Phantom phantom = Phantom::SheppLogan;
  Image truth;
  NormalizedSystem system;
  double realized_snr = 0.0;
};

Problem2D make_2d_problem(Phantom phantom, std::size_t n, std::uint64_t master_seed,
                          const Experiment2DOptions& options);

inline constexpr int kReportedSeminorms = 4;

struct ReconstructionRow {
  std::string mode;  ///< "scaled", "unscaled" or "baseline"
  int order = 0;     ///< 0 for the baseline
  double lambda = 0.0;
  double rel_data_error = 0.0;
  /// ||T_j f||_1 for j = 1..4 (Periodic).
  std::array<double, kReportedSeminorms> seminorms{};
  int iterations = 0;
  bool converged = false;
  Image image;
};

struct Experiment2DResult {
  std::array<double, kReportedSeminorms> truth_seminorms{};
  std::vector<ReconstructionRow> rows;

  const ReconstructionRow* find(const std::string& mode, int order) const;
};

std::array<double, kReportedSeminorms> seminorm_profile(const Image& image);

/// Least-squares baseline: CG on A^T A f = A^T b from f = 0.
ReconstructionRow least_squares_baseline(const Problem2D& problem, int iterations);

/// Reconstructs at every requested order with lambda = scaled ? 2^(k-1) lambda1 : lambda1.
std::vector<ReconstructionRow> reconstruct_orders(const Problem2D& problem, double lambda1,
                                                  bool scaled, const Experiment2DOptions& options);

/// Search grid for tune_lambda1. Image-sized problems put the order-1
/// optimum well above the 1D grid (about 5e4 for 64^2 Shepp-Logan), so the
/// default range is [1, 1e6] at the 1D density of four points per decade.
LambdaSearchSpec default_2d_search(const SolverConfig& solver = {});

/// Order-1 optimal lambda against the phantom.
LambdaSearchResult tune_lambda1(const Problem2D& problem, const LambdaSearchSpec& spec, int jobs);

/// Builds the problem, reconstructs every order in the requested mode and
/// appends the least-squares baseline.
Experiment2DResult run_2d_experiment(Phantom phantom, std::size_t n, std::uint64_t master_seed,
                                     double lambda1, bool scaled,
                                     const Experiment2DOptions& options);

/// metrics.csv: mode,k,lambda,rel_data_error,T1,T2,T3,T4,iterations,converged
/// with a leading "phantom" row.
void write_metrics_csv(std::ostream& out, const Experiment2DResult& result);

}  // namespace hotv
