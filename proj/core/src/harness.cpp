#include "hotv/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "hotv/csv.hpp"
#include "hotv/errors.hpp"
#include "hotv/parallel.hpp"
#include "hotv/random.hpp"
#include "hotv/signals.hpp"
#include "hotv/vec.hpp"

namespace hotv {

namespace {

enum SeedStream : std::uint64_t {
  kParameters = 1,
  kSignal = 2,
  kOperator = 3,
  kNoise = 4,
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void CampaignOptions::validate() const {
  if (n < 32) throw DomainError("campaign: n must be >= 32");
  if (!(density > 0.0 && density <= 1.0)) throw DomainError("campaign: density must lie in (0, 1]");
  if (orders.empty()) throw DomainError("campaign: no orders requested");
  for (int k : orders) {
    if (k < 1 || k > PATransform::kMaxOrder) throw DomainError("campaign: order out of range");
  }
  if (!(rate_lo > 0.0 && rate_lo <= rate_hi && rate_hi <= 1.0)) {
    throw DomainError("campaign: sampling-rate range must satisfy 0 < lo <= hi <= 1");
  }
  if (!(sigma_lo >= 0.0 && sigma_lo <= sigma_hi)) throw DomainError("campaign: bad sigma range");
  if (sigma && !(*sigma >= 0.0)) throw DomainError("campaign: sigma must be >= 0");
  if (sampling_rate && !(*sampling_rate > 0.0 && *sampling_rate <= 1.0)) {
    throw DomainError("campaign: sampling rate must lie in (0, 1]");
  }
  search.validate();
}

TrialSpec make_trial_spec(std::uint64_t master_seed, std::uint64_t trial_id,
                          const CampaignOptions& options) {
  TrialSpec spec;
  spec.trial_id = trial_id;
  spec.master_seed = master_seed;
  spec.n = options.n;
  spec.density = options.density;
  spec.orders = options.orders;
  spec.signal_seed = derive_seed(master_seed, kSignal, trial_id);
  spec.operator_seed = derive_seed(master_seed, kOperator, trial_id);
  spec.noise_seed = derive_seed(master_seed, kNoise, trial_id);

  auto rng = make_engine(derive_seed(master_seed, kParameters, trial_id));
  // The rate is a row count over n so that rows / n equals it exactly.
  if (options.sampling_rate) {
    spec.rows = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(*options.sampling_rate * static_cast<double>(options.n))));
  } else {
    const auto lo = static_cast<std::size_t>(std::ceil(options.rate_lo * static_cast<double>(options.n)));
    const auto hi = static_cast<std::size_t>(std::floor(options.rate_hi * static_cast<double>(options.n)));
    std::uniform_int_distribution<std::size_t> rows(std::max<std::size_t>(lo, 1), std::max(hi, lo));
    spec.rows = rows(rng);
  }
  spec.sampling_rate = static_cast<double>(spec.rows) / static_cast<double>(spec.n);
  if (options.sigma) {
    spec.sigma = *options.sigma;
  } else {
    std::uniform_real_distribution<double> sigma(options.sigma_lo, options.sigma_hi);
    spec.sigma = sigma(rng);
  }
  return spec;
}

const OrderOutcome* TrialResult::find(int order) const {
  for (const auto& o : orders) {
    if (o.order == order) return &o;
  }
  return nullptr;
}

TrialResult run_trial(const TrialSpec& spec, const CampaignOptions& options) {
  TrialResult result;
  result.spec = spec;
  try {
    const auto signal = random_piecewise_polynomial(spec.n, spec.signal_seed);
    const auto op = random_sampling_operator(spec.rows, spec.n, spec.density, spec.operator_seed);
    const auto clean = op.apply(signal.samples);
    const auto noisy = add_noise(clean, NoiseSpec::with_sigma(spec.sigma, spec.noise_seed));
    const auto system = normalize_system(op, noisy.data);

    for (int k : spec.orders) {
      const PATransform t(k, Grid1D{spec.n}, options.search.solver.boundary);
      auto search = optimal_lambda_search(system, t, signal.samples, options.search, 1);
      OrderOutcome outcome;
      outcome.order = k;
      outcome.lambda_opt = search.lambda_opt;
      outcome.l2_error = search.error_opt;
      outcome.range_too_narrow = search.range_too_narrow;
      outcome.curve = std::move(search.curve);
      result.orders.push_back(std::move(outcome));
    }
    const OrderOutcome* tv = result.find(1);
    for (auto& o : result.orders) {
      o.rel_error = tv ? scaling_relative_error(o.lambda_opt, tv->lambda_opt, o.order) : kNaN;
    }
  } catch (const std::exception& e) {
    result.failed = true;
    result.failure = e.what();
    result.orders.clear();
  }
  return result;
}

CampaignTable run_1d_campaign(std::size_t trials, std::uint64_t master_seed,
                              const CampaignOptions& options) {
  if (trials < 1) throw DomainError("run_1d_campaign: trials must be >= 1");
  options.validate();
  CampaignTable table;
  table.trials.resize(trials);
  parallel_for(trials, options.jobs, [&](std::size_t i) {
    table.trials[i] = run_trial(make_trial_spec(master_seed, i, options), options);
  });
  table.failures = static_cast<std::size_t>(
      std::count_if(table.trials.begin(), table.trials.end(), [](const TrialResult& r) { return r.failed; }));
  table.valid = table.failures * 10 <= trials;
  return table;
}

void Histogram::add(double value) {
  if (std::isnan(value)) return;
  if (value < kLo) {
    ++underflow;
    return;
  }
  // The small offset keeps exact bin edges such as -0.10 in the bin they open.
  const double pos = (value - kLo) / kWidth + 1e-9;
  if (pos >= static_cast<double>(kBins)) {
    ++overflow;
    return;
  }
  ++counts[static_cast<std::size_t>(pos)];
}

std::size_t Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0}) + underflow + overflow;
}

double Histogram::bin_lo(std::size_t bin) { return kLo + kWidth * static_cast<double>(bin); }

double median(std::vector<double> values) {
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

const OrderSummary* CampaignSummary::find(int order) const {
  for (const auto& o : orders) {
    if (o.order == order) return &o;
  }
  return nullptr;
}

CampaignSummary summarize_campaign(const std::vector<TrialResult>& results) {
  std::map<int, std::vector<const OrderOutcome*>> by_order;
  CampaignSummary summary;
  for (const auto& trial : results) {
    if (trial.failed) continue;
    ++summary.completed_trials;
    for (const auto& o : trial.orders) by_order[o.order].push_back(&o);
  }
  if (summary.completed_trials == 0) {
    throw DomainError("summarize_campaign: no completed trials");
  }
  for (const auto& [order, outcomes] : by_order) {
    OrderSummary s;
    s.order = order;
    s.trials = outcomes.size();
    std::vector<double> scaled;
    std::vector<double> rel;
    for (const auto* o : outcomes) {
      scaled.push_back(std::ldexp(o->lambda_opt, 1 - order));
      s.histogram.add(o->rel_error);
      if (!std::isnan(o->rel_error)) rel.push_back(o->rel_error);
    }
    s.mean_scaled_lambda = std::accumulate(scaled.begin(), scaled.end(), 0.0) / static_cast<double>(scaled.size());
    s.median_scaled_lambda = median(scaled);
    s.mean_rel_error =
        rel.empty() ? kNaN : std::accumulate(rel.begin(), rel.end(), 0.0) / static_cast<double>(rel.size());
    s.median_rel_error = median(rel);
    summary.orders.push_back(std::move(s));
  }
  return summary;
}

void write_campaign_csv(std::ostream& out, const std::vector<TrialResult>& results) {
  out << "trial_id,k,lambda_opt,rel_error,l2_err\n";
  for (const auto& trial : results) {
    if (trial.failed) continue;
    for (const auto& o : trial.orders) {
      out << trial.spec.trial_id << ',' << o.order << ',' << csv::format(o.lambda_opt) << ','
          << csv::format(o.rel_error) << ',' << csv::format(o.l2_error) << '\n';
    }
  }
}

std::vector<TrialResult> read_campaign_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("campaign csv: missing header");
  std::map<std::uint64_t, TrialResult> trials;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = csv::split(line);
    if (f.size() != 5) throw std::invalid_argument("campaign csv: expected 5 fields");
    const auto id = static_cast<std::uint64_t>(csv::parse_int(f[0]));
    auto& trial = trials[id];
    trial.spec.trial_id = id;
    OrderOutcome o;
    o.order = static_cast<int>(csv::parse_int(f[1]));
    o.lambda_opt = csv::parse_double(f[2]);
    o.rel_error = csv::parse_double(f[3]);
    o.l2_error = csv::parse_double(f[4]);
    trial.orders.push_back(std::move(o));
  }
  std::vector<TrialResult> out;
  out.reserve(trials.size());
  for (auto& [id, trial] : trials) out.push_back(std::move(trial));
  return out;
}

void write_summary_csv(std::ostream& out, const CampaignSummary& summary) {
  out << "k,trials,mean_scaled_lambda,median_scaled_lambda,mean_rel_error,median_rel_error\n";
  for (const auto& s : summary.orders) {
    out << s.order << ',' << s.trials << ',' << csv::format(s.mean_scaled_lambda) << ','
        << csv::format(s.median_scaled_lambda) << ',' << csv::format(s.mean_rel_error) << ','
        << csv::format(s.median_rel_error) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const CampaignSummary& summary) {
  out << "k,bin_lo,bin_hi,count\n";
  for (const auto& s : summary.orders) {
    const auto& h = s.histogram;
    out << s.order << ",-inf," << csv::format(Histogram::kLo) << ',' << h.underflow << '\n';
    for (std::size_t b = 0; b < Histogram::kBins; ++b) {
      out << s.order << ',' << csv::format(Histogram::bin_lo(b)) << ','
          << csv::format(Histogram::bin_lo(b + 1)) << ',' << h.counts[b] << '\n';
    }
    out << s.order << ',' << csv::format(Histogram::kHi) << ",inf," << h.overflow << '\n';
  }
}

void write_histogram_svg(std::ostream& out, const CampaignSummary& summary) {
  constexpr double kPanelW = 420.0;
  constexpr double kPanelH = 160.0;
  constexpr double kMargin = 30.0;
  const double height = (kPanelH + kMargin) * static_cast<double>(summary.orders.size()) + kMargin;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPanelW + 2 * kMargin
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  double top = kMargin;
  for (const auto& s : summary.orders) {
    const auto& h = s.histogram;
    const std::size_t peak =
        std::max<std::size_t>(1, *std::max_element(h.counts.begin(), h.counts.end()));
    const double bar_w = kPanelW / static_cast<double>(Histogram::kBins);
    out << "<text x=\"" << kMargin << "\" y=\"" << top - 6 << "\">k = " << s.order
        << " (scaling relative error, %)</text>\n";
    for (std::size_t b = 0; b < Histogram::kBins; ++b) {
      const double bh = kPanelH * static_cast<double>(h.counts[b]) / static_cast<double>(peak);
      out << "<rect x=\"" << kMargin + bar_w * static_cast<double>(b) << "\" y=\""
          << top + kPanelH - bh << "\" width=\"" << bar_w * 0.9 << "\" height=\"" << bh
          << "\" fill=\"steelblue\"/>\n";
    }
    const double zero_x = kMargin + kPanelW * (0.0 - Histogram::kLo) / (Histogram::kHi - Histogram::kLo);
    out << "<line x1=\"" << zero_x << "\" y1=\"" << top << "\" x2=\"" << zero_x << "\" y2=\""
        << top + kPanelH << "\" stroke=\"black\" stroke-dasharray=\"3,3\"/>\n";
    top += kPanelH + kMargin;
  }
  out << "</svg>\n";
}

void write_campaign_directory(const std::filesystem::path& dir, const CampaignTable& table,
                              const CampaignSummary& summary) {
  std::filesystem::create_directories(dir / "curves");
  std::ostringstream campaign, trials, sum, hist, svg;
  write_campaign_csv(campaign, table.trials);
  write_summary_csv(sum, summary);
  write_histogram_csv(hist, summary);
  write_histogram_svg(svg, summary);
  trials << "trial_id,rows,sampling_rate,sigma,failed,failure\n";
  for (const auto& t : table.trials) {
    trials << t.spec.trial_id << ',' << t.spec.rows << ',' << csv::format(t.spec.sampling_rate)
           << ',' << csv::format(t.spec.sigma) << ',' << (t.failed ? 1 : 0) << ",\""
           << t.failure << "\"\n";
    for (const auto& o : t.orders) {
      std::ostringstream curve;
      curve << "lambda,error\n";
      for (const auto& p : o.curve) curve << csv::format(p.lambda) << ',' << csv::format(p.error) << '\n';
      csv::write_file(dir / "curves" /
                          ("trial" + std::to_string(t.spec.trial_id) + "_k" +
                           std::to_string(o.order) + ".csv"),
                      curve.str());
    }
  }
  csv::write_file(dir / "campaign.csv", campaign.str());
  csv::write_file(dir / "trials.csv", trials.str());
  csv::write_file(dir / "summary.csv", sum.str());
  csv::write_file(dir / "histogram.csv", hist.str());
  csv::write_file(dir / "histogram.svg", svg.str());
}

// ---------------------------------------------------------------------------
// 2D

std::optional<Phantom> parse_phantom(const std::string& name) {
  if (name == "shepp-logan") return Phantom::SheppLogan;
  if (name == "smooth") return Phantom::Smooth;
  return std::nullopt;
}

std::string phantom_name(Phantom p) {
  return p == Phantom::SheppLogan ? "shepp-logan" : "smooth";
}

Problem2D make_2d_problem(Phantom phantom, std::size_t n, std::uint64_t master_seed,
                          const Experiment2DOptions& options) {
  if (n < 32) throw DomainError("2D experiment: n must be >= 32");
  Problem2D problem;
  problem.phantom = phantom;
  problem.truth = phantom == Phantom::SheppLogan
                      ? shepp_logan(n)
                      : piecewise_smooth_phantom(n, derive_seed(master_seed, kSignal));
  const std::size_t cells = n * n;
  const auto rows = static_cast<std::size_t>(std::llround(options.sampling_rate * static_cast<double>(cells)));
  const auto op = random_sampling_operator(std::max<std::size_t>(rows, 1), cells, options.density,
                                           derive_seed(master_seed, kOperator));
  const auto clean = op.apply(problem.truth.pixels);
  const auto noisy =
      add_noise(clean, NoiseSpec::with_snr(options.snr, derive_seed(master_seed, kNoise), options.snr_db));
  problem.realized_snr = noisy.realized_snr;
  problem.system = normalize_system(op, noisy.data);
  return problem;
}

std::array<double, kReportedSeminorms> seminorm_profile(const Image& image) {
  std::array<double, kReportedSeminorms> out{};
  for (int j = 1; j <= kReportedSeminorms; ++j) {
    const PATransform t(j, image.geometry(), Boundary::Periodic);
    out[static_cast<std::size_t>(j - 1)] = pa_seminorm(image.pixels, t);
  }
  return out;
}

namespace {

Image as_image(const Image& like, std::vector<double> pixels) {
  Image img;
  img.rows = like.rows;
  img.cols = like.cols;
  img.pixels = std::move(pixels);
  return img;
}

}  // namespace

ReconstructionRow least_squares_baseline(const Problem2D& problem, int iterations) {
  const auto& op = problem.system.op;
  std::vector<double> tmp(op.rows());
  const MatVec normal = [&](std::span<const double> x, std::span<double> y) {
    op.apply(x, tmp);
    op.apply_adjoint(tmp, y);
  };
  const auto rhs = op.apply_adjoint(problem.system.data);
  std::vector<double> f(op.cols(), 0.0);
  const auto report = conjugate_gradient(normal, rhs, f, iterations, 1e-12);

  ReconstructionRow row;
  row.mode = "baseline";
  row.order = 0;
  row.rel_data_error = relative_data_error(problem.system, f);
  row.iterations = report.iterations;
  row.converged = report.converged;
  row.image = as_image(problem.truth, std::move(f));
  row.seminorms = seminorm_profile(row.image);
  return row;
}

std::vector<ReconstructionRow> reconstruct_orders(const Problem2D& problem, double lambda1,
                                                  bool scaled, const Experiment2DOptions& options) {
  if (!(lambda1 > 0.0)) throw DomainError("reconstruct_orders: lambda1 must be > 0");
  std::vector<ReconstructionRow> rows(options.orders.size());
  parallel_for(options.orders.size(), options.jobs, [&](std::size_t i) {
    const int k = options.orders[i];
    SolverConfig cfg = options.solver;
    cfg.order = k;
    cfg.lambda = scaled ? scale_lambda(lambda1, k) : lambda1;
    auto sol = hotv_reconstruct(problem.system, problem.truth.geometry(), cfg);
    ReconstructionRow& row = rows[i];
    row.mode = scaled ? "scaled" : "unscaled";
    row.order = k;
    row.lambda = cfg.lambda;
    row.rel_data_error = relative_data_error(problem.system, sol.f);
    row.iterations = sol.iterations;
    row.converged = sol.converged;
    row.image = as_image(problem.truth, std::move(sol.f));
    row.seminorms = seminorm_profile(row.image);
  });
  return rows;
}

LambdaSearchSpec default_2d_search(const SolverConfig& solver) {
  LambdaSearchSpec spec;
  spec.grid_lo = 1.0;
  spec.grid_hi = 1e6;
  spec.solver = solver;
  return spec;
}

LambdaSearchResult tune_lambda1(const Problem2D& problem, const LambdaSearchSpec& spec, int jobs) {
  const PATransform t(1, problem.truth.geometry(), spec.solver.boundary);
  return optimal_lambda_search(problem.system, t, problem.truth.pixels, spec, jobs);
}

const ReconstructionRow* Experiment2DResult::find(const std::string& mode, int order) const {
  for (const auto& r : rows) {
    if (r.mode == mode && r.order == order) return &r;
  }
  return nullptr;
}

Experiment2DResult run_2d_experiment(Phantom phantom, std::size_t n, std::uint64_t master_seed,
                                     double lambda1, bool scaled,
                                     const Experiment2DOptions& options) {
  const auto problem = make_2d_problem(phantom, n, master_seed, options);
  Experiment2DResult result;
  result.truth_seminorms = seminorm_profile(problem.truth);
  result.rows = reconstruct_orders(problem, lambda1, scaled, options);
  result.rows.push_back(least_squares_baseline(problem, options.baseline_iterations));
  return result;
}

void write_metrics_csv(std::ostream& out, const Experiment2DResult& result) {
  out << "mode,k,lambda,rel_data_error,T1,T2,T3,T4,iterations,converged\n";
  out << "phantom,0,0,0";
  for (double s : result.truth_seminorms) out << ',' << csv::format(s);
  out << ",0,1\n";
  for (const auto& r : result.rows) {
    out << r.mode << ',' << r.order << ',' << csv::format(r.lambda) << ','
        << csv::format(r.rel_data_error);
    for (double s : r.seminorms) out << ',' << csv::format(s);
    out << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
  }
}

}  // namespace hotv
