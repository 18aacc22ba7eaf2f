// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failing criteria. `--only 1,2,8` restricts the run.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "hotv/harness.hpp"
#include "hotv/linsys.hpp"
#include "hotv/operators.hpp"
#include "hotv/parallel.hpp"
#include "hotv/signals.hpp"
#include "hotv/solver.hpp"
#include "oracles.hpp"

using namespace hotv;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Outcome operator_norm() {
  Outcome o;
  std::ostringstream d;
  const std::size_t n = 64;
  for (int k = 1; k <= 8; ++k) {
    // Assemble column j as T_k e_j and take the largest absolute column sum.
    const PATransform t(k, Grid1D{n});
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> e(n, 0.0);
      e[j] = 1.0;
      double col = 0.0;
      for (double v : t.apply(e)) col += std::abs(v);
      worst = std::max(worst, col);
    }
    const double oracle_sum = oracle::pa_matrix_1d(k, n, true).cwiseAbs().colwise().sum().maxCoeff();
    const double expected = std::ldexp(1.0, k);
    if (worst != expected || oracle_sum != expected) o.passed = false;
    d << (k > 1 ? " " : "") << worst;
  }
  o.detail = "norms k=1..8: " + d.str();
  return o;
}

Outcome binomial_identity() {
  Outcome o;
  const auto t = oracle::pascal(20);
  int checked = 0;
  for (int k = 1; k <= 20; ++k) {
    for (int m = 0; m < k; ++m) {
      std::int64_t sum = 0;
      for (int j = 0; j <= m; ++j) {
        const auto c = static_cast<std::int64_t>(binomial(k, j));
        sum += (j + m) % 2 == 0 ? c : -c;
      }
      if (sum != static_cast<std::int64_t>(t[k - 1][m]) || !verify_binomial_identity(k, m)) o.passed = false;
      ++checked;
    }
  }
  o.detail = std::to_string(checked) + " (k, m) pairs checked";
  return o;
}

Outcome jump_scaling() {
  Outcome o;
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<std::size_t> jumps(2, 30);
  double worst = 0.0;
  for (int k = 2; k <= 4; ++k) {
    const PATransform t1(1, Grid1D{512}, Boundary::Valid);
    const PATransform tk(k, Grid1D{512}, Boundary::Valid);
    for (int s = 0; s < 100; ++s) {
      const auto sig = random_piecewise_constant(512, jumps(rng), k, k, 1000 * k + s);
      const double expected = std::ldexp(1.0, k - 1) * pa_seminorm(sig.samples, t1);
      worst = std::max(worst, std::abs(pa_seminorm(sig.samples, tk) - expected) / expected);
    }
  }
  o.passed = worst <= 1e-10;
  o.detail = "max relative deviation " + fmt("%.2e", worst) + " (tol 1e-10)";
  return o;
}

Outcome annihilation() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const PATransform t(k, Grid1D{256}, Boundary::Valid);
    for (int p = 0; p < 50; ++p) {
      std::vector<double> coeff(static_cast<std::size_t>(k));
      double scale = 0.0;
      for (double& v : coeff) {
        v = c(rng);
        scale = std::max(scale, std::abs(v));
      }
      std::vector<double> f(256, 0.0);
      for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = static_cast<double>(j) / 255.0;
        for (int d = 0; d < k; ++d) f[j] += coeff[static_cast<std::size_t>(d)] * std::pow(x, d);
      }
      for (double v : t.apply(f)) worst = std::max(worst, std::abs(v) / scale);
    }
  }
  o.passed = worst < 1e-9;
  o.detail = "max |T_k p| / coefficient scale " + fmt("%.2e", worst) + " (tol 1e-9)";
  return o;
}

Outcome solver_oracle() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto sig = random_piecewise_polynomial(32, seed);
    const auto a = random_sampling_operator(24, 32, 0.25, seed + 100);
    const auto noisy = add_noise(a.apply(sig.samples), NoiseSpec::with_sigma(0.05, seed + 200));
    const auto sys = normalize_system(a, noisy.data);
    const auto ad = oracle::dense(sys.op);
    const auto bd = oracle::to_eigen(sys.data);
    for (int k = 1; k <= 3; ++k) {
      for (double lambda : {1.0, 10.0}) {
        SolverConfig cfg;
        cfg.order = k;
        cfg.lambda = lambda;
        cfg.outer_max = 20000;
        cfg.outer_tol = 1e-7;
        const auto r = hotv_reconstruct(sys, Grid1D{32}, cfg);
        const double ref = oracle::primal_dual_reference(ad, bd, oracle::pa_matrix_1d(k, 32, true), lambda, 1000000);
        worst = std::max(worst, std::abs(r.objective_trace.back() - ref) / ref);
      }
    }
  }
  o.passed = worst <= 1e-4;
  o.detail = "max relative objective gap " + fmt("%.2e", worst) + " over 30 instances (tol 1e-4)";
  return o;
}

Outcome campaign(int jobs) {
  Outcome o;
  CampaignOptions opt;
  opt.jobs = jobs;
  const auto table = run_1d_campaign(100, 42, opt);
  if (!table.valid) {
    o.passed = false;
    o.detail = "campaign invalid: " + std::to_string(table.failures) + " failed trials";
    return o;
  }
  const auto summary = summarize_campaign(table.trials);
  const double base = summary.find(1)->mean_scaled_lambda;
  std::ostringstream d;
  d << "medians";
  for (const auto& s : summary.orders) {
    d << " k" << s.order << '=' << fmt("%+.3f", s.median_rel_error);
    if (std::abs(s.median_rel_error) > 0.25) o.passed = false;
  }
  d << " (band +-0.25); mean 2^(1-k) lambda / order-1 mean";
  for (const auto& s : summary.orders) {
    const double ratio = s.mean_scaled_lambda / base;
    d << ' ' << fmt("%.3f", ratio);
    if (std::abs(ratio - 1.0) >= 0.35) o.passed = false;
  }
  d << " (band 1+-0.35); failures " << table.failures;
  o.detail = d.str();
  return o;
}

Outcome experiment_2d(int jobs) {
  Outcome o;
  Experiment2DOptions opt;
  opt.jobs = jobs;
  const auto problem = make_2d_problem(Phantom::SheppLogan, 64, 1, opt);
  const auto tuned = tune_lambda1(problem, default_2d_search(opt.solver), jobs);
  const double l1 = tuned.lambda_opt;

  const auto scaled = reconstruct_orders(problem, l1, true, opt);
  const auto unscaled = reconstruct_orders(problem, l1, false, opt);
  const auto truth = seminorm_profile(problem.truth);

  std::ostringstream d;
  d << "lambda1=" << fmt("%.4g", l1) << (tuned.range_too_narrow ? " (search edge)" : "");

  double lo = INFINITY, hi = 0.0;
  for (const auto& r : scaled) {
    lo = std::min(lo, r.rel_data_error);
    hi = std::max(hi, r.rel_data_error);
  }
  const bool a = hi / lo < 1.5;
  d << "; (a) " << (a ? "pass" : "FAIL") << " max/min=" << fmt("%.3f", hi / lo);

  bool b = true;
  for (std::size_t i = 1; i < unscaled.size(); ++i) b = b && unscaled[i].rel_data_error > unscaled[i - 1].rel_data_error;
  d << "; (b) " << (b ? "pass" : "FAIL") << " unscaled errors";
  for (const auto& r : unscaled) d << ' ' << fmt("%.4g", r.rel_data_error);

  bool c = true;
  d << "; (c) ";
  std::ostringstream cr;
  for (std::size_t j = 1; j < truth.size(); ++j) {
    const double ratio = truth[j] / truth[j - 1];
    c = c && ratio >= 1.8 && ratio <= 2.2;
    cr << ' ' << fmt("%.3f", ratio);
  }
  d << (c ? "pass" : "FAIL") << " phantom ratios" << cr.str();

  // Each reconstruction measured in its own order, ||T_{k+1} f_{k+1}|| / ||T_k f_k||.
  auto own_ratios = [](const std::vector<ReconstructionRow>& rows, double lo_b, double hi_b, std::ostringstream& out) {
    bool ok = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double ratio = rows[i].seminorms[static_cast<std::size_t>(rows[i].order - 1)] /
                           rows[i - 1].seminorms[static_cast<std::size_t>(rows[i - 1].order - 1)];
      ok = ok && ratio >= lo_b && ratio <= hi_b;
      out << ' ' << fmt("%.3f", ratio);
    }
    return ok;
  };
  std::ostringstream sr, ur;
  const bool ds = own_ratios(scaled, 1.5, 2.5, sr);
  const bool du = own_ratios(unscaled, 0.0, 1.5 - 1e-15, ur);
  d << "; (d) " << (ds && du ? "pass" : "FAIL") << " scaled" << sr.str() << " unscaled" << ur.str();

  o.passed = a && b && c && ds && du;
  o.detail = d.str();
  return o;
}

Outcome adjoint_and_spectral() {
  Outcome o;
  std::mt19937_64 rng(88);
  double pa_worst = 0.0, a_worst = 0.0, norm_worst = 0.0;
  bool monotone = true;
  for (int probe = 0; probe < 100; ++probe) {
    const int k = 1 + probe % 4;
    const Boundary bd = probe % 2 == 0 ? Boundary::Periodic : Boundary::Valid;
    const PATransform t1(k, Grid1D{64}, bd);
    const auto f = random_vector(64, rng);
    const auto g = random_vector(t1.output_size(), rng);
    const double l1 = dot(t1.apply(f), g);
    pa_worst = std::max(pa_worst, std::abs(l1 - dot(f, t1.apply_adjoint(g))) / std::abs(l1));
    const PATransform t2(k, Grid2D{12, 10}, bd);
    const auto f2 = random_vector(120, rng);
    const auto g2 = random_vector(t2.output_size(), rng);
    const double l2 = dot(t2.apply(f2), g2);
    pa_worst = std::max(pa_worst, std::abs(l2 - dot(f2, t2.apply_adjoint(g2))) / std::abs(l2));

    const auto a = random_sampling_operator(32, 48, 0.2, 500 + probe);
    const auto x = random_vector(48, rng);
    const auto y = random_vector(32, rng);
    const double la = dot(a.apply(x), y);
    a_worst = std::max(a_worst, std::abs(la - dot(x, a.apply_adjoint(y))) / std::abs(la));

    const auto ad = oracle::dense(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ad.transpose() * ad);
    const double ref = std::sqrt(eig.eigenvalues().maxCoeff());
    const auto est = spectral_norm(a, 1e-14, 5000, static_cast<std::uint64_t>(probe));
    norm_worst = std::max(norm_worst, std::abs(est.value - ref) / ref);
    for (std::size_t i = 1; i < est.history.size(); ++i) {
      monotone = monotone && est.history[i] >= est.history[i - 1] - 1e-12 * est.history[i];
    }
  }
  o.passed = pa_worst < 1e-12 && a_worst < 1e-12 && norm_worst < 1e-8 && monotone;
  o.detail = "PA adjoint " + fmt("%.1e", pa_worst) + ", A adjoint " + fmt("%.1e", a_worst) +
             " (tol 1e-12); spectral norm vs eigensolver " + fmt("%.1e", norm_worst) +
             " (tol 1e-8); power-iteration history " + (monotone ? "monotone" : "NOT monotone");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  int jobs = default_jobs();
  app.add_option("--only", only, "Criterion ids to run")->delimiter(',');
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "exact operator norm", 1.0, operator_norm},
      {2, "binomial identity", 1.0, binomial_identity},
      {3, "jump-scaling equality", 5.0, jump_scaling},
      {4, "annihilation", 1.0, annihilation},
      {5, "solver oracle equivalence", 120.0, solver_oracle},
      {6, "1D optimal-lambda campaign", 3600.0, [&] { return campaign(jobs); }},
      {7, "2D Shepp-Logan experiment", 600.0, [&] { return experiment_2d(jobs); }},
      {8, "adjoint and spectral norm", 5.0, adjoint_and_spectral},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_s;
    const bool ok = o.passed && in_time;
    if (!ok) ++failed;
    std::printf("criterion %d %s  %s: %s [%.1f s, limit %.0f s%s]\n", c.id, ok ? "PASS" : "FAIL", c.title,
                o.detail.c_str(), secs, c.limit_s, in_time ? "" : ", EXCEEDED");
    std::fflush(stdout);
  }
  return failed;
}
