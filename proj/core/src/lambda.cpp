#include "hotv/lambda.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hotv/errors.hpp"
#include "hotv/parallel.hpp"
#include "hotv/vec.hpp"

namespace hotv {

double scale_lambda(double lambda1, int k) {
  if (k < 1) throw DomainError("scale_lambda: order must be >= 1, got " + std::to_string(k));
  return std::ldexp(lambda1, k - 1);
}

double scaling_relative_error(double lambda_opt_k, double lambda_opt_1, int k) {
  if (!(lambda_opt_1 > 0.0)) throw DomainError("scaling_relative_error: lambda_opt_1 must be > 0");
  if (k < 1) throw DomainError("scaling_relative_error: order must be >= 1");
  return (std::ldexp(lambda_opt_k, 1 - k) - lambda_opt_1) / lambda_opt_1;
}

void LambdaSearchSpec::validate() const {
  if (!(grid_lo > 0.0) || !(grid_lo < grid_hi)) {
    throw DomainError("LambdaSearchSpec: need 0 < grid_lo < grid_hi");
  }
  if (coarse_points < 8) throw DomainError("LambdaSearchSpec: coarse_points must be >= 8");
  if (!(refine_tol > 0.0 && refine_tol < 0.5)) {
    throw DomainError("LambdaSearchSpec: refine_tol must lie in (0, 0.5)");
  }
}

namespace {

constexpr double kGolden = 0.6180339887498949;

double relative_width(double log_lo, double log_hi) {
  const double lo = std::exp(log_lo);
  const double hi = std::exp(log_hi);
  return (hi - lo) / (0.5 * (hi + lo));
}

std::size_t best_index(const std::vector<LambdaSample>& s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].error < s[best].error) best = i;
  }
  return best;
}

void sort_by_lambda(std::vector<LambdaSample>& s) {
  std::sort(s.begin(), s.end(),
            [](const LambdaSample& a, const LambdaSample& b) { return a.lambda < b.lambda; });
}

std::vector<LambdaSample> evaluate_all(const ErrorCurve& error, const std::vector<double>& lambdas,
                                       int jobs) {
  std::vector<LambdaSample> out(lambdas.size());
  parallel_for(lambdas.size(), jobs, [&](std::size_t i) {
    out[i] = LambdaSample{lambdas[i], error(lambdas[i])};
  });
  return out;
}

}  // namespace

LambdaSearchResult minimize_error_curve(const ErrorCurve& error, const LambdaSearchSpec& spec,
                                        int jobs) {
  spec.validate();
  const double log_lo = std::log(spec.grid_lo);
  const double log_hi = std::log(spec.grid_hi);
  const double step = (log_hi - log_lo) / (spec.coarse_points - 1);

  std::vector<double> grid(static_cast<std::size_t>(spec.coarse_points));
  for (int i = 0; i < spec.coarse_points; ++i) grid[i] = std::exp(log_lo + i * step);
  grid.front() = spec.grid_lo;
  grid.back() = spec.grid_hi;

  LambdaSearchResult result;
  result.curve = evaluate_all(error, grid, jobs);
  std::size_t best = best_index(result.curve);

  const bool at_low = best == 0;
  const bool at_high = best + 1 == result.curve.size();
  if (at_low || at_high) {
    // One decade more on the offending side, at (about) the same log spacing.
    result.extended = true;
    const double decade = std::log(10.0);
    const int extra = static_cast<int>(std::ceil(decade / step - 1e-9));
    const double sub = decade / extra;
    std::vector<double> more(static_cast<std::size_t>(extra));
    for (int i = 1; i <= extra; ++i) {
      more[i - 1] = at_low ? std::exp(log_lo - i * sub) : std::exp(log_hi + i * sub);
    }
    const auto extra_samples = evaluate_all(error, more, jobs);
    result.curve.insert(result.curve.end(), extra_samples.begin(), extra_samples.end());
    sort_by_lambda(result.curve);
    best = best_index(result.curve);
    if (best == 0 || best + 1 == result.curve.size()) {
      result.range_too_narrow = true;
      result.lambda_opt = result.curve[best].lambda;
      result.error_opt = result.curve[best].error;
      return result;
    }
  }

  // Golden-section search in log(lambda) between the neighbours of the best point.
  double a = std::log(result.curve[best - 1].lambda);
  double b = std::log(result.curve[best + 1].lambda);
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double ec = error(std::exp(c));
  double ed = error(std::exp(d));
  result.curve.push_back({std::exp(c), ec});
  result.curve.push_back({std::exp(d), ed});
  while (relative_width(a, b) >= spec.refine_tol) {
    ++result.refinement_steps;
    if (ec <= ed) {
      b = d;
      d = c;
      ed = ec;
      c = b - kGolden * (b - a);
      ec = error(std::exp(c));
      result.curve.push_back({std::exp(c), ec});
    } else {
      a = c;
      c = d;
      ec = ed;
      d = a + kGolden * (b - a);
      ed = error(std::exp(d));
      result.curve.push_back({std::exp(d), ed});
    }
  }
  sort_by_lambda(result.curve);
  best = best_index(result.curve);
  result.lambda_opt = result.curve[best].lambda;
  result.error_opt = result.curve[best].error;
  return result;
}

LambdaSearchResult optimal_lambda_search(const NormalizedSystem& system, const PATransform& t,
                                         std::span<const double> f_true,
                                         const LambdaSearchSpec& spec, int jobs) {
  if (f_true.size() != t.input_size()) {
    throw ShapeError("optimal_lambda_search: f_true does not match the transform geometry");
  }
  const ErrorCurve error = [&](double lambda) {
    SolverConfig cfg = spec.solver;
    cfg.order = t.order();
    cfg.boundary = t.boundary();
    cfg.lambda = lambda;
    const auto sol = hotv_reconstruct(system, t.geometry(), cfg);
    return vec::distance2(f_true, sol.f);
  };
  return minimize_error_curve(error, spec, jobs);
}

}  // namespace hotv
