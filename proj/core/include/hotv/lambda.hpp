#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hotv/linsys.hpp"
#include "hotv/operators.hpp"
#include "hotv/solver.hpp"

namespace hotv {

/// lambda_1 * 2^(k-1): the fidelity weight for order k matched to a TV weight.
double scale_lambda(double lambda1, int k);

/// (2^(1-k) lambda_opt_k - lambda_opt_1) / lambda_opt_1. Negative when the
/// rescaled order-k optimum falls below the TV optimum.
double scaling_relative_error(double lambda_opt_k, double lambda_opt_1, int k);

struct LambdaSearchSpec {
  double grid_lo = 1e-2;
  double grid_hi = 1e4;
  int coarse_points = 25;
  /// Golden-section refinement stops once (hi - lo) / mid < refine_tol.
  double refine_tol = 0.05;
  /// Template for every solve; order and lambda are overwritten.
  SolverConfig solver;

  void validate() const;
};

struct LambdaSample {
  double lambda = 0.0;
  double error = 0.0;
};

struct LambdaSearchResult {
  double lambda_opt = 0.0;
  double error_opt = 0.0;
  /// Every evaluated point, sorted by lambda.
  std::vector<LambdaSample> curve;
  /// The best coarse point sat on the grid edge, so the grid was extended by a decade.
  bool extended = false;
  /// Still on the edge after extending; lambda_opt is that edge value.
  bool range_too_narrow = false;
  int refinement_steps = 0;
};

using ErrorCurve = std::function<double(double lambda)>;

/// Log-uniform coarse scan of `error`, then golden-section refinement around
/// the best coarse point. Coarse evaluations run on up to `jobs` threads.
LambdaSearchResult minimize_error_curve(const ErrorCurve& error, const LambdaSearchSpec& spec,
                                        int jobs = 1);

/// lambda minimizing ||f_true - f*(lambda)||_2, where f*(lambda) is the ADMM
/// reconstruction with transform t.
LambdaSearchResult optimal_lambda_search(const NormalizedSystem& system, const PATransform& t,
                                         std::span<const double> f_true,
                                         const LambdaSearchSpec& spec, int jobs = 1);

}  // namespace hotv
