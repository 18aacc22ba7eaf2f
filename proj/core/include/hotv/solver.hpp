#pragma once

// ADMM for the PA-regularized least-squares problem
//
//   minimize_f  lambda/2 ||A f - b||_2^2 + ||T_k f||_1
//
// Note the convention: lambda weights the data-fidelity term, so a larger
// lambda trusts the data more and regularizes less.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hotv/geometry.hpp"
#include "hotv/linsys.hpp"
#include "hotv/operators.hpp"

namespace hotv {

struct SolverConfig {
  int order = 1;
  Boundary boundary = Boundary::Periodic;
  double lambda = 1.0;
  /// ADMM penalty on the splitting w = T_k f, in normalized units.
  double beta = 32.0;
  int outer_max = 250;
  int inner_max = 40;
  /// Stop once the relative change of both f and the split variable w falls
  /// below this.
  double outer_tol = 1e-5;
  /// CG stops once ||r|| <= inner_tol * ||rhs||.
  double inner_tol = 1e-7;
  std::uint64_t seed = 0;

  /// Throws DomainError on non-positive weights or tolerances.
  void validate() const;
};

struct SolverResult {
  std::vector<double> f;
  /// lambda/2 ||A f - b||^2 + ||T_k f||_1 after each outer iteration.
  std::vector<double> objective_trace;
  /// beta * u at exit: the dual variable paired with w = T_k f. At a solution
  /// lambda A^T (A f - b) + T_k^T multiplier = 0 and |multiplier_i| <= 1.
  std::vector<double> multiplier;
  int iterations = 0;
  bool converged = false;
  bool cg_breakdown = false;
  /// ||A f - b|| / ||b||, recomputed from f (NaN when b = 0).
  double relative_data_error = 0.0;
  /// ||T_k f||_1, recomputed from f.
  double seminorm = 0.0;
};

/// Elementwise soft threshold sign(x) max(|x| - mu, 0).
std::vector<double> shrink(std::span<const double> x, double mu);
void shrink_into(std::span<const double> x, double mu, std::span<double> out);

double objective(std::span<const double> f, const LinearOperator& op, std::span<const double> b,
                 const PATransform& t, double lambda);
double objective(std::span<const double> f, const NormalizedSystem& system, const PATransform& t,
                 double lambda);

using MatVec = std::function<void(std::span<const double>, std::span<double>)>;

struct CgReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  bool breakdown = false;
};

/// Conjugate gradient for a symmetric positive definite operator, starting
/// from the contents of x.
CgReport conjugate_gradient(const MatVec& apply, std::span<const double> rhs, std::span<double> x,
                            int max_iter, double tol);

/// Solve with an operator normalized to unit spectral norm.
SolverResult hotv_reconstruct(const NormalizedSystem& system, const Geometry& geometry,
                              const SolverConfig& cfg);

/// Same iteration on an arbitrary (A, b); the caller owns the scaling of lambda.
SolverResult hotv_reconstruct(const LinearOperator& op, std::span<const double> b,
                              const Geometry& geometry, const SolverConfig& cfg);

}  // namespace hotv
