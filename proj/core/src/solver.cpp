#include "hotv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hotv/errors.hpp"
#include "hotv/vec.hpp"

namespace hotv {

void SolverConfig::validate() const {
  if (!(lambda > 0.0)) throw DomainError("SolverConfig: lambda must be positive");
  if (!(beta > 0.0)) throw DomainError("SolverConfig: beta must be positive");
  if (!(outer_tol > 0.0) || !(inner_tol > 0.0)) {
    throw DomainError("SolverConfig: tolerances must be positive");
  }
  if (outer_max < 1 || inner_max < 1) {
    throw DomainError("SolverConfig: iteration limits must be >= 1");
  }
  if (order < 0 || order > PATransform::kMaxOrder) {
    throw DomainError("SolverConfig: order out of range");
  }
}

void shrink_into(std::span<const double> x, double mu, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double mag = std::abs(x[i]) - mu;
    out[i] = mag > 0.0 ? std::copysign(mag, x[i]) : 0.0;
  }
}

std::vector<double> shrink(std::span<const double> x, double mu) {
  if (!(mu > 0.0)) throw DomainError("shrink: mu must be positive");
  std::vector<double> out(x.size());
  shrink_into(x, mu, out);
  return out;
}

double objective(std::span<const double> f, const LinearOperator& op, std::span<const double> b,
                 const PATransform& t, double lambda) {
  if (f.size() != op.cols() || b.size() != op.rows() || f.size() != t.input_size()) {
    throw ShapeError("objective: inconsistent shapes");
  }
  auto residual = op.apply(f);
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= b[i];
  return 0.5 * lambda * vec::dot(residual, residual) + pa_seminorm(f, t);
}

double objective(std::span<const double> f, const NormalizedSystem& system, const PATransform& t,
                 double lambda) {
  return objective(f, system.op, system.data, t, lambda);
}

CgReport conjugate_gradient(const MatVec& apply, std::span<const double> rhs, std::span<double> x,
                            int max_iter, double tol) {
  const std::size_t n = rhs.size();
  CgReport report;
  const double rhs_norm = vec::norm2(rhs);
  if (rhs_norm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    report.converged = true;
    return report;
  }

  std::vector<double> r(n), p(n), q(n);
  apply(x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];
  double rr = vec::dot(r, r);
  report.relative_residual = std::sqrt(rr) / rhs_norm;
  if (report.relative_residual <= tol) {
    report.converged = true;
    return report;
  }
  p = r;
  for (int it = 1; it <= max_iter; ++it) {
    apply(p, q);
    const double curvature = vec::dot(p, q);
    if (!(curvature > 0.0) || !std::isfinite(curvature)) {
      report.breakdown = true;
      return report;
    }
    const double alpha = rr / curvature;
    vec::axpy(alpha, p, x);
    vec::axpy(-alpha, q, r);
    const double rr_next = vec::dot(r, r);
    report.iterations = it;
    report.relative_residual = std::sqrt(rr_next) / rhs_norm;
    if (report.relative_residual <= tol) {
      report.converged = true;
      return report;
    }
    const double ratio = rr_next / rr;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + ratio * p[i];
    rr = rr_next;
  }
  return report;
}

SolverResult hotv_reconstruct(const NormalizedSystem& system, const Geometry& geometry,
                              const SolverConfig& cfg) {
  return hotv_reconstruct(system.op, system.data, geometry, cfg);
}

SolverResult hotv_reconstruct(const LinearOperator& op, std::span<const double> b,
                              const Geometry& geometry, const SolverConfig& cfg) {
  cfg.validate();
  const PATransform t(cfg.order, geometry, cfg.boundary);
  const std::size_t n = t.input_size();
  const std::size_t p = t.output_size();
  if (op.cols() != n || op.rows() != b.size()) {
    throw ShapeError("hotv_reconstruct: operator " + std::to_string(op.rows()) + "x" +
                     std::to_string(op.cols()) + " does not match data " +
                     std::to_string(b.size()) + " / grid " + std::to_string(n));
  }

  const double lambda = cfg.lambda;
  const double beta = cfg.beta;

  std::vector<double> atb = op.apply_adjoint(b);
  std::vector<double> f = atb;
  std::vector<double> tf = t.apply(f);
  std::vector<double> w = tf;
  std::vector<double> u(p, 0.0);

  std::vector<double> rhs(n), diff(p), tmp_n(n), tmp_m(op.rows()), tmp_p(p), f_old(n), w_old(p);

  const MatVec normal_op = [&](std::span<const double> x, std::span<double> y) {
    op.apply(x, tmp_m);
    op.apply_adjoint(tmp_m, y);
    t.apply(x, tmp_p);
    t.apply_adjoint(tmp_p, tmp_n);
    for (std::size_t i = 0; i < n; ++i) y[i] = lambda * y[i] + beta * tmp_n[i];
  };

  const auto objective_of = [&](std::span<const double> x, std::span<const double> tx) {
    op.apply(x, tmp_m);
    double fit = 0.0;
    for (std::size_t i = 0; i < tmp_m.size(); ++i) {
      const double r = tmp_m[i] - b[i];
      fit += r * r;
    }
    return 0.5 * lambda * fit + vec::norm1(tx);
  };

  SolverResult result;
  result.objective_trace.reserve(static_cast<std::size_t>(cfg.outer_max));
  constexpr double kEps = 1e-12;

  for (int it = 1; it <= cfg.outer_max; ++it) {
    f_old = f;

    // f-update: (lambda A^T A + beta T^T T) f = lambda A^T b + beta T^T (w - u)
    for (std::size_t i = 0; i < p; ++i) diff[i] = w[i] - u[i];
    t.apply_adjoint(diff, tmp_n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = lambda * atb[i] + beta * tmp_n[i];
    const auto cg = conjugate_gradient(normal_op, rhs, f, cfg.inner_max, cfg.inner_tol);
    if (cg.breakdown) {
      f = f_old;
      result.cg_breakdown = true;
      break;
    }
    for (double v : f) {
      if (!std::isfinite(v)) {
        throw NumericalError("hotv_reconstruct: non-finite iterate at outer iteration " +
                                 std::to_string(it),
                             it);
      }
    }

    // w-update (shrinkage) and scaled dual ascent.
    t.apply(f, tf);
    for (std::size_t i = 0; i < p; ++i) tmp_p[i] = tf[i] + u[i];
    w_old = w;
    shrink_into(tmp_p, 1.0 / beta, w);
    for (std::size_t i = 0; i < p; ++i) u[i] += tf[i] - w[i];

    result.objective_trace.push_back(objective_of(f, tf));
    result.iterations = it;

    // The split variable is included because w_0 = T f_0 makes f_0 a fixed
    // point of the first f-update, which would otherwise stop at iteration 1.
    const double change =
        std::max(vec::distance2(f, f_old) / std::max(vec::norm2(f_old), kEps),
                 vec::distance2(w, w_old) / std::max(vec::norm2(w_old), kEps));
    if (change < cfg.outer_tol) {
      result.converged = true;
      break;
    }
  }

  result.multiplier.resize(p);
  for (std::size_t i = 0; i < p; ++i) result.multiplier[i] = beta * u[i];

  // Final metrics are recomputed from f alone.
  const double b_norm = vec::norm2(b);
  auto residual = op.apply(f);
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= b[i];
  result.relative_data_error =
      b_norm > 0.0 ? vec::norm2(residual) / b_norm : std::numeric_limits<double>::quiet_NaN();
  result.seminorm = pa_seminorm(f, t);
  result.f = std::move(f);
  return result;
}

}  // namespace hotv
