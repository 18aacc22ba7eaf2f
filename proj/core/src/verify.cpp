#include "hotv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hotv/errors.hpp"
#include "hotv/operators.hpp"
#include "hotv/random.hpp"
#include "hotv/signals.hpp"

namespace hotv {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void check_kmax(int kmax) {
  if (kmax < 1 || kmax > PATransform::kMaxOrder) {
    throw DomainError("verify: kmax must lie in [1, " + std::to_string(PATransform::kMaxOrder) + "]");
  }
}

}  // namespace

std::vector<CheckResult> check_operator_norms(const VerifyOptions& opt) {
  check_kmax(opt.kmax);
  std::vector<CheckResult> out;
  for (int k = 1; k <= opt.kmax; ++k) {
    const PATransform t(k, Grid1D{opt.n}, Boundary::Periodic);
    const auto norm = pa_matrix_l1_norm(t);
    const std::int64_t expected = std::int64_t{1} << k;
    out.push_back({"operator-norm k=" + std::to_string(k), norm.value == expected,
                   "||T_k||_1 = " + std::to_string(norm.value) + ", expected " +
                       std::to_string(expected)});
  }
  return out;
}

CheckResult check_binomial_identity(const VerifyOptions& opt) {
  std::size_t checked = 0;
  for (int k = 1; k <= opt.binomial_kmax; ++k) {
    for (int m = 0; m < k; ++m) {
      ++checked;
      if (!verify_binomial_identity(k, m)) {
        return {"binomial-identity", false,
                "fails at k=" + std::to_string(k) + ", m=" + std::to_string(m)};
      }
    }
  }
  return {"binomial-identity", true,
          std::to_string(checked) + " cases, k <= " + std::to_string(opt.binomial_kmax)};
}

std::vector<CheckResult> check_jump_scaling(const VerifyOptions& opt) {
  check_kmax(opt.kmax);
  std::vector<CheckResult> out;
  auto rng = make_engine(opt.seed);
  for (int k = 2; k <= opt.kmax; ++k) {
    const std::size_t ks = static_cast<std::size_t>(k);
    const PATransform tv(1, Grid1D{opt.jump_n}, Boundary::Valid);
    const PATransform tk(k, Grid1D{opt.jump_n}, Boundary::Valid);
    // Room for the requested jumps given the spacing.
    const std::size_t max_jumps = std::max<std::size_t>(1, (opt.jump_n - 2 * ks) / (ks + 1) / 2);
    std::uniform_int_distribution<std::size_t> jumps(1, std::min<std::size_t>(max_jumps, 40));
    double worst = 0.0;
    for (std::size_t s = 0; s < opt.jump_signals; ++s) {
      const auto sig = random_piecewise_constant(opt.jump_n, jumps(rng), ks, ks, rng());
      const double lhs = pa_seminorm(sig.samples, tk);
      const double rhs = std::ldexp(pa_seminorm(sig.samples, tv), k - 1);
      worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    out.push_back({"jump-scaling k=" + std::to_string(k), worst <= 1e-10,
                   "max relative deviation " + fmt(worst) + " over " +
                       std::to_string(opt.jump_signals) + " signals"});
  }
  return out;
}

std::vector<CheckResult> check_annihilation(const VerifyOptions& opt) {
  check_kmax(opt.kmax);
  std::vector<CheckResult> out;
  auto rng = make_engine(opt.seed + 1);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  const std::size_t n = opt.annihilation_n;
  for (int k = 1; k <= opt.kmax; ++k) {
    const PATransform t(k, Grid1D{n}, Boundary::Valid);
    double worst = 0.0;
    for (std::size_t p = 0; p < opt.annihilation_polys; ++p) {
      std::vector<double> c(static_cast<std::size_t>(k));
      double scale = 0.0;
      for (double& v : c) {
        v = coeff(rng);
        scale = std::max(scale, std::abs(v));
      }
      std::vector<double> f(n);
      for (std::size_t j = 0; j < n; ++j) {
        const double x = static_cast<double>(j) / static_cast<double>(n - 1);
        double v = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
        f[j] = v;
      }
      const auto tf = t.apply(f);
      for (double v : tf) worst = std::max(worst, std::abs(v) / scale);
    }
    out.push_back({"annihilation k=" + std::to_string(k), worst < 1e-9,
                   "max |T_k p| / coefficient scale = " + fmt(worst)});
  }
  return out;
}

std::vector<CheckResult> check_sharpness(const VerifyOptions& opt) {
  check_kmax(opt.kmax);
  std::vector<CheckResult> out;
  const std::size_t n = opt.n % 2 == 0 ? opt.n : opt.n + 1;
  std::vector<double> f(n);
  for (std::size_t j = 0; j < n; ++j) f[j] = j % 2 == 0 ? 1.0 : -1.0;
  const double f_norm = static_cast<double>(n);
  for (int k = 1; k <= opt.kmax; ++k) {
    const PATransform t(k, Grid1D{n}, Boundary::Periodic);
    const double ratio = pa_seminorm(f, t) / f_norm;
    const double expected = std::ldexp(1.0, k);
    out.push_back({"sharpness k=" + std::to_string(k), std::abs(ratio - expected) <= 1e-12 * expected,
                   "||T_k f||_1 / ||f||_1 = " + fmt(ratio)});
  }
  return out;
}

std::vector<CheckResult> run_identity_suites(const VerifyOptions& opt) {
  std::vector<CheckResult> all;
  const auto append = [&all](std::vector<CheckResult> part) {
    all.insert(all.end(), part.begin(), part.end());
  };
  append(check_operator_norms(opt));
  all.push_back(check_binomial_identity(opt));
  append(check_jump_scaling(opt));
  append(check_annihilation(opt));
  append(check_sharpness(opt));
  return all;
}

}  // namespace hotv
