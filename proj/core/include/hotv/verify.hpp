#pragma once

// Exact-identity checks for the PA transforms, shared by the `verify`
// subcommand and the test suites.

#include <cstdint>
#include <string>
#include <vector>

namespace hotv {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  int kmax = 4;
  /// Grid for the norm and sharpness checks.
  std::size_t n = 64;
  /// Largest order for the binomial identity sweep.
  int binomial_kmax = 20;
  std::size_t jump_signals = 100;
  std::size_t jump_n = 512;
  std::size_t annihilation_polys = 50;
  std::size_t annihilation_n = 256;
  std::uint64_t seed = 1;
};

/// ||T_k||_1 == 2^k for the assembled Periodic matrix, k = 1..kmax.
std::vector<CheckResult> check_operator_norms(const VerifyOptions& opt);

/// C(k-1, m) == alternating binomial sum for all k <= binomial_kmax, m < k.
CheckResult check_binomial_identity(const VerifyOptions& opt);

/// ||T_k f||_1 == 2^(k-1) ||T_1 f||_1 on spaced piecewise-constant signals
/// (Valid mode), k = 2..kmax, relative tolerance 1e-10.
std::vector<CheckResult> check_jump_scaling(const VerifyOptions& opt);

/// Valid-mode T_k annihilates random polynomials of degree k-1, k = 1..kmax.
std::vector<CheckResult> check_annihilation(const VerifyOptions& opt);

/// The alternating signal (-1)^j attains ||T_k f||_1 = 2^k ||f||_1.
std::vector<CheckResult> check_sharpness(const VerifyOptions& opt);

/// Runs every suite above in order.
std::vector<CheckResult> run_identity_suites(const VerifyOptions& opt);

}  // namespace hotv
