#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hotv/geometry.hpp"
#include "hotv/linsys.hpp"

namespace hotv {

/// One polynomial piece in the local coordinate t = (j - start) / (len - 1),
/// so t runs over [0, 1] across the segment.
struct Segment {
  std::size_t start = 0;  ///< first index (inclusive)
  std::size_t end = 0;    ///< one past the last index
  int degree = 0;
  std::vector<double> coefficients;  ///< c_0 .. c_degree

  double evaluate(std::size_t j) const;
};

struct PiecewisePolynomialSignal {
  std::size_t n = 0;
  /// Jump j sits between samples j and j+1; strictly increasing, interior.
  std::vector<std::size_t> jump_indices;
  std::vector<Segment> segments;
  std::vector<double> samples;

  /// Resamples every segment from its coefficients.
  std::vector<double> resample() const;
};

inline constexpr std::size_t kMinJumps = 2;
inline constexpr std::size_t kMaxJumps = 20;
inline constexpr std::size_t kJumpSpacing = 2;

/// Random test signal: 2..20 jumps (uniform count), jump positions uniform
/// among interior placements at least kJumpSpacing apart, per-segment degree
/// uniform on {0, 1, 2}, segment values inside [-1, 1]. Requires n >= 32;
/// below n = 42 the jump count is capped at the most that fit.
PiecewisePolynomialSignal random_piecewise_polynomial(std::size_t n, std::uint64_t seed);

/// Piecewise-constant signal with `jumps` jumps pairwise more than `spacing`
/// apart and at least `margin` samples from either end; level differences have
/// magnitude in [0.1, 2].
PiecewisePolynomialSignal random_piecewise_constant(std::size_t n, std::size_t jumps,
                                                    std::size_t spacing, std::size_t margin,
                                                    std::uint64_t seed);

struct Ellipse {
  double intensity;
  double semi_x;
  double semi_y;
  double center_x;
  double center_y;
  double angle_deg;

  bool contains(double x, double y) const;
};

/// Modified (high-contrast) Shepp-Logan table on [-1, 1]^2, y pointing up.
const std::vector<Ellipse>& shepp_logan_ellipses();

/// Point-sampled at pixel centers; row 0 is the top of the image.
Image shepp_logan(std::size_t n);

/// Smooth radial gradients inside randomly placed ellipses on a smoothly
/// shaded head; piecewise smooth rather than piecewise constant.
Image piecewise_smooth_phantom(std::size_t n, std::uint64_t seed);

struct NoiseSpec {
  /// Exactly one of sigma / target_snr must be set.
  std::optional<double> sigma;
  std::optional<double> target_snr;
  /// Interpret target_snr in decibels (20 log10 of the amplitude ratio).
  bool snr_in_db = false;
  std::uint64_t seed = 0;

  static NoiseSpec with_sigma(double sigma, std::uint64_t seed);
  static NoiseSpec with_snr(double snr, std::uint64_t seed, bool in_db = false);
};

struct NoisyData {
  std::vector<double> data;
  double realized_sigma = 0.0;
  /// std(b) / realized_sigma, linear or in dB to match the request.
  double realized_snr = 0.0;
};

/// Adds i.i.d. zero-mean Gaussian noise. In SNR mode the noise vector is
/// rescaled so its sample standard deviation equals std(b) / SNR exactly.
NoisyData add_noise(std::span<const double> b, const NoiseSpec& spec);

/// Population standard deviation.
double standard_deviation(std::span<const double> v);

/// ||A f - b||_2 / ||b||_2; throws DomainError when b = 0.
double relative_data_error(const LinearOperator& op, std::span<const double> b,
                           std::span<const double> f);
double relative_data_error(const NormalizedSystem& system, std::span<const double> f);

}  // namespace hotv
