#include "hotv/signals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "hotv/errors.hpp"
#include "hotv/random.hpp"
#include "hotv/vec.hpp"

namespace hotv {

double Segment::evaluate(std::size_t j) const {
  const std::size_t len = end - start;
  const double t = len > 1 ? static_cast<double>(j - start) / static_cast<double>(len - 1) : 0.0;
  // Horner in the local coordinate t in [0, 1].
  double value = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) value = value * t + *it;
  return value;
}

std::vector<double> PiecewisePolynomialSignal::resample() const {
  std::vector<double> out(n, 0.0);
  for (const auto& seg : segments) {
    for (std::size_t j = seg.start; j < seg.end; ++j) out[j] = seg.evaluate(j);
  }
  return out;
}

namespace {

/// `count` sorted positions in [lo, hi] with consecutive gaps >= spacing,
/// uniform over all admissible placements.
std::vector<std::size_t> spaced_positions(std::size_t lo, std::size_t hi, std::size_t count,
                                          std::size_t spacing, Engine& rng) {
  const std::size_t span = hi - lo + 1;
  const std::size_t squeeze = (count - 1) * (spacing - 1);
  if (hi < lo || span < squeeze + count) {
    throw DomainError("cannot place " + std::to_string(count) + " jumps with spacing " +
                      std::to_string(spacing) + " in " + std::to_string(span) + " positions");
  }
  std::vector<std::size_t> pool(span - squeeze);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `count` slots become a uniform subset.
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  for (std::size_t i = 0; i < count; ++i) pool[i] += lo + i * (spacing - 1);
  return pool;
}

std::vector<Segment> segments_from_jumps(std::size_t n, const std::vector<std::size_t>& jumps) {
  std::vector<Segment> segs;
  std::size_t start = 0;
  for (std::size_t j : jumps) {
    segs.push_back(Segment{start, j + 1, 0, {}});
    start = j + 1;
  }
  segs.push_back(Segment{start, n, 0, {}});
  return segs;
}

/// Polynomial through random values at t = 0, 1/2, 1 (or fewer nodes for
/// lower degree), shrunk if needed so every sample lies in [-1, 1].
std::vector<double> random_coefficients(int degree, const Segment& seg, Engine& rng) {
  std::uniform_real_distribution<double> level(-1.0, 1.0);
  std::vector<double> c;
  switch (degree) {
    case 0:
      c = {level(rng)};
      break;
    case 1: {
      const double v0 = level(rng);
      const double v1 = level(rng);
      c = {v0, v1 - v0};
      break;
    }
    default: {
      const double v0 = level(rng);
      const double vh = level(rng);
      const double v1 = level(rng);
      c = {v0, -3.0 * v0 + 4.0 * vh - v1, 2.0 * v0 - 4.0 * vh + 2.0 * v1};
      break;
    }
  }
  Segment probe = seg;
  probe.coefficients = c;
  double peak = 0.0;
  for (std::size_t j = seg.start; j < seg.end; ++j) {
    peak = std::max(peak, std::abs(probe.evaluate(j)));
  }
  if (peak > 1.0) {
    for (double& v : c) v /= peak;
  }
  return c;
}

}  // namespace

PiecewisePolynomialSignal random_piecewise_polynomial(std::size_t n, std::uint64_t seed) {
  if (n < 32) throw DomainError("random_piecewise_polynomial: n must be >= 32");
  auto rng = make_engine(seed);
  // Jumps at 1..n-3 leave at least two samples in the outer segments. Short
  // grids cannot hold 20 spaced jumps, so the count is capped by what fits.
  const std::size_t fit = (n - 4) / kJumpSpacing + 1;
  std::uniform_int_distribution<std::size_t> count_dist(kMinJumps, std::min(kMaxJumps, fit));
  const std::size_t jumps = count_dist(rng);

  PiecewisePolynomialSignal sig;
  sig.n = n;
  sig.jump_indices = spaced_positions(1, n - 3, jumps, kJumpSpacing, rng);
  sig.segments = segments_from_jumps(n, sig.jump_indices);
  std::uniform_int_distribution<int> degree_dist(0, 2);
  for (auto& seg : sig.segments) {
    seg.degree = degree_dist(rng);
    seg.coefficients = random_coefficients(seg.degree, seg, rng);
  }
  sig.samples = sig.resample();
  return sig;
}

PiecewisePolynomialSignal random_piecewise_constant(std::size_t n, std::size_t jumps,
                                                    std::size_t spacing, std::size_t margin,
                                                    std::uint64_t seed) {
  if (jumps == 0 || spacing == 0) throw DomainError("random_piecewise_constant: bad arguments");
  if (n < 2 * margin + 2) throw DomainError("random_piecewise_constant: n too small for margin");
  auto rng = make_engine(seed);

  PiecewisePolynomialSignal sig;
  sig.n = n;
  // A jump j touches Valid outputs j-k+1..j, so j in [margin, n-1-margin].
  sig.jump_indices = spaced_positions(margin, n - 1 - margin, jumps, spacing + 1, rng);
  sig.segments = segments_from_jumps(n, sig.jump_indices);

  std::uniform_real_distribution<double> level(-1.0, 1.0);
  std::uniform_real_distribution<double> step(0.1, 2.0);
  std::bernoulli_distribution up(0.5);
  double current = level(rng);
  for (auto& seg : sig.segments) {
    seg.degree = 0;
    seg.coefficients = {current};
    current += up(rng) ? step(rng) : -step(rng);
  }
  sig.samples = sig.resample();
  return sig;
}

bool Ellipse::contains(double x, double y) const {
  const double phi = angle_deg * std::numbers::pi / 180.0;
  const double dx = x - center_x;
  const double dy = y - center_y;
  const double xr = dx * std::cos(phi) + dy * std::sin(phi);
  const double yr = -dx * std::sin(phi) + dy * std::cos(phi);
  return (xr * xr) / (semi_x * semi_x) + (yr * yr) / (semi_y * semi_y) <= 1.0;
}

const std::vector<Ellipse>& shepp_logan_ellipses() {
  static const std::vector<Ellipse> table = {
      {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},         {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
      {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},     {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
      {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},        {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
      {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},      {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
      {0.1, 0.023, 0.023, 0.0, -0.606, 0.0},    {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
  };
  return table;
}

Image shepp_logan(std::size_t n) {
  if (n < 32) throw DomainError("shepp_logan: n must be >= 32");
  Image img(n, n, 0.0);
  const auto& table = shepp_logan_ellipses();
  const double h = 2.0 / static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double y = 1.0 - (static_cast<double>(r) + 0.5) * h;
    for (std::size_t c = 0; c < n; ++c) {
      const double x = -1.0 + (static_cast<double>(c) + 0.5) * h;
      double v = 0.0;
      for (const auto& e : table) {
        if (e.contains(x, y)) v += e.intensity;
      }
      img(r, c) = v;
    }
  }
  return img;
}

namespace {

/// Normalized radius of (x, y) in the ellipse frame; <= 1 inside.
double ellipse_radius(const Ellipse& e, double x, double y) {
  const double phi = e.angle_deg * std::numbers::pi / 180.0;
  const double dx = x - e.center_x;
  const double dy = y - e.center_y;
  const double xr = dx * std::cos(phi) + dy * std::sin(phi);
  const double yr = -dx * std::sin(phi) + dy * std::cos(phi);
  return std::sqrt((xr * xr) / (e.semi_x * e.semi_x) + (yr * yr) / (e.semi_y * e.semi_y));
}

struct SmoothRegion {
  Ellipse shape;
  double base;
  double bump;    // added at the center, fading quadratically to the rim
  double tilt_x;  // linear ramp across the region
  double tilt_y;
};

}  // namespace

Image piecewise_smooth_phantom(std::size_t n, std::uint64_t seed) {
  if (n < 32) throw DomainError("piecewise_smooth_phantom: n must be >= 32");
  auto rng = make_engine(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  std::vector<SmoothRegion> regions;
  regions.push_back({{0.0, 0.72, 0.9, 0.0, 0.0, 0.0}, 0.25, 0.25, 0.0, 0.1});
  const int count = 6 + static_cast<int>(u(rng) * 4.0);
  for (int i = 0; i < count; ++i) {
    SmoothRegion reg{};
    const double radius = 0.45 * std::sqrt(u(rng));
    const double theta = 2.0 * std::numbers::pi * u(rng);
    reg.shape.center_x = 0.8 * radius * std::cos(theta);
    reg.shape.center_y = radius * std::sin(theta);
    reg.shape.semi_x = 0.08 + 0.2 * u(rng);
    reg.shape.semi_y = 0.08 + 0.2 * u(rng);
    reg.shape.angle_deg = 180.0 * u(rng);
    reg.base = 0.1 + 0.6 * u(rng);
    reg.bump = 0.4 * (u(rng) - 0.5);
    reg.tilt_x = 0.6 * (u(rng) - 0.5);
    reg.tilt_y = 0.6 * (u(rng) - 0.5);
    regions.push_back(reg);
  }

  Image img(n, n, 0.0);
  const double h = 2.0 / static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double y = 1.0 - (static_cast<double>(r) + 0.5) * h;
    for (std::size_t c = 0; c < n; ++c) {
      const double x = -1.0 + (static_cast<double>(c) + 0.5) * h;
      double v = 0.0;
      // Later regions paint over earlier ones.
      for (const auto& reg : regions) {
        const double rho = ellipse_radius(reg.shape, x, y);
        if (rho <= 1.0) {
          v = reg.base + reg.bump * (1.0 - rho * rho) +
              reg.tilt_x * (x - reg.shape.center_x) + reg.tilt_y * (y - reg.shape.center_y);
        }
      }
      img(r, c) = v;
    }
  }
  return img;
}

NoiseSpec NoiseSpec::with_sigma(double sigma, std::uint64_t seed) {
  NoiseSpec s;
  s.sigma = sigma;
  s.seed = seed;
  return s;
}

NoiseSpec NoiseSpec::with_snr(double snr, std::uint64_t seed, bool in_db) {
  NoiseSpec s;
  s.target_snr = snr;
  s.snr_in_db = in_db;
  s.seed = seed;
  return s;
}

double standard_deviation(std::span<const double> v) {
  if (v.empty()) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

NoisyData add_noise(std::span<const double> b, const NoiseSpec& spec) {
  if (spec.sigma.has_value() == spec.target_snr.has_value()) {
    throw DomainError("add_noise: set exactly one of sigma / target_snr");
  }
  const double signal_std = standard_deviation(b);
  NoisyData out;
  out.data.assign(b.begin(), b.end());

  double sigma = 0.0;
  if (spec.sigma) {
    sigma = *spec.sigma;
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("add_noise: sigma must be >= 0");
  } else {
    const double snr = *spec.target_snr;
    const double linear = spec.snr_in_db ? std::pow(10.0, snr / 20.0) : snr;
    if (!(linear > 0.0) || !std::isfinite(linear)) throw DomainError("add_noise: SNR must be > 0");
    if (!(signal_std > 0.0)) throw DomainError("add_noise: SNR undefined for constant data");
    sigma = signal_std / linear;
  }

  if (sigma == 0.0) {
    out.realized_sigma = 0.0;
    out.realized_snr = std::numeric_limits<double>::infinity();
    return out;
  }

  auto rng = make_engine(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> noise(b.size());
  for (double& z : noise) z = normal(rng);
  double factor = sigma;
  if (spec.target_snr) {
    const double z_std = standard_deviation(noise);
    if (z_std > 0.0) factor = sigma / z_std;
  }
  for (std::size_t i = 0; i < noise.size(); ++i) {
    noise[i] *= factor;
    out.data[i] += noise[i];
  }
  out.realized_sigma = standard_deviation(noise);
  const double ratio = signal_std / out.realized_sigma;
  out.realized_snr = spec.snr_in_db ? 20.0 * std::log10(ratio) : ratio;
  return out;
}

double relative_data_error(const LinearOperator& op, std::span<const double> b,
                           std::span<const double> f) {
  if (f.size() != op.cols() || b.size() != op.rows()) {
    throw ShapeError("relative_data_error: inconsistent shapes");
  }
  const double b_norm = vec::norm2(b);
  if (!(b_norm > 0.0)) throw DomainError("relative_data_error: ||b|| = 0");
  auto r = op.apply(f);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return vec::norm2(r) / b_norm;
}

double relative_data_error(const NormalizedSystem& system, std::span<const double> f) {
  return relative_data_error(system.op, system.data, f);
}

}  // namespace hotv
