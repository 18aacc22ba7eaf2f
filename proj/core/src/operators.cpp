#include "hotv/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hotv/errors.hpp"

namespace hotv {

namespace {

constexpr int kMaxBinomialOrder = 60;

void check_line(std::size_t len, int order) {
  if (len <= static_cast<std::size_t>(order)) {
    throw DomainError("PATransform: grid line of length " + std::to_string(len) +
                      " cannot hold an order-" + std::to_string(order) + " stencil");
  }
}

}  // namespace

std::uint64_t binomial(int k, int m) {
  if (k < 0 || m < 0 || m > k || k > kMaxBinomialOrder) {
    throw DomainError("binomial: require 0 <= m <= k <= 60, got (" + std::to_string(k) + ", " +
                      std::to_string(m) + ")");
  }
  m = std::min(m, k - m);
  // result * (k - i) stays below 2^64 for k <= 60; the division is exact.
  std::uint64_t result = 1;
  for (int i = 0; i < m; ++i) {
    result = result * static_cast<std::uint64_t>(k - i) / static_cast<std::uint64_t>(i + 1);
  }
  return result;
}

bool verify_binomial_identity(int k, int m) {
  if (k < 1 || m < 0 || m >= k || k > kMaxBinomialOrder) {
    throw DomainError("verify_binomial_identity: require 0 <= m < k <= 60, got (" +
                      std::to_string(k) + ", " + std::to_string(m) + ")");
  }
  const auto lhs = static_cast<std::int64_t>(binomial(k - 1, m));
  std::int64_t rhs = 0;
  for (int j = 0; j <= m; ++j) {
    const auto term = static_cast<std::int64_t>(binomial(k, j));
    rhs += ((j + m) % 2 == 0) ? term : -term;
  }
  return lhs == rhs;
}

PATransform::PATransform(int order, Geometry geometry, Boundary boundary)
    : order_(order), geometry_(geometry), boundary_(boundary) {
  if (order < 0 || order > kMaxOrder) {
    throw DomainError("PATransform: order must lie in [0, " + std::to_string(kMaxOrder) +
                      "], got " + std::to_string(order));
  }
  stencil_.resize(static_cast<std::size_t>(order) + 1);
  for (int m = 0; m <= order; ++m) {
    const auto c = static_cast<double>(binomial(order, m));
    stencil_[static_cast<std::size_t>(m)] = ((order + m) % 2 == 0) ? c : -c;
  }

  if (const auto* g1 = std::get_if<Grid1D>(&geometry_)) {
    check_line(g1->n, order);
    input_size_ = g1->n;
    output_size_ = line_output(g1->n);
  } else {
    const auto& g2 = std::get<Grid2D>(geometry_);
    check_line(g2.rows, order);
    check_line(g2.cols, order);
    input_size_ = g2.rows * g2.cols;
    output_size_ = g2.rows * line_output(g2.cols) + line_output(g2.rows) * g2.cols;
  }
}

std::size_t PATransform::line_output(std::size_t len) const noexcept {
  return boundary_ == Boundary::Periodic ? len : len - static_cast<std::size_t>(order_);
}

void PATransform::forward_line(const double* in, std::size_t len, std::size_t stride, double* out,
                               std::size_t out_stride) const {
  const std::size_t k = static_cast<std::size_t>(order_);
  const std::size_t interior = len - k;
  for (std::size_t j = 0; j < interior; ++j) {
    double s = 0.0;
    for (std::size_t m = 0; m <= k; ++m) s += stencil_[m] * in[(j + m) * stride];
    out[j * out_stride] = s;
  }
  if (boundary_ == Boundary::Periodic) {
    for (std::size_t j = interior; j < len; ++j) {
      double s = 0.0;
      for (std::size_t m = 0; m <= k; ++m) {
        std::size_t idx = j + m;
        if (idx >= len) idx -= len;
        s += stencil_[m] * in[idx * stride];
      }
      out[j * out_stride] = s;
    }
  }
}

// Scatter form of the transpose: every forward output j contributed
// c_m * f_{j+m}, so it sends c_m * g_j back to position j+m.
void PATransform::adjoint_line(const double* in, std::size_t len, std::size_t in_stride,
                               double* out, std::size_t stride) const {
  const std::size_t k = static_cast<std::size_t>(order_);
  const std::size_t outputs = line_output(len);
  for (std::size_t j = 0; j < outputs; ++j) {
    const double g = in[j * in_stride];
    for (std::size_t m = 0; m <= k; ++m) {
      std::size_t idx = j + m;
      if (idx >= len) idx -= len;
      out[idx * stride] += stencil_[m] * g;
    }
  }
}

void PATransform::apply(std::span<const double> f, std::span<double> out) const {
  if (f.size() != input_size_ || out.size() != output_size_) {
    throw ShapeError("PATransform::apply: expected input " + std::to_string(input_size_) +
                     " / output " + std::to_string(output_size_) + ", got " +
                     std::to_string(f.size()) + " / " + std::to_string(out.size()));
  }
  if (const auto* g1 = std::get_if<Grid1D>(&geometry_)) {
    forward_line(f.data(), g1->n, 1, out.data(), 1);
    return;
  }
  const auto& g2 = std::get<Grid2D>(geometry_);
  const std::size_t ox = line_output(g2.cols);
  for (std::size_t r = 0; r < g2.rows; ++r) {
    forward_line(f.data() + r * g2.cols, g2.cols, 1, out.data() + r * ox, 1);
  }
  double* yblock = out.data() + g2.rows * ox;
  for (std::size_t c = 0; c < g2.cols; ++c) {
    forward_line(f.data() + c, g2.rows, g2.cols, yblock + c, g2.cols);
  }
}

void PATransform::apply_adjoint(std::span<const double> g, std::span<double> out) const {
  if (g.size() != output_size_ || out.size() != input_size_) {
    throw ShapeError("PATransform::apply_adjoint: expected input " + std::to_string(output_size_) +
                     " / output " + std::to_string(input_size_) + ", got " +
                     std::to_string(g.size()) + " / " + std::to_string(out.size()));
  }
  std::fill(out.begin(), out.end(), 0.0);
  if (const auto* g1 = std::get_if<Grid1D>(&geometry_)) {
    adjoint_line(g.data(), g1->n, 1, out.data(), 1);
    return;
  }
  const auto& g2 = std::get<Grid2D>(geometry_);
  const std::size_t ox = line_output(g2.cols);
  for (std::size_t r = 0; r < g2.rows; ++r) {
    adjoint_line(g.data() + r * ox, g2.cols, 1, out.data() + r * g2.cols, 1);
  }
  const double* yblock = g.data() + g2.rows * ox;
  for (std::size_t c = 0; c < g2.cols; ++c) {
    adjoint_line(yblock + c, g2.rows, g2.cols, out.data() + c, g2.cols);
  }
}

std::vector<double> PATransform::apply(std::span<const double> f) const {
  std::vector<double> out(output_size_);
  apply(f, out);
  return out;
}

std::vector<double> PATransform::apply_adjoint(std::span<const double> g) const {
  std::vector<double> out(input_size_);
  apply_adjoint(g, out);
  return out;
}

std::vector<double> pa_forward(std::span<const double> f, const PATransform& t) {
  return t.apply(f);
}

std::vector<double> pa_adjoint(std::span<const double> g, const PATransform& t) {
  return t.apply_adjoint(g);
}

double pa_seminorm(std::span<const double> f, const PATransform& t) {
  const auto tf = t.apply(f);
  double s = 0.0;
  for (double v : tf) s += std::abs(v);
  return s;
}

MatrixL1Norm pa_matrix_l1_norm(const PATransform& t) {
  const std::size_t n = t.input_size();
  std::vector<double> unit(n, 0.0);
  std::vector<double> column(t.output_size());
  double best = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    unit[j] = 1.0;
    t.apply(unit, column);
    unit[j] = 0.0;
    double sum = 0.0;
    for (double v : column) sum += std::abs(v);
    best = std::max(best, sum);
  }
  return MatrixL1Norm{static_cast<std::int64_t>(std::llround(best)),
                      t.boundary() == Boundary::Periodic && !is_2d(t.geometry())};
}

}  // namespace hotv
