#pragma once

// Order-k polynomial annihilation (finite difference) transforms.
//
//   (T_k f)_j = sum_{m=0}^{k} (-1)^(k+m) C(k,m) f_{j+m}
//
// In 1D the Periodic mode wraps j+m modulo n (n outputs, circulant matrix);
// Valid mode keeps only the n-k outputs whose stencil lies inside the grid.
// In 2D the output is the stack [T_k^x f ; T_k^y f], x-differences first,
// each block stored row-major.

#include <cstdint>
#include <span>
#include <vector>

#include "hotv/geometry.hpp"

namespace hotv {

enum class Boundary { Periodic, Valid };

class PATransform {
 public:
  static constexpr int kMaxOrder = 8;

  /// Order 0 is the identity stencil. Throws DomainError for orders outside
  /// [0, kMaxOrder] and for Valid grids too short to hold one stencil.
  PATransform(int order, Geometry geometry, Boundary boundary = Boundary::Periodic);

  int order() const noexcept { return order_; }
  Boundary boundary() const noexcept { return boundary_; }
  const Geometry& geometry() const noexcept { return geometry_; }

  std::size_t input_size() const noexcept { return input_size_; }
  std::size_t output_size() const noexcept { return output_size_; }

  /// Coefficients c_m = (-1)^(k+m) C(k,m), m = 0..k.
  std::span<const double> stencil() const noexcept { return stencil_; }

  void apply(std::span<const double> f, std::span<double> out) const;
  void apply_adjoint(std::span<const double> g, std::span<double> out) const;

  std::vector<double> apply(std::span<const double> f) const;
  std::vector<double> apply_adjoint(std::span<const double> g) const;

 private:
  std::size_t line_output(std::size_t len) const noexcept;
  void forward_line(const double* in, std::size_t len, std::size_t stride, double* out,
                    std::size_t out_stride) const;
  void adjoint_line(const double* in, std::size_t len, std::size_t in_stride, double* out,
                    std::size_t stride) const;

  int order_;
  Geometry geometry_;
  Boundary boundary_;
  std::size_t input_size_ = 0;
  std::size_t output_size_ = 0;
  std::vector<double> stencil_;
};

/// C(k, m) in exact integer arithmetic, 0 <= m <= k <= 60.
std::uint64_t binomial(int k, int m);

/// Checks C(k-1, m) == sum_{j=0}^{m} C(k, j) (-1)^(j+m) exactly; requires m < k.
bool verify_binomial_identity(int k, int m);

std::vector<double> pa_forward(std::span<const double> f, const PATransform& t);
std::vector<double> pa_adjoint(std::span<const double> g, const PATransform& t);

/// ||T_k f||_1; anisotropic (both blocks summed) in 2D.
double pa_seminorm(std::span<const double> f, const PATransform& t);

struct MatrixL1Norm {
  std::int64_t value = 0;
  /// True when the assembled matrix is circulant (1D Periodic); only then is
  /// the value guaranteed to be 2^k.
  bool circulant = false;
};

/// Maximum absolute column sum of the explicitly assembled matrix of t.
MatrixL1Norm pa_matrix_l1_norm(const PATransform& t);

}  // namespace hotv
