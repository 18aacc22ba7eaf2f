#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace hotv {

struct Triplet {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  double value = 0.0;
  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Immutable sparse matrix in coordinate form, applied in row-major order.
class LinearOperator {
 public:
  LinearOperator() = default;

  /// Entries are sorted row-major; duplicates are kept and act additively.
  /// Throws ShapeError for out-of-range indices.
  LinearOperator(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);

  static LinearOperator identity(std::size_t n, double scale = 1.0);
  static LinearOperator diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  std::span<const Triplet> entries() const noexcept { return entries_; }

  /// y = A x
  void apply(std::span<const double> x, std::span<double> y) const;
  /// x = A^T y
  void apply_adjoint(std::span<const double> y, std::span<double> x) const;

  std::vector<double> apply(std::span<const double> x) const;
  std::vector<double> apply_adjoint(std::span<const double> y) const;

  LinearOperator scaled(double factor) const;

  /// True when no stored entry is nonzero.
  bool is_zero() const noexcept;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Triplet> entries_;
};

/// m x n matrix whose entries are independently nonzero with probability
/// `density`; nonzero values are Uniform[0, 1]. Fully determined by `seed`.
LinearOperator random_sampling_operator(std::size_t m, std::size_t n, double density,
                                        std::uint64_t seed);

struct SpectralNormEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  bool zero_operator = false;
  /// Estimate after each power iteration.
  std::vector<double> history;
};

inline constexpr double kDefaultSpectralTol = 1e-6;
inline constexpr int kDefaultSpectralMaxIter = 500;

/// Power iteration on A^T A; returns sqrt of the Rayleigh quotient once two
/// successive estimates agree to `tol` relative.
SpectralNormEstimate spectral_norm(const LinearOperator& op, double tol = kDefaultSpectralTol,
                                   int max_iter = kDefaultSpectralMaxIter,
                                   std::uint64_t seed = 0);

/// A/s and b/s with s = ||A||_2, so the returned operator has unit norm.
struct NormalizedSystem {
  LinearOperator op;
  std::vector<double> data;
  double scale = 1.0;
};

/// Throws DomainError for a zero operator and ShapeError if b has the wrong length.
NormalizedSystem normalize_system(const LinearOperator& op, std::span<const double> b,
                                  double tol = kDefaultSpectralTol);

/// CSV triplet format: header line "m,n,nnz" followed by one "row,col,value"
/// line per entry. Values use the shortest round-trip decimal form.
void write_operator_csv(std::ostream& out, const LinearOperator& op);
LinearOperator read_operator_csv(std::istream& in);

}  // namespace hotv
