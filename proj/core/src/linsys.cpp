#include "hotv/linsys.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "hotv/csv.hpp"
#include "hotv/errors.hpp"
#include "hotv/random.hpp"
#include "hotv/vec.hpp"

namespace hotv {

LinearOperator::LinearOperator(std::size_t rows, std::size_t cols, std::vector<Triplet> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  for (const auto& t : entries_) {
    if (t.row >= rows_ || t.col >= cols_) {
      throw ShapeError("LinearOperator: entry (" + std::to_string(t.row) + ", " +
                       std::to_string(t.col) + ") outside " + std::to_string(rows_) + "x" +
                       std::to_string(cols_));
    }
  }
  std::stable_sort(entries_.begin(), entries_.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
}

LinearOperator LinearOperator::identity(std::size_t n, double scale) {
  std::vector<Triplet> entries(n);
  for (std::size_t i = 0; i < n; ++i) {
    entries[i] = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i), scale};
  }
  return LinearOperator(n, n, std::move(entries));
}

LinearOperator LinearOperator::diagonal(std::span<const double> d) {
  std::vector<Triplet> entries(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    entries[i] = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i), d[i]};
  }
  return LinearOperator(d.size(), d.size(), std::move(entries));
}

void LinearOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) {
    throw ShapeError("LinearOperator::apply: dimension mismatch");
  }
  std::fill(y.begin(), y.end(), 0.0);
  for (const auto& t : entries_) y[t.row] += t.value * x[t.col];
}

void LinearOperator::apply_adjoint(std::span<const double> y, std::span<double> x) const {
  if (y.size() != rows_ || x.size() != cols_) {
    throw ShapeError("LinearOperator::apply_adjoint: dimension mismatch");
  }
  std::fill(x.begin(), x.end(), 0.0);
  for (const auto& t : entries_) x[t.col] += t.value * y[t.row];
}

std::vector<double> LinearOperator::apply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  apply(x, y);
  return y;
}

std::vector<double> LinearOperator::apply_adjoint(std::span<const double> y) const {
  std::vector<double> x(cols_);
  apply_adjoint(y, x);
  return x;
}

LinearOperator LinearOperator::scaled(double factor) const {
  LinearOperator out = *this;
  for (auto& t : out.entries_) t.value *= factor;
  return out;
}

bool LinearOperator::is_zero() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Triplet& t) { return t.value == 0.0; });
}

LinearOperator random_sampling_operator(std::size_t m, std::size_t n, double density,
                                        std::uint64_t seed) {
  if (!(density > 0.0 && density <= 1.0)) {
    throw DomainError("random_sampling_operator: density must lie in (0, 1]");
  }
  if (m == 0 || n == 0) throw DomainError("random_sampling_operator: m and n must be >= 1");

  auto rng = make_engine(seed);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(static_cast<double>(m * n) * density * 1.05) + 16);

  // Gaps between successive Bernoulli successes in row-major order are
  // geometric, which is equivalent to one independent draw per entry.
  const std::size_t total = m * n;
  if (density >= 1.0) {
    for (std::size_t idx = 0; idx < total; ++idx) {
      entries.push_back({static_cast<std::uint32_t>(idx / n), static_cast<std::uint32_t>(idx % n),
                         value(rng)});
    }
  } else {
    std::geometric_distribution<std::size_t> gap(density);
    std::size_t idx = gap(rng);
    while (idx < total) {
      entries.push_back({static_cast<std::uint32_t>(idx / n), static_cast<std::uint32_t>(idx % n),
                         value(rng)});
      idx += 1 + gap(rng);
    }
  }
  return LinearOperator(m, n, std::move(entries));
}

namespace {

void random_unit(std::span<double> x, Engine& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double& v : x) v = u(rng);
  const double nrm = vec::norm2(x);
  if (nrm > 0.0) vec::scale(1.0 / nrm, x);
}

}  // namespace

SpectralNormEstimate spectral_norm(const LinearOperator& op, double tol, int max_iter,
                                   std::uint64_t seed) {
  if (!(tol > 0.0)) throw DomainError("spectral_norm: tol must be positive");
  if (max_iter < 1) throw DomainError("spectral_norm: max_iter must be >= 1");

  SpectralNormEstimate est;
  if (op.is_zero()) {
    est.zero_operator = true;
    return est;
  }

  auto rng = make_engine(seed);
  std::vector<double> x(op.cols());
  std::vector<double> y(op.rows());
  std::vector<double> z(op.cols());
  random_unit(x, rng);

  bool redrawn = false;
  double previous = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    op.apply(x, y);
    const double rayleigh = vec::dot(y, y);
    if (it == 1 && rayleigh < 1e-14 && !redrawn) {
      redrawn = true;
      random_unit(x, rng);
      --it;
      continue;
    }
    const double value = std::sqrt(rayleigh);
    est.history.push_back(value);
    est.value = value;
    est.iterations = it;
    if (it > 1 && std::abs(value - previous) <= tol * value) {
      est.converged = true;
      break;
    }
    previous = value;

    op.apply_adjoint(y, z);
    const double nz = vec::norm2(z);
    if (nz == 0.0) {
      // x lies in the null space even after a redraw.
      est.zero_operator = rayleigh == 0.0;
      break;
    }
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = z[i] / nz;
  }
  return est;
}

NormalizedSystem normalize_system(const LinearOperator& op, std::span<const double> b,
                                  double tol) {
  if (b.size() != op.rows()) throw ShapeError("normalize_system: data length != operator rows");
  const auto est = spectral_norm(op, tol);
  if (est.zero_operator || !(est.value > 0.0)) {
    throw DomainError("normalize_system: cannot normalize a zero operator");
  }
  NormalizedSystem sys;
  sys.scale = est.value;
  sys.op = op.scaled(1.0 / est.value);
  sys.data.assign(b.begin(), b.end());
  for (double& v : sys.data) v /= est.value;
  return sys;
}

void write_operator_csv(std::ostream& out, const LinearOperator& op) {
  out << op.rows() << ',' << op.cols() << ',' << op.nnz() << '\n';
  for (const auto& t : op.entries()) {
    out << t.row << ',' << t.col << ',' << csv::format(t.value) << '\n';
  }
}

LinearOperator read_operator_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("operator csv: missing header");
  const auto header = csv::split(line);
  if (header.size() != 3) throw std::invalid_argument("operator csv: header must be m,n,nnz");
  const auto m = static_cast<std::size_t>(csv::parse_int(header[0]));
  const auto n = static_cast<std::size_t>(csv::parse_int(header[1]));
  const auto nnz = static_cast<std::size_t>(csv::parse_int(header[2]));
  std::vector<Triplet> entries;
  entries.reserve(nnz);
  while (entries.size() < nnz && std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = csv::split(line);
    if (f.size() != 3) throw std::invalid_argument("operator csv: expected row,col,value");
    entries.push_back({static_cast<std::uint32_t>(csv::parse_int(f[0])),
                       static_cast<std::uint32_t>(csv::parse_int(f[1])), csv::parse_double(f[2])});
  }
  if (entries.size() != nnz) throw std::invalid_argument("operator csv: fewer entries than nnz");
  return LinearOperator(m, n, std::move(entries));
}

}  // namespace hotv
