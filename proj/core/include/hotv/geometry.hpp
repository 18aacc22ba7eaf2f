#pragma once

#include <cstddef>
#include <type_traits>
#include <variant>
#include <vector>

namespace hotv {

struct Grid1D {
  std::size_t n = 0;
  friend bool operator==(const Grid1D&, const Grid1D&) = default;
};

/// Row-major grid; x runs along a row (column index), y down the rows.
struct Grid2D {
  std::size_t rows = 0;
  std::size_t cols = 0;
  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

using Geometry = std::variant<Grid1D, Grid2D>;

inline std::size_t grid_size(const Geometry& g) {
  return std::visit(
      [](const auto& grid) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(grid)>, Grid1D>) {
          return grid.n;
        } else {
          return grid.rows * grid.cols;
        }
      },
      g);
}

inline bool is_2d(const Geometry& g) { return std::holds_alternative<Grid2D>(g); }

/// Real-valued image stored row-major.
struct Image {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> pixels;

  Image() = default;
  Image(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), pixels(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return pixels[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return pixels[r * cols + c]; }

  Geometry geometry() const { return Grid2D{rows, cols}; }
};

}  // namespace hotv
