#include "hotv/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace hotv::csv {

std::string format(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view field) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\r' || field.back() == '\t')) {
    field.remove_suffix(1);
  }
  double value = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw std::invalid_argument("csv: not a number: '" + std::string(field) + "'");
  }
  return value;
}

long long parse_int(std::string_view field) {
  while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.remove_suffix(1);
  long long value = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw std::invalid_argument("csv: not an integer: '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

void write_vector(std::ostream& out, std::span<const double> values) {
  for (double v : values) out << format(v) << '\n';
}

std::vector<double> read_vector(std::istream& in) {
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    values.push_back(parse_double(line));
  }
  return values;
}

void write_image(std::ostream& out, const Image& image) {
  out << image.rows << ',' << image.cols << '\n';
  for (std::size_t r = 0; r < image.rows; ++r) {
    for (std::size_t c = 0; c < image.cols; ++c) {
      if (c != 0) out << ',';
      out << format(image(r, c));
    }
    out << '\n';
  }
}

Image read_image(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("csv: missing image header");
  const auto header = split(line);
  if (header.size() != 2) throw std::invalid_argument("csv: image header must be rows,cols");
  const auto rows = static_cast<std::size_t>(parse_int(header[0]));
  const auto cols = static_cast<std::size_t>(parse_int(header[1]));
  Image image(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) throw std::invalid_argument("csv: truncated image");
    const auto fields = split(line);
    if (fields.size() != cols) throw std::invalid_argument("csv: ragged image row");
    for (std::size_t c = 0; c < cols; ++c) image(r, c) = parse_double(fields[c]);
  }
  return image;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << contents;
}

}  // namespace hotv::csv
