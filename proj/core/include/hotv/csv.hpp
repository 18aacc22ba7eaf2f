#pragma once

// Plain-text helpers shared by the CSV readers and writers.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hotv/geometry.hpp"

namespace hotv::csv {

/// Shortest decimal string that parses back to exactly `value`.
std::string format(double value);

/// Strict parse of a full field; throws std::invalid_argument on junk.
double parse_double(std::string_view field);
long long parse_int(std::string_view field);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

/// One value per line.
void write_vector(std::ostream& out, std::span<const double> values);
std::vector<double> read_vector(std::istream& in);

/// Header "rows,cols" then one comma-separated line per image row.
void write_image(std::ostream& out, const Image& image);
Image read_image(std::istream& in);

void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace hotv::csv
