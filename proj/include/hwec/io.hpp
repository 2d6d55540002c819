#pragma once

// Small helpers shared by the CSV and JSON writers.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hwec::io {

/// Shortest decimal text that reads back to the same double.
std::string fmt(double v);

/// 64-bit FNV-1a, hex encoded. Used to fingerprint config content.
std::string fnv1a_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames it into place.
void write_file(const std::filesystem::path& path, std::string_view content);

struct Series {
  std::string label;
  std::vector<double> y;
};

/// Line chart of several series over a shared x axis, as standalone SVG.
std::string svg_plot(const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<double>& x,
                     const std::vector<Series>& series);

}  // namespace hwec::io
