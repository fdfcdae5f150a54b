// io.hpp: deterministic text output helpers — 17-significant-digit floats,
// CSV assembly, and atomic file writes (temp + rename) so readers never see
// a half-written result.
#pragma once

#include <string>
#include <vector>

namespace rpd {

/// Shortest round-trippable decimal: printf "%.17g", '.' decimal separator
/// regardless of locale.
std::string format_double(double x);

/// CSV with a fixed header; rows are size-checked against it.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  /// Header line + rows, '\n' separated, trailing newline.
  std::string str() const;
  std::size_t columns() const { return width_; }

 private:
  std::size_t width_;
  std::string body_;
};

/// Write content to `path` atomically: write a sibling temp file, flush,
/// then rename over the target.  Parent directories are created.
/// @throws Error on any filesystem failure
void write_file_atomic(const std::string& path, const std::string& content);

/// Read a whole file into a string.
/// @throws Error when the file cannot be opened
std::string read_file(const std::string& path);

}  // namespace rpd
