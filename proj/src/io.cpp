#include "rpd/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rpd/errors.hpp"

namespace rpd {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  // snprintf honors the C locale set at startup; normalize just in case a
  // host library flipped the decimal separator.
  for (char* p = buf; *p != '\0'; ++p) {
    if (*p == ',') *p = '.';
  }
  return buf;
}

CsvBuilder::CsvBuilder(std::vector<std::string> header)
    : width_(header.size()) {
  if (header.empty()) throw Error("CsvBuilder: empty header");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) body_ += ',';
    body_ += header[i];
  }
  body_ += '\n';
}

void CsvBuilder::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) {
    throw Error("CsvBuilder: row has " + std::to_string(cells.size()) +
                " cells, header has " + std::to_string(width_));
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) body_ += ',';
    body_ += cells[i];
  }
  body_ += '\n';
}

std::string CsvBuilder::str() const { return body_; }

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) {
      throw Error("cannot create directory " +
                  target.parent_path().string() + ": " + ec.message());
    }
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out.good()) {
      std::error_code rm;
      fs::remove(tmp, rm);
      throw Error("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code rm;
    fs::remove(tmp, rm);
    throw Error("cannot rename " + tmp.string() + " to " + path + ": " +
                ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rpd
