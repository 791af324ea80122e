#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>

#include "sswalk/error.hpp"

namespace sswalk {

/// %.17g in the C locale: '.' decimal, 17 significant digits.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Accumulates LF-terminated comma-separated rows.
class CsvBuilder {
public:
  explicit CsvBuilder(std::string_view header) { text_.append(header).push_back('\n'); }

  CsvBuilder &field(double v) { return raw(format_double(v)); }
  CsvBuilder &field(long long v) { return raw(std::to_string(v)); }
  CsvBuilder &field(std::string_view s) { return raw(s); }
  void end_row() {
    text_.push_back('\n');
    fresh_ = true;
  }

  const std::string &text() const { return text_; }

private:
  CsvBuilder &raw(std::string_view s) {
    if (!fresh_) text_.push_back(',');
    text_.append(s);
    fresh_ = false;
    return *this;
  }

  std::string text_;
  bool fresh_ = true;
};

/// Writes through a sibling temporary and renames it into place.
inline void write_file_atomic(const std::filesystem::path &path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw WalkError(ErrorKind::ConfigError, "cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw WalkError(ErrorKind::ConfigError, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw WalkError(ErrorKind::ConfigError, "cannot move output into " + path.string());
  }
}

} // namespace sswalk
