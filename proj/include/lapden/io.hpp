#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

namespace lapden {

/// 17 significant digits, '.' decimal separator, locale-independent.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Write via a temp file in the same directory, then rename.
inline void atomic_write(const std::filesystem::path& path,
                         const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << content;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace lapden
