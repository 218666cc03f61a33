#include "util/io.hpp"

#include <cmath>

#include "popctl/error.hpp"

namespace popctl::io {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::FILE* open_out(const std::filesystem::path& path, const char* mode) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::FILE* fp = std::fopen(path.string().c_str(), mode);
  if (!fp) throw Error("cannot open " + path.string() + " for writing");
  return fp;
}

}  // namespace popctl::io
