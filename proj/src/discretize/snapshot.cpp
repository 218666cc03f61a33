#include <bit>
#include <cstring>
#include <fstream>

#include "popctl/discretize.hpp"
#include "popctl/error.hpp"
#include "util/io.hpp"

namespace popctl {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary snapshots assume a little-endian host");

void write_rows(std::FILE* fp, const Field2& f, const Grid& g, double t) {
  for (int j = 0; j <= f.Na; ++j)
    for (int i = 0; i <= f.Nx; ++i)
      std::fprintf(fp, "%s,%s,%s,%s\n", io::num(t).c_str(), io::num(g.a(j)).c_str(),
                   io::num(g.x(i)).c_str(), io::num(f(j, i)).c_str());
}

}  // namespace

void write_csv(const std::filesystem::path& path, const Field3& f, const Grid& g) {
  std::FILE* fp = io::open_out(path);
  std::fputs("t,a,x,value\n", fp);
  for (int n = 0; n <= f.Nt; ++n) write_rows(fp, f.at(n), g, g.t(n));
  std::fclose(fp);
}

void write_csv(const std::filesystem::path& path, const Field2& f, const Grid& g, double t) {
  std::FILE* fp = io::open_out(path);
  std::fputs("t,a,x,value\n", fp);
  write_rows(fp, f, g, t);
  std::fclose(fp);
}

void write_binary(const std::filesystem::path& path, const Field3& f) {
  std::FILE* fp = io::open_out(path, "wb");
  const std::int32_t header[4] = {f.Nt, f.Na, f.Nx, kSnapshotVersion};
  std::fwrite(header, sizeof(std::int32_t), 4, fp);
  std::fwrite(f.values.data(), sizeof(double), f.values.size(), fp);
  std::fclose(fp);
}

Field3 read_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::int32_t header[4];
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (!in || header[3] != kSnapshotVersion || header[0] < 0 || header[1] < 0 || header[2] < 0)
    throw ValidationError("snapshot " + path.string() + ": bad header");
  Field3 f(header[0], header[1], header[2]);
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!in) throw ValidationError("snapshot " + path.string() + ": truncated data");
  return f;
}

}  // namespace popctl
