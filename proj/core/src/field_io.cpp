#include "nnls/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "nnls/error.hpp"

namespace nnls {

namespace {

std::uint64_t to_little(std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::little) return x;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((x >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

}  // namespace

void write_field(const std::filesystem::path& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  const GridSpec& g = f.grid();
  std::ostringstream header;
  header << std::setprecision(17) << "NNLS1 " << g.dim << ' ' << g.n << ' ' << g.half_extent << '\n';
  os << header.str();
  for (double v : f.values()) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(v));
    char buf[8];
    std::memcpy(buf, &bits, 8);
    os.write(buf, 8);
  }
  if (!os) throw Error("write failed for " + path.string());
}

Field read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  std::string line;
  std::getline(is, line);
  std::istringstream hs(line);
  std::string magic;
  int d = 0, n = 0;
  double L = 0.0;
  hs >> magic >> d >> n >> L;
  if (magic != "NNLS1" || !hs) throw Error(path.string() + " is not an NNLS1 field dump");
  const GridSpec g = build_grid(d, L, n);
  std::vector<double> values(g.size());
  for (double& v : values) {
    char buf[8];
    is.read(buf, 8);
    if (!is) throw Error(path.string() + " is truncated");
    std::uint64_t bits;
    std::memcpy(&bits, buf, 8);
    v = std::bit_cast<double>(to_little(bits));
  }
  return Field(g, std::move(values));
}

void write_field_csv(const std::filesystem::path& path, const Field& f) {
  const GridSpec& g = f.grid();
  if (g.dim != 1) throw Error("CSV field output is only defined for d = 1");
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << std::setprecision(17) << "x,value\n";
  for (std::size_t j = 0; j < g.size(); ++j) os << g.coord(static_cast<int>(j)) << ',' << f[j] << '\n';
}

}  // namespace nnls
