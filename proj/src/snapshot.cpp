#include "wkb/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace wkb {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'W', 'K', 'B', 'F'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void write_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
double read_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path,
                    const SpectralField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("snapshot: cannot open " + path.string());
  os.write(kMagic, 4);
  write_u32(os, kVersion);
  write_u32(os, static_cast<std::uint32_t>(f.grid.dim()));
  for (int n : f.grid.n()) write_u32(os, static_cast<std::uint32_t>(n));
  for (double l : f.grid.box()) write_f64(os, l);
  os.write(reinterpret_cast<const char*>(f.coeff.data()),
           static_cast<std::streamsize>(f.coeff.size() * sizeof(std::complex<double>)));
  if (!os) throw std::runtime_error("snapshot: write failed: " + path.string());
}

SpectralField read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("snapshot: cannot open " + path.string());
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("snapshot: bad magic in " + path.string());
  const std::uint32_t version = read_u32(is);
  if (version != kVersion)
    throw std::runtime_error("snapshot: unsupported version");
  const std::uint32_t d = read_u32(is);
  if (d == 0 || d > 8) throw std::runtime_error("snapshot: bad dimension");
  std::vector<int> n(d);
  for (auto& v : n) v = static_cast<int>(read_u32(is));
  std::vector<double> box(d);
  for (auto& v : box) v = read_f64(is);
  if (!is) throw std::runtime_error("snapshot: truncated header");
  Grid grid(std::move(n), std::move(box));
  SpectralField f(grid);
  is.read(reinterpret_cast<char*>(f.coeff.data()),
          static_cast<std::streamsize>(f.coeff.size() * sizeof(std::complex<double>)));
  if (!is) throw std::runtime_error("snapshot: truncated payload");
  return f;
}

}  // namespace wkb
