#include "uq/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace uq {

namespace {

static_assert(std::endian::native == std::endian::little,
              "GRD1 I/O assumes a little-endian host");
static_assert(sizeof(double) == 8 && std::numeric_limits<double>::is_iec559);

constexpr char kRealMagic[8] = {'G', 'R', 'D', 'I', 'M', 'G', '0', '1'};
constexpr char kComplexMagic[8] = {'G', 'R', 'D', 'C', 'P', 'X', '0', '1'};

void write_u64(std::ostream& os, std::uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), 8);
}

std::uint64_t read_u64(std::istream& is) {
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open for reading: " + path);
  return is;
}

void check_header(std::istream& is, const char* magic, const std::string& path,
                  std::uint64_t& h, std::uint64_t& w) {
  char buf[8];
  is.read(buf, 8);
  if (!is || std::memcmp(buf, magic, 8) != 0) {
    throw IoError("bad magic in " + path);
  }
  h = read_u64(is);
  w = read_u64(is);
  if (!is || h == 0 || w == 0 || h * w > (1ull << 32)) {
    throw IoError("bad dimensions in " + path);
  }
}

}  // namespace

void write_grd(const std::string& path, const GridImage& img) {
  auto os = open_out(path);
  os.write(kRealMagic, 8);
  write_u64(os, img.height);
  write_u64(os, img.width);
  os.write(reinterpret_cast<const char*>(img.data.data()),
           static_cast<std::streamsize>(img.data.size() * sizeof(double)));
  if (!os) throw IoError("short write: " + path);
}

GridImage read_grd(const std::string& path) {
  auto is = open_in(path);
  std::uint64_t h, w;
  check_header(is, kRealMagic, path, h, w);
  GridImage img(h, w);
  is.read(reinterpret_cast<char*>(img.data.data()),
          static_cast<std::streamsize>(img.data.size() * sizeof(double)));
  if (!is) throw IoError("short read: " + path);
  return img;
}

void write_cpx(const std::string& path, const ComplexGrid& grid) {
  auto os = open_out(path);
  os.write(kComplexMagic, 8);
  write_u64(os, grid.height);
  write_u64(os, grid.width);
  os.write(reinterpret_cast<const char*>(grid.data.data()),
           static_cast<std::streamsize>(grid.data.size() * 2 * sizeof(double)));
  if (!os) throw IoError("short write: " + path);
}

ComplexGrid read_cpx(const std::string& path) {
  auto is = open_in(path);
  std::uint64_t h, w;
  check_header(is, kComplexMagic, path, h, w);
  ComplexGrid grid(h, w);
  is.read(reinterpret_cast<char*>(grid.data.data()),
          static_cast<std::streamsize>(grid.data.size() * 2 * sizeof(double)));
  if (!is) throw IoError("short read: " + path);
  return grid;
}

void write_pgm(const std::string& path, const GridImage& img, int bits) {
  if (bits != 8 && bits != 16) throw InvalidInputError("write_pgm: bits must be 8 or 16");
  const auto [mn_it, mx_it] = std::minmax_element(img.data.begin(), img.data.end());
  const double mn = img.data.empty() ? 0.0 : *mn_it;
  const double mx = img.data.empty() ? 0.0 : *mx_it;
  const double range = mx - mn;
  const std::uint32_t maxval = (bits == 8) ? 255u : 65535u;

  auto os = open_out(path);
  os << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
  for (double v : img.data) {
    const double t = range > 0.0 ? (v - mn) / range : 0.0;
    const std::uint32_t q =
        static_cast<std::uint32_t>(std::lround(t * static_cast<double>(maxval)));
    if (bits == 8) {
      const unsigned char b = static_cast<unsigned char>(q);
      os.write(reinterpret_cast<const char*>(&b), 1);
    } else {
      // PGM stores 16-bit samples big-endian.
      const unsigned char b[2] = {static_cast<unsigned char>(q >> 8),
                                  static_cast<unsigned char>(q & 0xff)};
      os.write(reinterpret_cast<const char*>(b), 2);
    }
  }
  if (!os) throw IoError("short write: " + path);

  nlohmann::json sidecar{{"min", mn}, {"max", mx}};
  auto js = open_out(path + ".json");
  js << sidecar.dump() << "\n";
}

GridImage read_image(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".pgm") == 0) {
    return read_pgm(path);
  }
  return read_grd(path);
}

GridImage read_pgm(const std::string& path) {
  auto is = open_in(path);
  std::string magic;
  is >> magic;
  if (magic != "P5") throw IoError("not a binary PGM: " + path);

  auto next_token = [&is, &path]() {
    std::string tok;
    for (;;) {
      if (!(is >> tok)) throw IoError("truncated PGM header: " + path);
      if (tok[0] == '#') {
        std::string rest;
        std::getline(is, rest);
        continue;
      }
      return tok;
    }
  };
  const std::size_t w = std::stoull(next_token());
  const std::size_t h = std::stoull(next_token());
  const std::uint32_t maxval = static_cast<std::uint32_t>(std::stoul(next_token()));
  if (maxval != 255 && maxval != 65535) {
    throw IoError("unsupported PGM maxval in " + path);
  }
  is.get();  // single whitespace after maxval

  double mn = 0.0, mx = 1.0;
  {
    std::ifstream js(path + ".json");
    if (js) {
      nlohmann::json sidecar;
      js >> sidecar;
      mn = sidecar.at("min").get<double>();
      mx = sidecar.at("max").get<double>();
    } else {
      mx = static_cast<double>(maxval);  // raw sample values
    }
  }

  GridImage img(h, w);
  for (auto& v : img.data) {
    std::uint32_t q;
    if (maxval == 255) {
      unsigned char b;
      is.read(reinterpret_cast<char*>(&b), 1);
      q = b;
    } else {
      unsigned char b[2];
      is.read(reinterpret_cast<char*>(b), 2);
      q = (static_cast<std::uint32_t>(b[0]) << 8) | b[1];
    }
    v = mn + (mx - mn) * static_cast<double>(q) / static_cast<double>(maxval);
  }
  if (!is) throw IoError("short read: " + path);
  return img;
}

}  // namespace uq
