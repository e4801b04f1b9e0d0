#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "test_util.hpp"
#include "uq/io.hpp"

using namespace uq;
using uqtest::TempDir;

TEST_CASE("GRD1 round trip is bit exact") {
  TempDir tmp;
  Rng rng(1);
  GridImage img = uqtest::random_image(13, 21, rng);
  write_grd(tmp.path("a.grd"), img);
  GridImage back = read_grd(tmp.path("a.grd"));
  CHECK(back.height == img.height);
  CHECK(back.width == img.width);
  CHECK(back.data == img.data);
}

TEST_CASE("GRD1 header layout is stable") {
  TempDir tmp;
  GridImage img(2, 3, 0.0);
  img.at(0, 0) = 1.0;
  write_grd(tmp.path("h.grd"), img);
  std::ifstream is(tmp.path("h.grd"), std::ios::binary);
  char magic[8];
  is.read(magic, 8);
  CHECK(std::string(magic, 8) == "GRDIMG01");
  std::uint64_t h = 0, w = 0;
  is.read(reinterpret_cast<char*>(&h), 8);
  is.read(reinterpret_cast<char*>(&w), 8);
  CHECK(h == 2);
  CHECK(w == 3);
  double first = 0.0;
  is.read(reinterpret_cast<char*>(&first), 8);
  CHECK(first == 1.0);
}

TEST_CASE("complex grid round trip is bit exact") {
  TempDir tmp;
  ComplexGrid g(5, 4);
  Rng rng(2);
  for (auto& z : g.data) z = {rng.normal(), rng.normal()};
  write_cpx(tmp.path("c.cpx"), g);
  ComplexGrid back = read_cpx(tmp.path("c.cpx"));
  CHECK(back.data == g.data);
}

TEST_CASE("reading a GRD with the wrong magic fails") {
  TempDir tmp;
  std::ofstream os(tmp.path("bad.grd"), std::ios::binary);
  os << "NOTMAGIC" << std::string(64, '\0');
  os.close();
  CHECK_THROWS_AS(read_grd(tmp.path("bad.grd")), IoError);
  CHECK_THROWS_AS(read_grd(tmp.path("missing.grd")), IoError);
}

TEST_CASE("PGM round trip recovers values up to quantization") {
  TempDir tmp;
  Rng rng(3);
  GridImage img = uqtest::random_image(9, 9, rng, 2.0);
  for (int bits : {8, 16}) {
    const std::string p = tmp.path("img" + std::to_string(bits) + ".pgm");
    write_pgm(p, img, bits);
    GridImage back = read_pgm(p);
    double mn = img.data[0], mx = img.data[0];
    for (double v : img.data) {
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    const double step = (mx - mn) / (bits == 8 ? 255.0 : 65535.0);
    CHECK(uqtest::max_abs_diff(img.data, back.data) <= 0.5 * step + 1e-12);
  }
  CHECK_THROWS_AS(write_pgm(tmp.path("x.pgm"), img, 12), InvalidInputError);
}

TEST_CASE("read_image dispatches on the file extension") {
  TempDir tmp;
  Rng rng(4);
  GridImage img = uqtest::random_image(6, 6, rng);
  write_grd(tmp.path("a.grd"), img);
  write_pgm(tmp.path("a.pgm"), img, 16);
  CHECK(read_image(tmp.path("a.grd")).data == img.data);
  GridImage via_pgm = read_image(tmp.path("a.pgm"));
  CHECK(via_pgm.height == img.height);
  CHECK(uqtest::max_abs_diff(via_pgm.data, img.data) < 1e-3);
}

TEST_CASE("PGM sidecar stores the scaling and constant images survive") {
  TempDir tmp;
  GridImage img(4, 4, 7.25);
  write_pgm(tmp.path("c.pgm"), img, 8);
  std::ifstream js(tmp.path("c.pgm.json"));
  REQUIRE(js.good());
  std::string text((std::istreambuf_iterator<char>(js)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("7.25") != std::string::npos);
  GridImage back = read_pgm(tmp.path("c.pgm"));
  CHECK(uqtest::max_abs_diff(img.data, back.data) == 0.0);
}
