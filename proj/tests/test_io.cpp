#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "xs/gather_io.hpp"

using namespace xs;

namespace {
GatherSpec paper_like_spec() {
  std::vector<double> xs;
  for (int r = 0; r < 201; ++r) xs.push_back(2000.0 + 20.0 * r);
  return GatherSpec(3000.0, xs, TimeAxis(1123, 4.9e-3, -2.0));
}
}  // namespace

TEST_SUITE("io") {

TEST_CASE("gather round trip preserves the 32-bit payload and the header exactly") {
  GatherSpec spec = paper_like_spec();
  Gather g = random_gather(spec, 61);
  std::string path = "/tmp/xswave_io_test.xsg";
  write_xsg(path, g);

  // fixed 64-byte header
  {
    std::ifstream in(path, std::ios::binary);
    std::string head(64, '\0');
    in.read(head.data(), 64);
    CHECK(head.substr(0, 5) == "XSG1 ");
    CHECK(head[63] == '\n');
  }
  CHECK(std::filesystem::file_size(path) == 64 + 201ull * 1123ull * 4ull);

  Gather back = read_xsg(path);
  CHECK(back.ntr() == g.ntr());
  CHECK(back.nt() == g.nt());
  CHECK(back.time().dt == g.time().dt);
  CHECK(back.time().t0 == g.time().t0);
  CHECK(back.depth() == g.depth());
  CHECK(back.x_coords().front() == 2000.0);
  for (int r = 0; r < g.ntr(); r += 37)
    for (int n = 0; n < g.nt(); n += 101)
      CHECK(back.at(r, n) == static_cast<double>(static_cast<float>(g.at(r, n))));

  // writing the read-back gather reproduces the file byte for byte
  std::string path2 = "/tmp/xswave_io_test2.xsg";
  write_xsg(path2, back);
  std::ifstream a(path, std::ios::binary), b(path2, std::ios::binary);
  std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
}

TEST_CASE("irregular trace spacing is rejected by the gather writer") {
  GatherSpec spec(0.0, {0.0, 10.0, 30.0}, TimeAxis(4, 0.01, 0.0));
  Gather g(spec);
  CHECK_THROWS_AS(write_xsg("/tmp/xswave_io_bad.xsg", g), IoError);
}

TEST_CASE("field round trip") {
  Grid2D grid(11, 7, 20.0, 20.0, 100.0, -40.0);
  Field2D f(11, 7);
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 7; ++j) f(i, j) = std::sin(1.0 + i) * j;
  std::string path = "/tmp/xswave_io_test.xsf";
  write_xsf(path, grid, f);
  GridField back = read_xsf(path);
  CHECK(back.grid == grid);
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 7; ++j)
      CHECK(back.field(i, j) == static_cast<double>(static_cast<float>(f(i, j))));
}

TEST_CASE("reading a truncated file reports an io error") {
  std::string path = "/tmp/xswave_io_trunc.xsg";
  {
    GatherSpec spec(0.0, {0.0, 10.0}, TimeAxis(16, 0.01, 0.0));
    write_xsg(path, random_gather(spec, 62));
  }
  std::filesystem::resize_file(path, 80);
  CHECK_THROWS_AS(read_xsg(path), IoError);
}

TEST_CASE("raster export records the clip for reuse") {
  GatherSpec spec(0.0, {0.0, 10.0, 20.0}, TimeAxis(32, 0.01, 0.0));
  Gather g = random_gather(spec, 63);
  std::string path = "/tmp/xswave_io_test.pgm";
  write_pgm_gather(path, g);
  double clip = read_pgm_clip(path);
  CHECK(clip > 0.0);
  CHECK(clip <= g.max_abs());
  // reusing an explicit clip reproduces it in the header
  write_pgm_gather(path, g, 0.5);
  CHECK(read_pgm_clip(path) == 0.5);
  // well-formed binary PGM
  std::ifstream in(path, std::ios::binary);
  std::string magic;
  std::getline(in, magic);
  CHECK(magic == "P5");
}

}  // TEST_SUITE
