#include "xs/gather_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace xs {

static_assert(std::endian::native == std::endian::little,
              "file writers assume a little-endian host");

namespace {

constexpr std::size_t kHeaderBytes = 64;

std::string format_number(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) throw IoError("cannot format header number");
  return std::string(buf, res.ptr);
}

void write_header(std::ofstream& out, const std::string& text, const std::string& path) {
  if (text.size() > kHeaderBytes - 1)
    throw IoError("header for " + path + " exceeds " + std::to_string(kHeaderBytes) +
                  " bytes: '" + text + "'");
  std::string padded = text;
  padded.resize(kHeaderBytes - 1, ' ');
  padded.push_back('\n');
  out.write(padded.data(), padded.size());
}

std::string read_header(std::ifstream& in, const std::string& path) {
  char buf[kHeaderBytes];
  in.read(buf, kHeaderBytes);
  if (!in) throw IoError("cannot read header of " + path);
  return std::string(buf, kHeaderBytes);
}

double parse_field(const std::string& header, const std::string& key, const std::string& path) {
  auto pos = header.find(key + "=");
  if (pos == std::string::npos) throw IoError(path + ": header field '" + key + "' missing");
  const char* start = header.c_str() + pos + key.size() + 1;
  char* end = nullptr;
  double v = std::strtod(start, &end);
  if (end == start) throw IoError(path + ": cannot parse header field '" + key + "'");
  return v;
}

void write_f32(std::ofstream& out, const std::vector<double>& v) {
  std::vector<float> f(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) f[i] = static_cast<float>(v[i]);
  out.write(reinterpret_cast<const char*>(f.data()), f.size() * sizeof(float));
}

std::vector<double> read_f32(std::ifstream& in, std::size_t n, const std::string& path) {
  std::vector<float> f(n);
  in.read(reinterpret_cast<char*>(f.data()), n * sizeof(float));
  if (!in) throw IoError(path + ": truncated data section");
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f[i];
  return v;
}

double uniform_spacing(const std::vector<double>& x) {
  if (x.size() < 2) return 1.0;
  double d = x[1] - x[0];
  for (std::size_t i = 1; i + 1 < x.size(); ++i)
    if (std::abs((x[i + 1] - x[i]) - d) > 1e-9 * std::max(1.0, std::abs(d)))
      throw IoError("XSG1 requires uniformly spaced traces");
  return d;
}

double clip_from_values(const std::vector<double>& v, double clip) {
  if (clip > 0.0) return clip;
  std::vector<double> mag(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) mag[i] = std::abs(v[i]);
  std::sort(mag.begin(), mag.end());
  double c = mag.empty() ? 0.0 : mag[static_cast<std::size_t>(0.99 * (mag.size() - 1))];
  return c > 0.0 ? c : 1.0;
}

// The stored fast axis (time for gathers, z for fields) runs down the image.
void write_pgm(const std::string& path, const std::vector<double>& v, int rows, int cols,
               double clip) {
  double c = clip_from_values(v, clip);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "P5\n# clip=" << format_number(c) << "\n" << cols << " " << rows << "\n255\n";
  std::vector<unsigned char> img(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (int cix = 0; cix < cols; ++cix) {
      double s = std::clamp(v[static_cast<std::size_t>(cix) * rows + r] / c, -1.0, 1.0);
      img[static_cast<std::size_t>(r) * cols + cix] =
          static_cast<unsigned char>(std::lround(127.5 + 127.0 * s));
    }
  out.write(reinterpret_cast<const char*>(img.data()), img.size());
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace

void write_xsg(const std::string& path, const Gather& g) {
  double dxtr = uniform_spacing(g.x_coords());
  std::ostringstream h;
  h << "XSG1 ntr=" << g.ntr() << " nt=" << g.nt() << " dt=" << format_number(g.time().dt)
    << " t0=" << format_number(g.time().t0) << " z=" << format_number(g.depth())
    << " x0=" << format_number(g.x_coords().front()) << " dxtr=" << format_number(dxtr);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_header(out, h.str(), path);
  write_f32(out, g.values());
  if (!out) throw IoError("failed writing " + path);
}

Gather read_xsg(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string h = read_header(in, path);
  if (h.rfind("XSG1 ", 0) != 0) throw IoError(path + ": not an XSG1 file");
  int ntr = static_cast<int>(parse_field(h, "ntr", path));
  int nt = static_cast<int>(parse_field(h, "nt", path));
  double dt = parse_field(h, "dt", path);
  double t0 = parse_field(h, "t0", path);
  double z = parse_field(h, "z", path);
  double x0 = parse_field(h, "x0", path);
  double dxtr = parse_field(h, "dxtr", path);
  if (ntr < 1 || nt < 1) throw IoError(path + ": bad gather dimensions");
  std::vector<double> xs(ntr);
  for (int r = 0; r < ntr; ++r) xs[r] = x0 + r * dxtr;
  GatherSpec spec(z, std::move(xs), TimeAxis(nt, dt, t0));
  auto vals = read_f32(in, static_cast<std::size_t>(ntr) * nt, path);
  return Gather(spec, std::move(vals));
}

void write_xsf(const std::string& path, const Grid2D& grid, const Field2D& field) {
  if (field.nx() != grid.nx || field.nz() != grid.nz)
    throw ShapeError("write_xsf: field does not match grid");
  std::ostringstream h;
  h << "XSF1 nx=" << grid.nx << " nz=" << grid.nz << " dx=" << format_number(grid.dx)
    << " dz=" << format_number(grid.dz) << " x0=" << format_number(grid.x0)
    << " z0=" << format_number(grid.z0);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_header(out, h.str(), path);
  std::vector<double> v(field.data(), field.data() + field.size());
  write_f32(out, v);
  if (!out) throw IoError("failed writing " + path);
}

GridField read_xsf(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string h = read_header(in, path);
  if (h.rfind("XSF1 ", 0) != 0) throw IoError(path + ": not an XSF1 file");
  int nx = static_cast<int>(parse_field(h, "nx", path));
  int nz = static_cast<int>(parse_field(h, "nz", path));
  Grid2D grid(nx, nz, parse_field(h, "dx", path), parse_field(h, "dz", path),
              parse_field(h, "x0", path), parse_field(h, "z0", path));
  auto vals = read_f32(in, grid.nodes(), path);
  Field2D f(nx, nz);
  std::memcpy(f.data(), vals.data(), vals.size() * sizeof(double));
  return GridField{grid, std::move(f)};
}

void write_pgm_gather(const std::string& path, const Gather& g, double clip) {
  write_pgm(path, g.values(), g.nt(), g.ntr(), clip);
}

void write_pgm_field(const std::string& path, const Field2D& f, double clip) {
  std::vector<double> v(f.data(), f.data() + f.size());
  write_pgm(path, v, f.nz(), f.nx(), clip);
}

double read_pgm_clip(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  auto pos = line.find("clip=");
  if (pos == std::string::npos) throw IoError(path + ": no clip comment found");
  return std::strtod(line.c_str() + pos + 5, nullptr);
}

}  // namespace xs
