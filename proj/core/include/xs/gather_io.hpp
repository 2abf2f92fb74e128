#pragma once

#include <string>

#include "xs/gather.hpp"
#include "xs/grid.hpp"

namespace xs {

/// XSG1 gather file: one 64-byte ASCII-padded header line
///   XSG1 ntr=<int> nt=<int> dt=<float> t0=<float> z=<float> x0=<float> dxtr=<float>
/// followed by ntr*nt little-endian 32-bit floats, trace-major.
/// Requires uniform trace spacing; floats are written in shortest
/// round-trip form and must fit the fixed header.
void write_xsg(const std::string& path, const Gather& g);
Gather read_xsg(const std::string& path);

/// XSF1 grid-field file, analogous header with nx nz dx dz x0 z0 and
/// nx*nz floats, x-major with z contiguous.
void write_xsf(const std::string& path, const Grid2D& grid, const Field2D& field);
struct GridField {
  Grid2D grid;
  Field2D field;
};
GridField read_xsf(const std::string& path);

/// 8-bit binary PGM with symmetric clipping. clip <= 0 picks the 99th
/// percentile of |values|; the applied clip is recorded in a comment so
/// difference plots can reuse it.
void write_pgm_gather(const std::string& path, const Gather& g, double clip = 0.0);
void write_pgm_field(const std::string& path, const Field2D& f, double clip = 0.0);
/// Clip value recorded in a previously written PGM.
double read_pgm_clip(const std::string& path);

}  // namespace xs
