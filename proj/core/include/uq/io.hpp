#pragma once

#include <string>

#include "uq/grid.hpp"

namespace uq {

// GRD1 container: 8-byte magic "GRDIMG01", height and width as 64-bit
// little-endian unsigned integers, then height*width doubles (IEEE-754,
// little-endian, row-major). The complex variant uses magic "GRDCPX01"
// and stores re,im pairs.

void write_grd(const std::string& path, const GridImage& img);
GridImage read_grd(const std::string& path);

void write_cpx(const std::string& path, const ComplexGrid& grid);
ComplexGrid read_cpx(const std::string& path);

// Binary PGM (P5) with linear intensity scaling recorded in a JSON sidecar
// at <path>.json: {"min": ..., "max": ...}. bits must be 8 or 16.
void write_pgm(const std::string& path, const GridImage& img, int bits = 16);
GridImage read_pgm(const std::string& path);

/// Extension-dispatched load: .pgm goes through read_pgm, everything else
/// through read_grd.
GridImage read_image(const std::string& path);

}  // namespace uq
