#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "uq/errors.hpp"

namespace uq {

/// Real-valued image on a regular grid, row-major storage.
struct GridImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> data;

  GridImage() = default;
  GridImage(std::size_t h, std::size_t w, double fill = 0.0)
      : height(h), width(w), data(h * w, fill) {}

  std::size_t size() const { return data.size(); }

  double& at(std::size_t r, std::size_t c) { return data[r * width + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * width + c]; }

  bool same_shape(const GridImage& o) const {
    return height == o.height && width == o.width;
  }
};

/// Complex-valued grid (Fourier coefficients), row-major.
struct ComplexGrid {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::complex<double>> data;

  ComplexGrid() = default;
  ComplexGrid(std::size_t h, std::size_t w)
      : height(h), width(w), data(h * w, {0.0, 0.0}) {}

  std::size_t size() const { return data.size(); }

  std::complex<double>& at(std::size_t r, std::size_t c) {
    return data[r * width + c];
  }
  std::complex<double> at(std::size_t r, std::size_t c) const {
    return data[r * width + c];
  }

  bool same_shape(const ComplexGrid& o) const {
    return height == o.height && width == o.width;
  }
};

void require_shape(const GridImage& img, std::size_t h, std::size_t w,
                   const char* what);
void require_finite(const GridImage& img, const char* what);
bool all_finite(const GridImage& img);

double dot(const GridImage& a, const GridImage& b);
double sq_norm(const GridImage& a);
double norm(const GridImage& a);
double sq_norm(const ComplexGrid& a);

/// a + s*b, shapes must match.
GridImage axpy(const GridImage& a, double s, const GridImage& b);

}  // namespace uq
