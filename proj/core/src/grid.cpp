#include "uq/grid.hpp"

#include <cmath>
#include <string>

namespace uq {

void require_shape(const GridImage& img, std::size_t h, std::size_t w,
                   const char* what) {
  if (img.height != h || img.width != w || img.data.size() != h * w) {
    throw InvalidInputError(std::string(what) + ": expected " +
                            std::to_string(h) + "x" + std::to_string(w) +
                            " image, got " + std::to_string(img.height) + "x" +
                            std::to_string(img.width));
  }
}

bool all_finite(const GridImage& img) {
  for (double v : img.data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void require_finite(const GridImage& img, const char* what) {
  if (!all_finite(img)) {
    throw InvalidInputError(std::string(what) + ": non-finite pixel value");
  }
}

double dot(const GridImage& a, const GridImage& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
  return s;
}

double sq_norm(const GridImage& a) { return dot(a, a); }

double norm(const GridImage& a) { return std::sqrt(sq_norm(a)); }

double sq_norm(const ComplexGrid& a) {
  double s = 0.0;
  for (const auto& z : a.data) s += std::norm(z);
  return s;
}

GridImage axpy(const GridImage& a, double s, const GridImage& b) {
  GridImage out = a;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += s * b.data[i];
  return out;
}

}  // namespace uq
