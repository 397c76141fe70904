#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace zopt {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(const Vec& a) { return dot(a, a); }

inline double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }

inline bool all_finite(const Vec& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

inline void check_dim(const Vec& v, std::size_t d, const char* what) {
  if (v.size() != d)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (got " +
                                std::to_string(v.size()) + ", expected " + std::to_string(d) +
                                ")");
}

}  // namespace zopt
