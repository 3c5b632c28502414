#pragma once

#include <cmath>

namespace mgss {

inline constexpr double kInvSqrt2Pi = 0.3989422804014327;
inline constexpr double kSqrt2 = 1.4142135623730951;

inline double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }
inline double normal_sf(double z) { return 0.5 * std::erfc(z / kSqrt2); }

// Successor-value model: child values are treated as i.i.d. N(mean, std) draws.
// std == 0 marks an exact (degenerate) value.
struct NormalParams {
  double mean = 0.0;
  double std = 1.0;

  bool exact() const { return std == 0.0; }
  double z(double x) const { return (x - mean) / std; }
};

inline double pdf(const NormalParams& q, double x) {
  return normal_pdf(q.z(x)) / q.std;
}
inline double cdf(const NormalParams& q, double x) {
  if (q.exact()) return x >= q.mean ? 1.0 : 0.0;
  return normal_cdf(q.z(x));
}
inline double sf(const NormalParams& q, double x) {
  if (q.exact()) return x >= q.mean ? 0.0 : 1.0;
  return normal_sf(q.z(x));
}

}  // namespace mgss
