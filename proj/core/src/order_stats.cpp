#include "mgss/order_stats.hpp"

#include <cmath>
#include <stdexcept>

#include "mgss/backup.hpp"
#include "mgss/quadrature.hpp"

namespace mgss {

namespace {

// 1 - (1 - Q(x))^l, stable in both tails.
double cdf_min_std(int l, double z) {
  const double q = normal_cdf(z);
  if (q <= 0.0) return 0.0;
  if (q < 0.5) return -std::expm1(static_cast<double>(l) * std::log1p(-q));
  const double s = normal_sf(z);
  return 1.0 - std::pow(s, static_cast<double>(l));
}

}  // namespace

double cdf_min(const MinStatModel& m, double x) {
  if (m.remaining < 0) throw std::domain_error("cdf_min: negative remaining");
  if (m.remaining == 0) return 0.0;
  if (m.base.exact()) return x >= m.base.mean ? 1.0 : 0.0;
  return cdf_min_std(m.remaining, m.base.z(x));
}

double pdf_min(const MinStatModel& m, double x) {
  if (m.remaining < 1) throw std::domain_error("pdf_min: remaining must be >= 1");
  if (m.base.exact()) throw std::domain_error("pdf_min: degenerate model has no density");
  const double z = m.base.z(x);
  const double s = normal_sf(z);
  const double l = static_cast<double>(m.remaining);
  return l * (normal_pdf(z) / m.base.std) * std::pow(s, l - 1.0);
}

double cdf_max(const MinStatModel& m, double x) {
  if (m.remaining < 0) throw std::domain_error("cdf_max: negative remaining");
  if (m.remaining == 0) return 1.0;
  // max of l draws <= x  iff every draw <= x
  if (m.base.exact()) return x >= m.base.mean ? 1.0 : 0.0;
  return std::pow(normal_cdf(m.base.z(x)), static_cast<double>(m.remaining));
}

double pdf_max(const MinStatModel& m, double x) {
  if (m.remaining < 1) throw std::domain_error("pdf_max: remaining must be >= 1");
  if (m.base.exact()) throw std::domain_error("pdf_max: degenerate model has no density");
  const double z = m.base.z(x);
  const double l = static_cast<double>(m.remaining);
  return l * (normal_pdf(z) / m.base.std) * std::pow(normal_cdf(z), l - 1.0);
}

double truncated_point_mass(const TruncatedMinModel& t) {
  return 1.0 - cdf_min(t.model, t.truncation);
}

double truncated_cdf(const TruncatedMinModel& t, double x) {
  if (x >= t.truncation) return 1.0;
  return cdf_min(t.model, x);
}

double truncated_mean(const TruncatedMinModel& t) {
  return backup_min(t.model.remaining, t.model.base, t.truncation);
}

double expected_min_exact(int l, const NormalParams& q) {
  if (l < 1) throw std::domain_error("expected_min: remaining must be >= 1");
  if (q.exact()) return q.mean;
  const MinStatModel std_model{NormalParams{0.0, 1.0}, l};
  const double c = adaptive_simpson_seg(
      [&](double z) { return z * pdf_min(std_model, z); }, -8.0, 8.0, 1e-9);
  return q.mean + q.std * c;
}

double expected_max_exact(int l, const NormalParams& q) {
  return -expected_min_exact(l, NormalParams{-q.mean, q.std});
}

double min_stat_std(int l) {
  if (l < 1) throw std::domain_error("min_stat_std: remaining must be >= 1");
  const MinStatModel m{NormalParams{0.0, 1.0}, l};
  const double mean = expected_min_exact(l, m.base);
  const double m2 = adaptive_simpson_seg(
      [&](double z) { return z * z * pdf_min(m, z); }, -8.0, 8.0, 1e-9);
  const double var = m2 - mean * mean;
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

}  // namespace mgss
