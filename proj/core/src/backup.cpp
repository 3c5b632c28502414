#include "mgss/backup.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mgss/quadrature.hpp"

namespace mgss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// P(min of l standard normal draws <= z), stable in both tails.
double cdf_min_std(int l, double z) {
  const double q = normal_cdf(z);
  if (q <= 0.0) return 0.0;
  if (q < 0.5) return -std::expm1(static_cast<double>(l) * std::log1p(-q));
  return 1.0 - std::pow(normal_sf(z), static_cast<double>(l));
}

// b<(m) = m - integral_{-inf}^{m} P<(x) dx: the integrand lives in [0,1] and
// vanishes below ~ -8, which makes the cumulative form well conditioned.
double backup_min_std_exact(int l, double z, double abs_tol) {
  const double lo = -8.0;
  if (z <= lo) return z;
  const double zc = std::min(z, 8.0);
  const int nseg = std::max(4, static_cast<int>(std::ceil(zc - lo)));
  const double integral = adaptive_simpson_seg(
      [l](double x) { return cdf_min_std(l, x); }, lo, zc, abs_tol, nseg);
  return zc - integral;
}

// 5-point Gauss-Legendre on [a, b]; used for the cumulative table build.
double gauss5(int l, double a, double b) {
  static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double ws[5] = {0.2369268850561891, 0.4786286704993665,
                               0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += ws[i] * cdf_min_std(l, c + h * xs[i]);
  return s * h;
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t seed = 14695981039346656037ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

double backup_min_exact(int l, const NormalParams& q, double m, double abs_tol) {
  if (l < 0) throw std::domain_error("backup_min: negative remaining");
  if (l == 0) return m;
  if (q.exact()) return std::min(m, q.mean);
  if (m == -kInf) return -kInf;
  const double z = m == kInf ? kInf : q.z(m);
  return q.mean + q.std * backup_min_std_exact(l, std::min(z, 8.0), abs_tol);
}

double backup_max_exact(int l, const NormalParams& q, double m, double abs_tol) {
  return -backup_min_exact(l, NormalParams{-q.mean, q.std}, -m, abs_tol);
}

BackupTable::BackupTable(const Config& cfg) : cfg_(cfg) {
  if (cfg_.l_max < 1 || cfg_.step <= 0.0 || cfg_.m_hi <= cfg_.m_lo)
    throw std::domain_error("BackupTable: bad configuration");
  build();
}

void BackupTable::build() {
  n_points_ = static_cast<int>(std::lround((cfg_.m_hi - cfg_.m_lo) / cfg_.step)) + 1;
  values_.assign(static_cast<std::size_t>(cfg_.l_max) * n_points_, 0.0);
  saturation_.assign(cfg_.l_max + 1, 0.0);
  for (int l = 1; l <= cfg_.l_max; ++l) {
    double* row = values_.data() + static_cast<std::size_t>(l - 1) * n_points_;
    double cum = 0.0;
    double prev = cfg_.m_lo;
    row[0] = cfg_.m_lo;  // integral below m_lo is negligible
    for (int i = 1; i < n_points_; ++i) {
      const double z = cfg_.m_lo + i * cfg_.step;
      cum += gauss5(l, prev, z);
      row[i] = z - cum;
      prev = z;
    }
    saturation_[l] = row[n_points_ - 1];
  }
  compute_slopes();
}

void BackupTable::compute_slopes() {
  slopes_.assign(values_.size(), 0.0);
  const double h = cfg_.step;
  for (int l = 1; l <= cfg_.l_max; ++l) {
    const double* v = values_.data() + static_cast<std::size_t>(l - 1) * n_points_;
    double* d = slopes_.data() + static_cast<std::size_t>(l - 1) * n_points_;
    const int n = n_points_;
    auto sec = [&](int i) { return (v[i + 1] - v[i]) / h; };
    d[0] = sec(0);
    d[n - 1] = sec(n - 2);
    for (int i = 1; i < n - 1; ++i) {
      const double s0 = sec(i - 1), s1 = sec(i);
      // harmonic-mean limiter keeps the interpolant monotone
      d[i] = (s0 * s1 > 0.0) ? 2.0 * s0 * s1 / (s0 + s1) : 0.0;
    }
  }
}

double BackupTable::eval(int l, double z) const {
  assert(l >= 1 && l <= cfg_.l_max);
  if (z <= cfg_.m_lo) return z;
  if (z >= cfg_.m_hi) return saturation_[l];
  const double* v = values_.data() + static_cast<std::size_t>(l - 1) * n_points_;
  const double* d = slopes_.data() + static_cast<std::size_t>(l - 1) * n_points_;
  const double h = cfg_.step;
  int i = static_cast<int>((z - cfg_.m_lo) / h);
  if (i > n_points_ - 2) i = n_points_ - 2;
  const double t = (z - (cfg_.m_lo + i * h)) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * v[i] + h * h10 * d[i] + h01 * v[i + 1] + h * h11 * d[i + 1];
}

double BackupTable::saturation(int l) const {
  assert(l >= 1 && l <= cfg_.l_max);
  return saturation_[l];
}

std::uint64_t BackupTable::checksum() const {
  std::uint64_t h = fnv1a(&cfg_.l_max, sizeof cfg_.l_max);
  h = fnv1a(&cfg_.m_lo, sizeof cfg_.m_lo, h);
  h = fnv1a(&cfg_.m_hi, sizeof cfg_.m_hi, h);
  h = fnv1a(&cfg_.step, sizeof cfg_.step, h);
  h = fnv1a(values_.data(), values_.size() * sizeof(double), h);
  return h;
}

bool BackupTable::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) return false;
  out << "mgss-backup-table v1\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d %.17g %.17g %.17g", cfg_.l_max, cfg_.m_lo,
                cfg_.m_hi, cfg_.step);
  out << buf << ' ' << checksum() << '\n';
  for (double x : values_) {
    std::snprintf(buf, sizeof buf, "%a\n", x);
    out << buf;
  }
  return static_cast<bool>(out);
}

std::optional<BackupTable> BackupTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string magic, version;
  if (!(in >> magic >> version) || magic != "mgss-backup-table" || version != "v1")
    return std::nullopt;
  BackupTable t;
  std::uint64_t want = 0;
  if (!(in >> t.cfg_.l_max >> t.cfg_.m_lo >> t.cfg_.m_hi >> t.cfg_.step >> want))
    return std::nullopt;
  if (t.cfg_.l_max < 1 || t.cfg_.step <= 0.0 || t.cfg_.m_hi <= t.cfg_.m_lo)
    return std::nullopt;
  t.n_points_ = static_cast<int>(std::lround((t.cfg_.m_hi - t.cfg_.m_lo) / t.cfg_.step)) + 1;
  const std::size_t n = static_cast<std::size_t>(t.cfg_.l_max) * t.n_points_;
  t.values_.resize(n);
  std::string tok;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(in >> tok)) return std::nullopt;
    t.values_[i] = std::strtod(tok.c_str(), nullptr);
  }
  t.saturation_.assign(t.cfg_.l_max + 1, 0.0);
  for (int l = 1; l <= t.cfg_.l_max; ++l)
    t.saturation_[l] = t.values_[static_cast<std::size_t>(l - 1) * t.n_points_ + t.n_points_ - 1];
  if (t.checksum() != want) return std::nullopt;
  t.compute_slopes();
  return t;
}

const BackupTable& standard_backup_table() {
  static const BackupTable table{BackupTable::Config{}};
  return table;
}

double backup_min(int l, const NormalParams& q, double m) {
  if (l < 0) throw std::domain_error("backup_min: negative remaining");
  if (l == 0) return m;
  if (q.exact()) return std::min(m, q.mean);
  if (m == -kInf) return -kInf;
  const BackupTable& t = standard_backup_table();
  if (l > t.l_max()) return backup_min_exact(l, q, m);
  const double z = m == kInf ? t.config().m_hi : q.z(m);
  return q.mean + q.std * t.eval(l, z);
}

double backup_max(int l, const NormalParams& q, double m) {
  return -backup_min(l, NormalParams{-q.mean, q.std}, -m);
}

double expected_min(int l, const NormalParams& q) {
  if (l < 1) throw std::domain_error("expected_min: remaining must be >= 1");
  if (q.exact()) return q.mean;
  const BackupTable& t = standard_backup_table();
  if (l > t.l_max()) return backup_min_exact(l, q, kInf);
  return q.mean + q.std * t.saturation(l);
}

double expected_max(int l, const NormalParams& q) {
  return -expected_min(l, NormalParams{-q.mean, q.std});
}

std::optional<double> try_inverse_backup_min(int l, const NormalParams& q, double v) {
  if (l < 1) return std::nullopt;
  if (q.exact()) {
    // backup collapses to min(m, mean): invertible only below the mean
    if (v >= q.mean - kSaturationTol) return std::nullopt;
    return v;
  }
  const BackupTable& t = standard_backup_table();
  const double c = l <= t.l_max() ? t.saturation(l) : q.z(backup_min_exact(l, q, kInf));
  double z = q.z(v);
  if (z >= c - kSaturationTol) return std::nullopt;
  if (z <= t.config().m_lo) return v;  // identity region
  auto f = [&](double m) {
    return l <= t.l_max() ? t.eval(l, m) : backup_min_std_exact(l, m, 1e-8);
  };
  // b(m) <= m everywhere, so the root sits in [z, m_hi]; b(m_hi) = c > z.
  double lo = z, hi = t.config().m_hi;
  for (int i = 0; i < 80 && hi - lo > 1e-7; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < z)
      lo = mid;
    else
      hi = mid;
  }
  return q.mean + q.std * 0.5 * (lo + hi);
}

double inverse_backup_min(int l, const NormalParams& q, double v) {
  if (l < 1) throw std::domain_error("inverse_backup_min: remaining must be >= 1");
  if (auto m = try_inverse_backup_min(l, q, v)) return *m;
  throw std::domain_error("unreachable value");
}

std::optional<double> try_inverse_backup_max(int l, const NormalParams& q, double v) {
  auto m = try_inverse_backup_min(l, NormalParams{-q.mean, q.std}, -v);
  if (!m) return std::nullopt;
  return -*m;
}

double inverse_backup_max(int l, const NormalParams& q, double v) {
  if (l < 1) throw std::domain_error("inverse_backup_max: remaining must be >= 1");
  if (auto m = try_inverse_backup_max(l, q, v)) return *m;
  throw std::domain_error("unreachable value");
}

}  // namespace mgss
