#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mgss/normal.hpp"

namespace mgss {

// backup_min(l, q, m) is the expected value of min(m, u_1, ..., u_l) with the
// u_i i.i.d. from q: the value of a minimizing node whose known successors
// bottom out at m while l successors are still unexamined.  It runs from the
// identity (m very low) to the expected minimum of l draws (m very high) and
// is strictly increasing in between.  backup_max is the mirror image.
//
// The *_exact variants integrate directly; the unsuffixed operators go through
// a precomputed table of the standardized curve plus the affine map
// backup_min(l, N(mu, sigma), m) = mu + sigma * backup_min(l, N(0,1), (m-mu)/sigma).

double backup_min_exact(int l, const NormalParams& q, double m, double abs_tol = 1e-6);
double backup_max_exact(int l, const NormalParams& q, double m, double abs_tol = 1e-6);

// Standardized backup curves sampled on a uniform grid, interpolated with a
// monotone (Fritsch-Carlson) cubic.  Rows cover l = 1..l_max; outside the grid
// the exact asymptotes are used.
class BackupTable {
 public:
  struct Config {
    int l_max = 64;
    double m_lo = -8.0;
    double m_hi = 8.0;
    double step = 0.01;
    bool operator==(const Config&) const = default;
  };

  explicit BackupTable(const Config& cfg);

  // Standardized b<_{l,N(0,1)}(z), asymptote-clamped outside [m_lo, m_hi].
  double eval(int l, double z) const;
  // Expected minimum of l standard normal draws (the saturation value).
  double saturation(int l) const;

  const Config& config() const { return cfg_; }
  int l_max() const { return cfg_.l_max; }
  std::uint64_t checksum() const;

  // Versioned on-disk cache.  load() returns nullopt (caller regenerates) on
  // missing file, header mismatch, or checksum failure.
  bool save(const std::string& path) const;
  static std::optional<BackupTable> load(const std::string& path);

 private:
  BackupTable() = default;
  void build();
  void compute_slopes();

  Config cfg_;
  int n_points_ = 0;
  std::vector<double> values_;  // row-major [l-1][i]
  std::vector<double> slopes_;
  std::vector<double> saturation_;  // per l
};

// Process-wide shared table with the default configuration.
const BackupTable& standard_backup_table();

// Table-backed operators (fall back to direct quadrature above l_max).
double backup_min(int l, const NormalParams& q, double m);
double backup_max(int l, const NormalParams& q, double m);

// Expected extreme of l draws; errors when l < 1.
double expected_min(int l, const NormalParams& q);
double expected_max(int l, const NormalParams& q);

// Inverse of backup_min in m.  Values at or above the saturation point (within
// kSaturationTol) are unreachable and raise std::domain_error("unreachable value");
// the try_ variants return nullopt instead.
inline constexpr double kSaturationTol = 1e-9;

double inverse_backup_min(int l, const NormalParams& q, double v);
double inverse_backup_max(int l, const NormalParams& q, double v);
std::optional<double> try_inverse_backup_min(int l, const NormalParams& q, double v);
std::optional<double> try_inverse_backup_max(int l, const NormalParams& q, double v);

}  // namespace mgss
