#include "mgss/calibration.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mgss/backup.hpp"
#include "mgss/order_stats.hpp"

namespace mgss {
namespace {

constexpr int kPhaseLo[QCalibration::kPhases] = {4, 21, 45};
constexpr int kPhaseHi[QCalibration::kPhases] = {20, 44, 64};
constexpr int kBranchLo[QCalibration::kBranches] = {1, 6, 13};
constexpr int kBranchHi[QCalibration::kBranches] = {5, 12, 64};

// E[max of n] and Std[max of n] for standard-normal draws; the std equals the
// min-statistic std by symmetry.  Cached: the std needs quadrature.
double max_mean_std01(int n) { return expected_max(n, NormalParams{0.0, 1.0}); }

double max_std_std01(int n) {
  static std::map<int, double> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, min_stat_std(n)).first;
  return it->second;
}

struct Moments {
  double mean = 0.0;
  double std = 0.0;  // ddof = 1
  long count = 0;
};

Moments moments_of(const std::vector<double>& xs) {
  Moments m;
  m.count = static_cast<long>(xs.size());
  if (xs.empty()) return m;
  double s = 0.0;
  for (double x : xs) s += x;
  m.mean = s / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

// Inverts best-child moment statistics to the underlying (dmu, sigma):
// E[best - parent] = dmu + sigma * a_n and Std[best - parent] = sigma * b_n.
QBucket fit_bucket(const std::map<int, std::vector<double>>& by_n) {
  double wsum = 0.0, dmu_acc = 0.0, sigma_acc = 0.0;
  long total = 0;
  for (const auto& [n, xs] : by_n) {
    total += static_cast<long>(xs.size());
    if (xs.size() < 2) continue;
    const Moments m = moments_of(xs);
    const double sigma_n = m.std / max_std_std01(n);
    const double dmu_n = m.mean - sigma_n * max_mean_std01(n);
    const double w = static_cast<double>(m.count);
    wsum += w;
    dmu_acc += w * dmu_n;
    sigma_acc += w * sigma_n;
  }
  QBucket b;
  b.count = total;
  if (wsum > 0.0) {
    b.dmu = dmu_acc / wsum;
    b.sigma = sigma_acc / wsum;
  }
  return b;
}

}  // namespace

int QCalibration::phase_index(int discs) {
  if (discs <= kPhaseHi[0]) return 0;
  if (discs <= kPhaseHi[1]) return 1;
  return 2;
}

int QCalibration::branch_index(int n) {
  if (n <= kBranchHi[0]) return 0;
  if (n <= kBranchHi[1]) return 1;
  return 2;
}

const QBucket& QCalibration::lookup(int discs, int n) const {
  const QBucket& b = cells_[phase_index(discs)][branch_index(n)];
  return b.count >= min_count ? b : global_;
}

bool QCalibration::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) return false;
  out << "mgss-qcal v1\n";
  char buf[160];
  const auto row = [&](int plo, int phi, int blo, int bhi, const QBucket& b) {
    std::snprintf(buf, sizeof buf, "%d %d %d %d %.17g %.17g %ld\n", plo, phi,
                  blo, bhi, b.dmu, b.sigma, b.count);
    out << buf;
  };
  row(4, 64, 1, 64, global_);
  for (int pi = 0; pi < kPhases; ++pi) {
    for (int bi = 0; bi < kBranches; ++bi) {
      row(kPhaseLo[pi], kPhaseHi[pi], kBranchLo[bi], kBranchHi[bi],
          cells_[pi][bi]);
    }
  }
  return static_cast<bool>(out);
}

std::optional<QCalibration> QCalibration::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string header;
  if (!std::getline(in, header) || header != "mgss-qcal v1") return std::nullopt;
  QCalibration cal;
  bool saw_global = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int plo, phi, blo, bhi;
    QBucket b;
    if (!(ls >> plo >> phi >> blo >> bhi >> b.dmu >> b.sigma >> b.count)) {
      return std::nullopt;
    }
    if (plo == 4 && phi == 64 && blo == 1 && bhi == 64) {
      cal.global_ = b;
      saw_global = true;
      continue;
    }
    bool matched = false;
    for (int pi = 0; pi < kPhases && !matched; ++pi) {
      for (int bi = 0; bi < kBranches && !matched; ++bi) {
        if (plo == kPhaseLo[pi] && phi == kPhaseHi[pi] &&
            blo == kBranchLo[bi] && bhi == kBranchHi[bi]) {
          cal.cells_[pi][bi] = b;
          matched = true;
        }
      }
    }
    if (!matched) return std::nullopt;
  }
  if (!saw_global) return std::nullopt;
  return cal;
}

QCalibration calibrate_q(const std::vector<CalibrationSample>& samples,
                         long min_count) {
  // bucket -> (n -> offsets); bucket 9 aggregates everything for the fallback.
  std::array<std::map<int, std::vector<double>>, 10> groups;
  for (const CalibrationSample& s : samples) {
    const int bucket = QCalibration::phase_index(s.discs) * 3 +
                       QCalibration::branch_index(s.n);
    groups[bucket][s.n].push_back(s.best_minus_parent);
    groups[9][s.n].push_back(s.best_minus_parent);
  }
  QCalibration cal;
  cal.min_count = min_count;
  cal.global() = fit_bucket(groups[9]);
  if (!samples.empty() && cal.global().sigma <= 0.0) {
    throw std::runtime_error("calibration samples carry no variance");
  }
  for (int pi = 0; pi < QCalibration::kPhases; ++pi) {
    for (int bi = 0; bi < QCalibration::kBranches; ++bi) {
      QBucket b = fit_bucket(groups[pi * 3 + bi]);
      if (b.sigma <= 0.0) b = QBucket{cal.global().dmu, cal.global().sigma, b.count};
      cal.cell(pi, bi) = b;
    }
  }
  return cal;
}

std::vector<CalibrationSample> collect_calibration_samples(
    int games, unsigned seed, const EvalModel& model) {
  std::vector<CalibrationSample> out;
  std::mt19937_64 rng(seed);
  for (int g = 0; g < games; ++g) {
    OthelloBoard b = initial_board();
    while (!is_terminal(b)) {
      const std::vector<int> legal = legal_moves(b);
      if (legal.empty()) {
        b = apply_move(b, kPassMove);
        continue;
      }
      const double sign = b.mover == 0 ? 1.0 : -1.0;
      const double parent = sign * eval_black(b, model);
      double best = -1e300;
      for (int mv : legal) {
        const double child = sign * eval_black(apply_move(b, mv), model);
        if (child > best) best = child;
      }
      out.push_back({disc_count(b), static_cast<int>(legal.size()),
                     best - parent});
      std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
      b = apply_move(b, legal[pick(rng)]);
    }
  }
  return out;
}

const QCalibration& default_q_calibration() {
  static const QCalibration cal = [] {
    // Frozen from collect_calibration_samples(2000, 20260822, default model):
    // 119926 samples over seeded random playouts.
    QCalibration c;
    c.min_count = 200;
    c.global() = {-26.1324, 51.0646, 119926};
    c.cell(0, 0) = {-2.97251, 20.8323, 11494};
    c.cell(0, 1) = {-14.5393, 27.0865, 20886};
    c.cell(0, 2) = {-27.3666, 26.0562, 1613};
    c.cell(1, 0) = {-12.3245, 35.6004, 1089};
    c.cell(1, 1) = {-27.357, 36.2175, 29889};
    c.cell(1, 2) = {-38.1186, 35.7978, 16998};
    c.cell(2, 0) = {32.5272, 72.1062, 17325};
    c.cell(2, 1) = {-22.9307, 57.4063, 19489};
    c.cell(2, 2) = {-49.0968, 48.9791, 1143};
    return c;
  }();
  return cal;
}

}  // namespace mgss
