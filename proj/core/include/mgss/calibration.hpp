#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mgss/eval.hpp"

namespace mgss {

// One observation of how good the best child turned out relative to its
// parent's static evaluation, both from the parent mover's point of view.
struct CalibrationSample {
  int discs = 0;                  // parent disc count
  int n = 0;                      // number of flip moves at the parent
  double best_minus_parent = 0.0;
};

struct QBucket {
  double dmu = 0.0;   // mean child-value offset from the parent evaluation
  double sigma = 1.0; // std of child values around the parent evaluation
  long count = 0;

  bool operator==(const QBucket&) const = default;
};

// Child-value distribution statistics bucketed by game phase (disc count)
// and branching factor, with a global fallback for sparse buckets.
class QCalibration {
 public:
  static constexpr int kPhases = 3;
  static constexpr int kBranches = 3;

  static int phase_index(int discs);  // [4,20] [21,44] [45,64]
  static int branch_index(int n);     // [1,5] [6,12] [13,64]

  QBucket& cell(int pi, int bi) { return cells_[pi][bi]; }
  const QBucket& cell(int pi, int bi) const { return cells_[pi][bi]; }
  QBucket& global() { return global_; }
  const QBucket& global() const { return global_; }

  long min_count = 200;

  // Bucket for a position, falling back to the global bucket when the cell
  // has fewer than min_count samples.
  const QBucket& lookup(int discs, int n) const;

  bool save(const std::string& path) const;
  static std::optional<QCalibration> load(const std::string& path);

  bool operator==(const QCalibration&) const = default;

 private:
  std::array<std::array<QBucket, kBranches>, kPhases> cells_{};
  QBucket global_{};
};

// Recovers (dmu, sigma) of the child-value distribution from best-child
// statistics: within each bucket the samples are grouped by exact n and the
// observed mean/std of the max-of-n is inverted through the standardized
// order-statistic moments, then combined count-weighted.  Throws
// std::runtime_error when the samples carry no variance at all.
QCalibration calibrate_q(const std::vector<CalibrationSample>& samples,
                         long min_count = 200);

// Plays seeded random games and records a sample at every position with at
// least one flip move, children evaluated statically.
std::vector<CalibrationSample> collect_calibration_samples(
    int games, unsigned seed, const EvalModel& model);

// Calibration shipped with the engine, frozen from seeded random playouts
// with the default evaluation model.
const QCalibration& default_q_calibration();

}  // namespace mgss
