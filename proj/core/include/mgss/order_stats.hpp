#pragma once

#include "mgss/normal.hpp"

namespace mgss {

// Distribution of the minimum of `remaining` i.i.d. draws from `base`.
struct MinStatModel {
  NormalParams base;
  int remaining = 0;
};

// Minimum of the draws, truncated from above at a known value: below the
// truncation point the density is the plain min density, and all remaining
// probability sits as a point mass at the truncation value itself.
struct TruncatedMinModel {
  MinStatModel model;
  double truncation = 0.0;
};

// P(min of l draws <= x).  l == 0 means no draws: the cdf is identically 0.
double cdf_min(const MinStatModel& m, double x);
// Density of the minimum.  Errors (std::domain_error) when remaining == 0.
double pdf_min(const MinStatModel& m, double x);

// Duals for the maximum of the draws.
double cdf_max(const MinStatModel& m, double x);
double pdf_max(const MinStatModel& m, double x);

// Probability carried by the atom at the truncation value.
double truncated_point_mass(const TruncatedMinModel& t);
double truncated_cdf(const TruncatedMinModel& t, double x);
// Mean of the truncated distribution; equals backup_min of the same parameters.
double truncated_mean(const TruncatedMinModel& t);

// Moments of the extreme order statistic, by direct quadrature (independent of
// the interpolation table).  expected_min errors when l < 1; std == 0 collapses
// everything onto the mean.
double expected_min_exact(int l, const NormalParams& q);
double expected_max_exact(int l, const NormalParams& q);
// Standard deviation of the min (== max) of l standard normal draws.
double min_stat_std(int l);

}  // namespace mgss
