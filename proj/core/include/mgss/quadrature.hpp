#pragma once

#include <cmath>

namespace mgss {

namespace detail {

template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a, b] with absolute tolerance.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol, int max_depth = 48) {
  if (!(a < b)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

// Adaptive Simpson over an initial uniform partition.  A plain adaptive pass
// probes only the endpoints and midpoints of [a, b] first, so a narrow feature
// between probes can silently evaporate; seeding the recursion with nseg
// segments bounds how much structure a single estimate has to catch.
template <class F>
double adaptive_simpson_seg(F&& f, double a, double b, double abs_tol,
                            int nseg = 16, int max_depth = 40) {
  if (!(a < b)) return 0.0;
  const double h = (b - a) / nseg;
  const double seg_tol = abs_tol / nseg;
  double total = 0.0;
  for (int i = 0; i < nseg; ++i) {
    const double lo = a + i * h;
    const double hi = i + 1 == nseg ? b : a + (i + 1) * h;
    total += adaptive_simpson(f, lo, hi, seg_tol, max_depth);
  }
  return total;
}

}  // namespace mgss
