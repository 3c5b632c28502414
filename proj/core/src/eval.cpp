#include "mgss/eval.hpp"

#include <bit>
#include <cmath>

namespace mgss {
namespace {

// Rank 1 first; symmetric under rotation/reflection so the same table serves
// both colors.
constexpr double kSquareW[64] = {
    100, -20, 10,  5,   5,   10,  -20, 100,  //
    -20, -50, -2,  -2,  -2,  -2,  -50, -20,  //
    10,  -2,  1,   0,   0,   1,   -2,  10,   //
    5,   -2,  0,   1,   1,   0,   -2,  5,    //
    5,   -2,  0,   1,   1,   0,   -2,  5,    //
    10,  -2,  1,   0,   0,   1,   -2,  10,   //
    -20, -50, -2,  -2,  -2,  -2,  -50, -20,  //
    100, -20, 10,  5,   5,   10,  -20, 100,
};

double square_term(std::uint64_t discs, const EvalModel& m) {
  double s = 0.0;
  while (discs) {
    s += m.square_w[std::countr_zero(discs)];
    discs &= discs - 1;
  }
  return s;
}

}  // namespace

EvalModel default_eval_model() {
  EvalModel m;
  for (int i = 0; i < 64; ++i) m.square_w[i] = kSquareW[i];
  return m;
}

double eval_black(const OthelloBoard& b, const EvalModel& m) {
  const double positional = square_term(b.black, m) - square_term(b.white, m);
  const double mobility =
      m.mobility_w * (std::popcount(flank_moves(b, 0)) -
                      std::popcount(flank_moves(b, 1)));
  const int discs = disc_count(b);
  double ramp = 0.0;
  if (discs > m.disc_ramp_from) {
    ramp = static_cast<double>(discs - m.disc_ramp_from) /
           static_cast<double>(64 - m.disc_ramp_from);
    if (ramp > 1.0) ramp = 1.0;
  }
  return positional + mobility + ramp * m.disc_w * disc_diff_black(b);
}

double exact_score_black(const OthelloBoard& b) {
  const int dd = disc_diff_black(b);
  if (dd == 0) return 0.0;
  return (dd > 0 ? 30000.0 : -30000.0) + 10.0 * dd;
}

double eval_bound(const EvalModel& m) {
  double w = 0.0;
  for (double x : m.square_w) w += std::abs(x);
  return w + std::abs(m.mobility_w) * 64.0 + std::abs(m.disc_w) * 64.0;
}

}  // namespace mgss
