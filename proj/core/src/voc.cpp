#include "mgss/voc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mgss/backup.hpp"
#include "mgss/normal.hpp"
#include "mgss/order_stats.hpp"
#include "mgss/quadrature.hpp"

namespace mgss {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSupportZ = 8.5;  // draw support truncation in sigmas

// The benefit machinery works on a min-oriented target: new draws can only
// pull its value down through min(extremum, u).  Max targets are mirrored
// through x -> -x (stages, q, extremum, bar all negate), which also flips
// which side of the bar carries the gain:
//   raise: decision improves when the frame top value climbs above bar
//          (a non-best subtree overtaking alpha, or the best one shown to
//          fall below alpha2 in mirrored coordinates);
//   drop:  decision improves when the frame top value falls below bar.
struct Frame {
  std::vector<PathStage> stages;
  NormalParams q;      // successor draw distribution, frame-oriented
  double mink = kInf;  // extremum over known children (+inf with none)
  double bar = 0.0;
  bool raise = true;
  int l = 0;           // unexpanded successors of the target
  int critical = -1;   // stage kept exact in single-stage mode
};

Frame make_frame(const SearchTree& t, const PathContext& path, int target,
                 const VocParams& params) {
  const SearchNode& nd = t.at(target);
  Frame fr;
  const bool reflect = nd.kind == NodeKind::kMax;
  fr.stages = reflect ? reflect_stages(path.stages) : path.stages;
  fr.q = reflect ? NormalParams{-nd.q.mean, nd.q.std} : nd.q;
  fr.l = nd.l();
  if (nd.k() > 0) {
    const double raw = t.extremum_k(target);
    fr.mink = reflect ? -raw : raw;
  }
  fr.raise = path.under_best == reflect;
  fr.bar = path.under_best ? (reflect ? -path.alpha2 : path.alpha2)
                           : (reflect ? -path.alpha : path.alpha);
  if (params.f_mode == FMode::kSingleStage && !fr.stages.empty()) {
    const double reach = fr.raise ? compose_f_full(fr.stages, kInf)
                                  : compose_f_full(fr.stages, -kInf);
    fr.critical = most_critical_stage(fr.stages, std::min(fr.bar, reach),
                                      std::max(fr.bar, reach));
  }
  return fr;
}

double apply_f(const Frame& fr, double x) {
  if (fr.critical >= 0) return compose_f_single(fr.stages, fr.critical, x);
  return compose_f_full(fr.stages, x);
}

// Signed gain of a frame top value; positive is useful.
double gain_of(const Frame& fr, double y) {
  return fr.raise ? y - fr.bar : fr.bar - y;
}

}  // namespace

BenefitResult expected_benefit(const SearchTree& t, const PathContext& path,
                               int target, int s, const VocParams& params) {
  const SearchNode& nd = t.at(target);
  if (s < 1 || s > nd.l())
    throw std::invalid_argument("expected_benefit: batch size out of range");
  const Frame fr = make_frame(t, path, target, params);
  const int tt = fr.l - s;  // successors still unexpanded after the batch

  // New target value as a function of the lowest draw.
  const auto gmap = [&](double u) {
    return backup_min(tt, fr.q, std::min(fr.mink, u));
  };
  const auto top_of = [&](double u) { return apply_f(fr, gmap(u)); };

  // Largest gain any draw can produce: the capped end for a raise, an
  // unboundedly low draw for a drop.
  const double sup_gain =
      fr.raise ? gain_of(fr, top_of(fr.mink)) : gain_of(fr, top_of(-kInf));
  if (!(sup_gain > 0.0)) return {0.0, BenefitCase::kZero};

  if (fr.q.exact()) {  // degenerate spread: every draw equals the mean
    const double v = std::max(0.0, gain_of(fr, top_of(fr.q.mean)));
    return {v, v > 0.0 ? BenefitCase::kBoundary : BenefitCase::kZero};
  }

  const double lo = fr.q.mean - kSupportZ * fr.q.std;
  const double hi = std::min(fr.mink, fr.q.mean + kSupportZ * fr.q.std);

  double integral = 0.0;
  if (hi > lo) {
    // The top value is monotone nondecreasing in the draw, so the gain
    // region is a single interval ending (raise) or starting (drop) at the
    // bar crossing.
    double a = lo, b = hi;
    const double glo = gain_of(fr, top_of(lo));
    const double ghi = gain_of(fr, top_of(hi));
    bool any = true;
    if (fr.raise) {
      if (!(ghi > 0.0)) {
        any = false;
      } else if (glo < 0.0) {
        double x0 = lo, x1 = hi;  // gain(x0) < 0 <= gain(x1)
        for (int it = 0; it < 80; ++it) {
          const double xm = 0.5 * (x0 + x1);
          (gain_of(fr, top_of(xm)) < 0.0 ? x0 : x1) = xm;
        }
        a = x1;
      }
    } else {
      if (!(glo > 0.0)) {
        any = false;  // positive part lies beyond the support tail
      } else if (ghi < 0.0) {
        double x0 = lo, x1 = hi;  // gain(x0) > 0 >= gain(x1)
        for (int it = 0; it < 80; ++it) {
          const double xm = 0.5 * (x0 + x1);
          (gain_of(fr, top_of(xm)) > 0.0 ? x0 : x1) = xm;
        }
        b = x0;
      }
    }
    if (any && b > a) {
      const MinStatModel draw{fr.q, s};
      integral = adaptive_simpson_seg(
          [&](double u) {
            return pdf_min(draw, u) * std::max(0.0, gain_of(fr, top_of(u)));
          },
          a, b, params.quad_tol, 20);
    }
  }

  // Atom at the known-children extremum: draws entirely above it leave the
  // target's extremum untouched.
  double point = 0.0;
  if (std::isfinite(fr.mink)) {
    const double pm = 1.0 - cdf_min(MinStatModel{fr.q, s}, fr.mink);
    if (pm > 0.0) {
      const double y = params.cap_point_mass_at_delta
                           ? top_of(fr.mink)
                           : compose_f_pure(fr.stages, gmap(fr.mink));
      point = pm * std::max(0.0, gain_of(fr, y));
    }
  }

  const double value = std::max(0.0, integral + point);

  BenefitCase tag = BenefitCase::kBoundary;
  if (fr.raise) {
    // Interior regime: the clamped composition saturates below the pure
    // chain already at the capped end, i.e. the plateau starts before the
    // atom.
    const double pure_sup = compose_f_pure(fr.stages, gmap(fr.mink));
    if (pure_sup > top_of(fr.mink) + 1e-9) tag = BenefitCase::kInterior;
  } else {
    const double floor_y = top_of(-kInf);
    if (std::isfinite(floor_y) && top_of(lo) <= floor_y + 1e-9)
      tag = BenefitCase::kInterior;
  }
  return {value, tag};
}

double benefit_upper_bound(const SearchTree& t, const PathContext& path,
                           int target, const VocParams& params) {
  const Frame fr = make_frame(t, path, target, params);
  // Valid for every batch size: the largest batch leaves no b-shrinkage
  // between the draw and the target value, so the frame top can reach
  // f(mink) on a raise; any drop bottoms out at f(-inf) regardless.
  const double y = fr.raise ? apply_f(fr, fr.mink) : apply_f(fr, -kInf);
  return std::max(0.0, gain_of(fr, y));
}

NetValue net_value(const SearchTree& t, const PathContext& path, int target,
                   const VocParams& params) {
  const SearchNode& nd = t.at(target);
  const int l = nd.l();
  if (l < 1) throw std::invalid_argument("net_value: target not expandable");

  std::vector<int> sizes;
  for (int s : params.batch_sizes)
    if (s >= 1 && s < l) sizes.push_back(s);
  sizes.push_back(l);  // full resolution is always a candidate

  NetValue out;
  out.s = sizes.front();
  if (benefit_upper_bound(t, path, target, params) <= 0.0) {
    out.net = -params.kappa * out.s;
    return out;
  }

  double best_rate = -kInf;
  BenefitResult best{};
  for (int s : sizes) {
    const BenefitResult r = expected_benefit(t, path, target, s, params);
    const double rate = r.value / s;
    if (rate > best_rate) {
      best_rate = rate;
      best = r;
      out.s = s;
    }
  }
  out.benefit = best.value;
  out.tag = best.tag;
  out.net = best.value - params.kappa * out.s;
  return out;
}

}  // namespace mgss
