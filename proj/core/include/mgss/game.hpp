#pragma once

#include <concepts>
#include <vector>

namespace mgss {

// Contract required of a game used by the search engines.  States are
// immutable values and every operation is pure.  Successor enumeration is
// nonempty unless the state is terminal (a forced pass appears as the single
// successor move).  Scores and static evaluations are oriented positive-good
// for the first player; engines re-orient for the root player themselves.
template <class G>
concept GameModel = requires(const G& g, const typename G::State& s,
                             const typename G::Move& m) {
  { g.mover(s) } -> std::convertible_to<int>;
  { g.successors(s) } -> std::convertible_to<std::vector<typename G::Move>>;
  { g.apply(s, m) } -> std::convertible_to<typename G::State>;
  { g.terminal(s) } -> std::convertible_to<bool>;
  { g.exact_score_first(s) } -> std::convertible_to<double>;
  { g.eval_first(s) } -> std::convertible_to<double>;
  // Coarse progress measure used to pick the calibration bucket (disc count
  // for Othello).
  { g.phase_key(s) } -> std::convertible_to<int>;
};

}  // namespace mgss
