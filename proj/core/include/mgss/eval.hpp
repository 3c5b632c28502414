#pragma once

#include <array>

#include "mgss/othello.hpp"

namespace mgss {

// Static evaluation in raw evaluation units, oriented positive-good-for-black
// and antisymmetric under color swap.  Terms: per-square positional weights,
// mobility difference, and a disc-differential term ramped in near the end of
// the game.
struct EvalModel {
  std::array<double, 64> square_w{};
  double mobility_w = 8.0;
  double disc_w = 12.0;
  int disc_ramp_from = 44;  // ramp 0 -> 1 between this disc count and 64

  bool operator==(const EvalModel&) const = default;
};

EvalModel default_eval_model();

// Antisymmetric static evaluation; meaningful for non-terminal positions
// (terminal positions are scored by exact_score_black).
double eval_black(const OthelloBoard& b, const EvalModel& m);

// Exact score for a finished game: the winner's side gets sign * 30000 plus
// 10 per disc of differential, a draw scores 0.  The offset dwarfs any static
// evaluation so resolved wins always dominate heuristic values.
double exact_score_black(const OthelloBoard& b);

// Upper bound on |eval_black| over all positions, derived from the weights.
double eval_bound(const EvalModel& m);

// View of the game fulfilling the engine-facing contract (game.hpp): pass as
// forced successor, first-player (black) oriented values.
class OthelloGame {
 public:
  using State = OthelloBoard;
  using Move = int;

  OthelloGame() : model_(default_eval_model()) {}
  explicit OthelloGame(const EvalModel& model) : model_(model) {}

  int mover(const State& s) const { return s.mover; }
  bool terminal(const State& s) const { return is_terminal(s); }
  State apply(const State& s, Move m) const { return apply_move(s, m); }
  double eval_first(const State& s) const { return eval_black(s, model_); }
  double exact_score_first(const State& s) const { return exact_score_black(s); }
  int phase_key(const State& s) const { return disc_count(s); }

  std::vector<Move> successors(const State& s) const {
    std::vector<Move> moves = legal_moves(s);
    if (moves.empty()) moves.push_back(kPassMove);
    return moves;
  }

  const EvalModel& eval_model() const { return model_; }

 private:
  EvalModel model_;
};

}  // namespace mgss
