#pragma once

// Depth-limited alpha-beta over the engine-facing game contract: the
// fixed-budget baseline the sampling engine is measured against.  Values are
// first-player oriented and the mover at each node picks its own extremum, so
// non-alternating move sequences (a pass in Othello) need no special casing.
//
// stats.nodes counts every generated successor -- one per apply() -- which is
// the same unit the sampling engine reports in stats.evals, keeping engine
// comparisons apples-to-apples.  In kStaticEval mode every generated
// successor is also statically evaluated once (the ordering pass doubles as
// the frontier value on the last ply); in kNone mode children are generated
// lazily and only frontier fetches cost an evaluation, which is what makes
// the classic best-case pruning counts reachable.

#include <algorithm>
#include <chrono>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mgss/game.hpp"

namespace mgss {

enum class MoveOrdering {
  kNone,        // generation order, lazy
  kStaticEval,  // pre-evaluate children, search best-first for the mover
};

struct AbConfig {
  int depth = 2;  // plies; must be >= 1
  MoveOrdering ordering = MoveOrdering::kStaticEval;
};

struct AbStats {
  long long nodes = 0;       // generated successors
  long long leaf_evals = 0;  // static evaluations used as frontier values
  double value = 0.0;        // first-player-oriented value at the depth limit
  double wall_seconds = 0.0;
};

template <GameModel G>
struct AbResult {
  typename G::Move move{};
  AbStats stats;
};

namespace detail {

template <GameModel G>
class AbSearcher {
 public:
  AbSearcher(const G& game, const AbConfig& cfg) : game_(game), cfg_(cfg) {}

  AbResult<G> run(const typename G::State& root) {
    const auto t0 = std::chrono::steady_clock::now();
    auto [value, move] = expand(root, cfg_.depth, -kInf, kInf);
    stats_.value = value;
    stats_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return {move, stats_};
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  double search(const typename G::State& s, int depth, double alpha,
                double beta) {
    if (game_.terminal(s)) return game_.exact_score_first(s);
    if (depth == 0) {
      ++stats_.leaf_evals;
      return game_.eval_first(s);
    }
    return expand(s, depth, alpha, beta).first;
  }

  // Child loop shared by the root (which needs the argbest move) and interior
  // nodes.  Fail-soft: with the root's open window the returned value is the
  // exact depth-limited minimax value; under a cutoff it is a sound bound.
  std::pair<double, typename G::Move> expand(const typename G::State& s,
                                             int depth, double alpha,
                                             double beta) {
    const bool maxing = game_.mover(s) == 0;
    const std::vector<typename G::Move> moves = game_.successors(s);
    double best = maxing ? -kInf : kInf;
    typename G::Move best_move = moves.front();

    auto step = [&](double v, const typename G::Move& m) {
      if (maxing ? v > best : v < best) {
        best = v;
        best_move = m;
      }
      if (maxing)
        alpha = std::max(alpha, best);
      else
        beta = std::min(beta, best);
      return alpha >= beta;
    };

    if (cfg_.ordering == MoveOrdering::kNone) {
      for (const auto& m : moves) {
        ++stats_.nodes;
        const typename G::State child = game_.apply(s, m);
        if (step(search(child, depth - 1, alpha, beta), m)) break;
      }
      return {best, best_move};
    }

    struct Scored {
      typename G::State state;
      typename G::Move move;
      double order_v;
      bool exact;
    };
    std::vector<Scored> kids;
    kids.reserve(moves.size());
    for (const auto& m : moves) {
      ++stats_.nodes;
      Scored k{game_.apply(s, m), m, 0.0, false};
      if (game_.terminal(k.state)) {
        k.exact = true;
        k.order_v = game_.exact_score_first(k.state);
      } else {
        k.order_v = game_.eval_first(k.state);
      }
      kids.push_back(std::move(k));
    }
    if (depth == 1) {
      // The ordering evaluations are exactly the frontier values.
      for (const Scored& k : kids) {
        if (!k.exact) ++stats_.leaf_evals;
        if (step(k.order_v, k.move)) break;
      }
      return {best, best_move};
    }
    std::stable_sort(kids.begin(), kids.end(),
                     [maxing](const Scored& a, const Scored& b) {
                       return maxing ? a.order_v > b.order_v
                                     : a.order_v < b.order_v;
                     });
    for (const Scored& k : kids) {
      const double v =
          k.exact ? k.order_v : search(k.state, depth - 1, alpha, beta);
      if (step(v, k.move)) break;
    }
    return {best, best_move};
  }

  const G& game_;
  const AbConfig& cfg_;
  AbStats stats_;
};

}  // namespace detail

template <GameModel G>
AbResult<G> alphabeta_search(const G& game, const typename G::State& root,
                             const AbConfig& cfg) {
  if (cfg.depth < 1)
    throw std::invalid_argument("alphabeta_search: depth must be >= 1");
  if (game.terminal(root))
    throw std::invalid_argument("alphabeta_search: root is terminal");
  detail::AbSearcher<G> searcher(game, cfg);
  return searcher.run(root);
}

}  // namespace mgss
