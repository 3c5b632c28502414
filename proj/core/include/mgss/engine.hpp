#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mgss/calibration.hpp"
#include "mgss/game.hpp"
#include "mgss/search_tree.hpp"
#include "mgss/voc.hpp"

namespace mgss {

struct SearchStats {
  long long evals = 0;       // successor nodes generated, root batch included
  long long iterations = 0;  // selection rounds
  long long expansions = 0;  // batches drawn beyond the root
  long long candidates_scored = 0;  // full net evaluations
  std::string stop_reason;          // forced | converged | budget
  double wall_seconds = 0.0;
  double chosen_value = 0.0;
  int tree_nodes = 0;
};

template <GameModel G>
struct MgssResult {
  typename G::Move move;
  SearchStats stats;
  SearchTree tree;
};

// Decision-driven successive expansion: grows the tree one priced batch at a
// time, always at the node whose evaluation is currently worth the most to
// the root decision, and stops when no computation is worth its cost.
// max_expansions caps successor draws beyond the root batch.  When `trace`
// is given, every selection round dumps the candidate table to it.
template <GameModel G>
MgssResult<G> mgss2_search(const G& game, const typename G::State& root,
                           const QCalibration& cal, const VocParams& params,
                           std::uint64_t seed, std::ostream* trace = nullptr) {
  using Move = typename G::Move;
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  if (game.terminal(root))
    throw std::invalid_argument("mgss2_search: root is terminal");

  SearchStats st;
  const std::vector<Move> root_moves = game.successors(root);
  if (root_moves.size() == 1) {
    st.stop_reason = "forced";
    st.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return {root_moves.front(), std::move(st), SearchTree{}};
  }

  const int root_mover = game.mover(root);
  const auto orient = [&](double v) { return root_mover == 0 ? v : -v; };

  SearchTree tree;
  std::vector<typename G::State> states;     // per node
  std::vector<std::vector<Move>> remaining;  // unexpanded moves per node
  std::vector<Move> via;                     // move that created each node
  std::vector<int> top_of;                   // top-level ancestor per node

  const auto node_kind = [&](const typename G::State& s) {
    return game.mover(s) == root_mover ? NodeKind::kMax : NodeKind::kMin;
  };
  const auto node_q = [&](const typename G::State& s, NodeKind kind, int n,
                          double eval) {
    const QBucket& b = cal.lookup(game.phase_key(s), n);
    return kind == NodeKind::kMin ? NormalParams{eval - b.dmu, b.sigma}
                                  : NormalParams{eval + b.dmu, b.sigma};
  };

  // Creates the node for `s` reached from `parent` by `m` and registers the
  // bookkeeping rows.  Counts one successor evaluation.
  const auto grow = [&](int parent, const typename G::State& s, Move m) {
    ++st.evals;
    int idx;
    if (game.terminal(s)) {
      idx = tree.add_child(parent, static_cast<int>(states.size()),
                           NodeKind::kMin, 0, NormalParams{0.0, 1.0}, 0.0,
                           true, orient(game.exact_score_first(s)));
      remaining.emplace_back();
    } else {
      const NodeKind kind = node_kind(s);
      const double eval = orient(game.eval_first(s));
      std::vector<Move> moves = game.successors(s);
      const int n = static_cast<int>(moves.size());
      idx = tree.add_child(parent, static_cast<int>(states.size()), kind, n,
                           node_q(s, kind, n, eval), eval, false, 0.0);
      remaining.push_back(std::move(moves));
    }
    states.push_back(s);
    via.push_back(m);
    top_of.push_back(parent == SearchTree::kRoot ? idx : top_of[parent]);
    return idx;
  };

  {
    const NodeKind kind = NodeKind::kMax;
    const double eval = orient(game.eval_first(root));
    const int n = static_cast<int>(root_moves.size());
    tree.init_root(kind, n, node_q(root, kind, n, eval), eval);
    states.push_back(root);
    remaining.emplace_back();  // root children are all created up front
    via.push_back(root_moves.front());
    top_of.push_back(SearchTree::kRoot);
    for (const Move& m : root_moves) grow(SearchTree::kRoot, game.apply(root, m), m);
    tree.backup_path(SearchTree::kRoot);
  }

  std::mt19937_64 rng(seed);
  const auto draw_move = [&](int node) {
    std::vector<Move>& rem = remaining[node];
    std::uniform_int_distribution<std::size_t> pick(0, rem.size() - 1);
    std::swap(rem[pick(rng)], rem.back());
    const Move m = rem.back();
    rem.pop_back();
    return m;
  };

  // Cached pricing per candidate, invalidated by generation stamps: the
  // global stamp moves when the root decision frame (best move, alpha,
  // alpha2) moves, the per-subtree stamp when anything under that top-level
  // move changes.
  struct Score {
    NetValue nv;
    bool relevant = false;
    std::uint64_t gen_global = ~0ull;
    std::uint64_t gen_top = ~0ull;
  };
  std::vector<Score> scores(states.size());
  std::vector<std::uint64_t> top_gen(states.size(), 0);
  std::uint64_t global_gen = 0;
  std::vector<int> candidates;
  for (int i = 1; i < tree.size(); ++i)
    if (tree.at(i).expandable()) candidates.push_back(i);

  const auto decision_frame = [&] {
    return std::tuple<int, double, double>(tree.best_top_child(), tree.alpha(),
                                           tree.alpha2());
  };

  long long expansion_evals = 0;
  st.stop_reason = "converged";
  while (true) {
    ++st.iterations;
    int best = -1;
    NetValue best_nv;
    std::size_t keep = 0;
    for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
      const int c = candidates[ci];
      if (!tree.at(c).expandable()) continue;  // resolved or drained
      candidates[keep++] = c;
      Score& sc = scores[c];
      if (sc.gen_global != global_gen || sc.gen_top != top_gen[top_of[c]]) {
        sc.gen_global = global_gen;
        sc.gen_top = top_gen[top_of[c]];
        const PathContext path = make_path(tree, c);
        sc.relevant = is_relevant(tree, path, c);
        if (!sc.relevant) {
          sc.nv = NetValue{-std::numeric_limits<double>::infinity(), 0.0, 1,
                           BenefitCase::kZero};
        } else if (benefit_upper_bound(tree, path, c, params) <= params.kappa) {
          // Cannot price above cost for any batch; skip the integral.
          sc.nv =
              NetValue{-params.kappa, 0.0, 1, BenefitCase::kZero};
        } else {
          sc.nv = net_value(tree, path, c, params);
          ++st.candidates_scored;
        }
      }
      if (sc.nv.net <= 0.0) continue;
      const bool wins =
          best < 0 || sc.nv.net > best_nv.net ||
          (sc.nv.net == best_nv.net &&
           (tree.at(c).depth < tree.at(best).depth ||
            (tree.at(c).depth == tree.at(best).depth && c < best)));
      if (wins) {
        best = c;
        best_nv = sc.nv;
      }
    }
    candidates.resize(keep);
    if (trace) {
      const auto [bt, al, a2] = decision_frame();
      *trace << "iter " << st.iterations << ": best_top=" << bt
             << " alpha=" << al << " alpha2=" << a2 << " candidates=" << keep
             << "\n";
      for (const int c : candidates) {
        const Score& sc = scores[c];
        *trace << "  node " << c << " depth " << tree.at(c).depth << " top "
               << top_of[c];
        if constexpr (requires(std::ostream& os, const Move& mv) { os << mv; })
          *trace << " via " << via[c];
        if (!sc.relevant)
          *trace << "  irrelevant\n";
        else
          *trace << "  benefit " << sc.nv.benefit << " s " << sc.nv.s
                 << " net " << sc.nv.net << " case " << to_string(sc.nv.tag)
                 << "\n";
      }
      if (best >= 0)
        *trace << "  -> expand node " << best << ", batch " << best_nv.s
               << "\n";
      else
        *trace << "  -> stop: nothing is worth its cost\n";
    }
    if (best < 0) break;  // nothing worth its cost
    if (params.max_expansions >= 0 &&
        expansion_evals + best_nv.s > params.max_expansions) {
      st.stop_reason = "budget";
      break;
    }

    const auto before = decision_frame();
    for (int d = 0; d < best_nv.s; ++d) {
      const Move m = draw_move(best);
      const int child = grow(best, game.apply(states[best], m), m);
      scores.resize(states.size());
      top_gen.resize(states.size(), 0);
      if (tree.at(child).expandable()) candidates.push_back(child);
    }
    expansion_evals += best_nv.s;
    ++st.expansions;
    tree.backup_path(best);
    ++top_gen[top_of[best]];
    if (decision_frame() != before) ++global_gen;
  }

  const int chosen = tree.best_top_child();
  st.chosen_value = tree.alpha();
  st.tree_nodes = tree.size();
  st.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  MgssResult<G> out{via[chosen], std::move(st), std::move(tree)};
  return out;
}

}  // namespace mgss
