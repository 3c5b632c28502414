// Microbenchmarks for the hot paths: distribution backups, the Othello move
// machinery, decision pricing, and whole move decisions by both engines.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mgss/alphabeta.hpp"
#include "mgss/backup.hpp"
#include "mgss/engine.hpp"
#include "mgss/eval.hpp"
#include "mgss/order_stats.hpp"
#include "mgss/search_tree.hpp"
#include "mgss/voc.hpp"

namespace {

using namespace mgss;

void BM_BackupMin(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const NormalParams q{0.2, 0.8};
  double m = -2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(backup_min(l, q, m));
    m = m > 2.0 ? -2.0 : m + 1e-3;  // roam the interpolation table
  }
}
BENCHMARK(BM_BackupMin)->Arg(1)->Arg(5)->Arg(30);

void BM_BackupMinExact(benchmark::State& state) {
  const NormalParams q{0.2, 0.8};
  for (auto _ : state)
    benchmark::DoNotOptimize(backup_min_exact(7, q, 0.3));
}
BENCHMARK(BM_BackupMinExact);

void BM_MinDensity(benchmark::State& state) {
  const MinStatModel m{NormalParams{0.0, 1.0}, 9};
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pdf_min(m, x));
    benchmark::DoNotOptimize(cdf_min(m, x));
    x = x > 3.0 ? -3.0 : x + 1e-3;
  }
}
BENCHMARK(BM_MinDensity);

OthelloBoard midgame_position(int plies, std::uint64_t seed) {
  const OthelloGame game;
  std::mt19937_64 rng(seed);
  OthelloBoard s = initial_board();
  for (int i = 0; i < plies && !game.terminal(s); ++i) {
    const std::vector<int> moves = game.successors(s);
    std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
    s = game.apply(s, moves[pick(rng)]);
  }
  return s;
}

void BM_LegalMoves(benchmark::State& state) {
  const OthelloBoard s = midgame_position(20, 5);
  for (auto _ : state) benchmark::DoNotOptimize(legal_moves(s));
}
BENCHMARK(BM_LegalMoves);

void BM_ApplyMove(benchmark::State& state) {
  const OthelloBoard s = midgame_position(20, 5);
  const int m = legal_moves(s).front();
  for (auto _ : state) benchmark::DoNotOptimize(apply_move(s, m));
}
BENCHMARK(BM_ApplyMove);

void BM_StaticEval(benchmark::State& state) {
  const OthelloBoard s = midgame_position(20, 5);
  const EvalModel model = default_eval_model();
  for (auto _ : state) benchmark::DoNotOptimize(eval_black(s, model));
}
BENCHMARK(BM_StaticEval);

// Root max over a settled incumbent and a live min challenger: the canonical
// pricing call, integral included.
void BM_ExpectedBenefit(benchmark::State& state) {
  SearchTree t;
  t.init_root(NodeKind::kMax, 2, NormalParams{0.5, 1.0}, 0.5);
  t.add_child(SearchTree::kRoot, 0, NodeKind::kMin, 0, NormalParams{0.75, 1.0},
              0.75, true, 0.75);
  const int b = t.add_child(SearchTree::kRoot, 1, NodeKind::kMin, 3,
                            NormalParams{1.0, 0.5}, 1.0, false, 0.0);
  t.add_child(b, 10, NodeKind::kMax, 0, NormalParams{0.8, 1.0}, 0.8, true, 0.8);
  t.add_child(b, 11, NodeKind::kMax, 0, NormalParams{1.2, 1.0}, 1.2, true, 1.2);
  t.recompute_all();
  const PathContext path = make_path(t, b);
  const VocParams params;
  for (auto _ : state)
    benchmark::DoNotOptimize(expected_benefit(t, path, b, 1, params));
}
BENCHMARK(BM_ExpectedBenefit);

void BM_Mgss2Move(benchmark::State& state) {
  const OthelloGame game;
  const OthelloBoard s = midgame_position(8, 11);
  const QCalibration& cal = default_q_calibration();
  VocParams params;
  params.kappa = 0.05;
  params.max_expansions = state.range(0);
  std::uint64_t seed = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(mgss2_search(game, s, cal, params, seed++));
}
BENCHMARK(BM_Mgss2Move)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_AlphaBetaMove(benchmark::State& state) {
  const OthelloGame game;
  const OthelloBoard s = midgame_position(8, 11);
  const AbConfig cfg{static_cast<int>(state.range(0)),
                     MoveOrdering::kStaticEval};
  for (auto _ : state)
    benchmark::DoNotOptimize(alphabeta_search(game, s, cfg));
}
BENCHMARK(BM_AlphaBetaMove)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
