#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "mgss/alphabeta.hpp"
#include "mgss/eval.hpp"
#include "support/toy_game.hpp"
#include "support/tree_oracles.hpp"

using namespace mgss;
using namespace mgss::testing;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

// Forwards a toy game while counting exact-score fetches, i.e. how many
// terminal leaves the search actually examined.
class CountingToy {
 public:
  using State = int;
  using Move = int;

  explicit CountingToy(ToyGame g) : g_(std::move(g)) {}

  int mover(State s) const { return g_.mover(s); }
  bool terminal(State s) const { return g_.terminal(s); }
  State apply(State s, Move m) const { return g_.apply(s, m); }
  double eval_first(State s) const { return g_.eval_first(s); }
  double exact_score_first(State s) const {
    ++exact_calls;
    return g_.exact_score_first(s);
  }
  int phase_key(State) const { return 0; }
  std::vector<Move> successors(State s) const { return g_.successors(s); }

  mutable long long exact_calls = 0;

 private:
  ToyGame g_;
};

// Uniform alternating tree of exact depth/branching with continuous leaf
// scores (distinct almost surely, so argmaxes are unique).
std::vector<ToyNode> uniform_nodes(int depth, int branch,
                                   std::mt19937_64& rng) {
  std::vector<ToyNode> nodes;
  std::uniform_real_distribution<double> leaf(-1.0, 1.0);
  struct Item {
    int id;
    int depth;
  };
  nodes.push_back(ToyNode{0, 0.0, 0.0, {}});
  std::vector<Item> stack{{0, 0}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    if (it.depth == depth) {
      nodes[it.id].score = leaf(rng);
      continue;
    }
    for (int i = 0; i < branch; ++i) {
      const int kid = static_cast<int>(nodes.size());
      nodes.push_back(ToyNode{(nodes[it.id].mover + 1) % 2, 0.0, 0.0, {}});
      nodes[it.id].kids.push_back(kid);
      stack.push_back({kid, it.depth + 1});
    }
  }
  return nodes;
}

double node_minimax(const std::vector<ToyNode>& nodes, int s) {
  const ToyNode& nd = nodes[s];
  if (nd.kids.empty()) return nd.score;
  double best = nd.mover == 0 ? -kInf : kInf;
  for (const int k : nd.kids) {
    const double v = node_minimax(nodes, k);
    best = nd.mover == 0 ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

// Reorder every node's children best-first for that node's mover.
void sort_best_first(std::vector<ToyNode>& nodes, int s) {
  ToyNode& nd = nodes[s];
  for (const int k : nd.kids) sort_best_first(nodes, k);
  std::stable_sort(nd.kids.begin(), nd.kids.end(), [&](int a, int b) {
    const double va = node_minimax(nodes, a);
    const double vb = node_minimax(nodes, b);
    return nd.mover == 0 ? va > vb : va < vb;
  });
}

long long ipow(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

TEST_CASE("alpha-beta matches unpruned minimax on random trees") {
  auto rng = make_rng(404);
  for (int trial = 0; trial < 12; ++trial) {
    const int tree_depth = 4 + trial % 2;
    const ToyGame g = random_toy_game(tree_depth, 4, 0.3, rng);
    for (int depth = 1; depth <= 5; ++depth) {
      BruteMinimax<ToyGame> brute{g};
      const auto [bv, bm] = brute.root(0, depth);
      for (const MoveOrdering ord :
           {MoveOrdering::kNone, MoveOrdering::kStaticEval}) {
        const AbResult<ToyGame> r =
            alphabeta_search(g, 0, AbConfig{depth, ord});
        INFO("trial ", trial, " depth ", depth, " ordered ",
             ord == MoveOrdering::kStaticEval);
        CHECK(r.stats.value == bv);
        CHECK(r.move == bm);
        CHECK(r.stats.nodes <= brute.nodes);
      }
    }
  }
}

TEST_CASE("single legal move: the search never leaves the forced line") {
  // Forced root, then a two-level subtree with distinct leaf scores.
  const ToyGame g(std::vector<ToyNode>{
      {0, 0.00, 0.0, {1}},
      {1, 0.10, 0.0, {2, 3}},
      {0, 0.25, 0.0, {4, 5}},
      {0, -0.15, 0.0, {6, 7}},
      {1, 0.0, 0.31, {}},
      {1, 0.0, -0.62, {}},
      {1, 0.0, 0.44, {}},
      {1, 0.0, -0.08, {}},
  });

  for (const MoveOrdering ord :
       {MoveOrdering::kNone, MoveOrdering::kStaticEval}) {
    const AbResult<ToyGame> whole =
        alphabeta_search(g, 0, AbConfig{3, ord});
    const AbResult<ToyGame> inner =
        alphabeta_search(g, 1, AbConfig{2, ord});
    CHECK(whole.move == 0);
    CHECK(whole.stats.nodes == 1 + inner.stats.nodes);
    CHECK(whole.stats.value == inner.stats.value);
  }
}

TEST_CASE("perfectly ordered uniform trees hit the classic best-case counts") {
  auto rng = make_rng(99);
  const std::pair<int, int> shapes[] = {{2, 2}, {2, 3}, {2, 4}, {2, 6},
                                        {3, 2}, {3, 3}, {3, 4}, {4, 3}};
  for (const auto& [branch, depth] : shapes) {
    std::vector<ToyNode> nodes = uniform_nodes(depth, branch, rng);
    sort_best_first(nodes, 0);
    const double truth = node_minimax(nodes, 0);
    CountingToy g(ToyGame{std::move(nodes)});

    const AbResult<CountingToy> r =
        alphabeta_search(g, 0, AbConfig{depth, MoveOrdering::kNone});
    const long long want =
        ipow(branch, (depth + 1) / 2) + ipow(branch, depth / 2) - 1;
    INFO("branch ", branch, " depth ", depth);
    CHECK(g.exact_calls == want);
    CHECK(r.stats.value == truth);
  }
}

TEST_CASE("guards: bad depth and terminal roots are rejected") {
  const ToyGame g(std::vector<ToyNode>{ToyNode{0, 0.0, 0.5, {}}});
  CHECK_THROWS_AS(alphabeta_search(g, 0, AbConfig{2, MoveOrdering::kNone}),
                  std::invalid_argument);
  auto rng = make_rng(1);
  const ToyGame live = random_toy_game(2, 3, 0.1, rng);
  CHECK_THROWS_AS(alphabeta_search(live, 0, AbConfig{0, MoveOrdering::kNone}),
                  std::invalid_argument);
}

TEST_CASE("full game: legal opening move and the shallow brute-force value") {
  const OthelloGame game;
  const OthelloBoard start = initial_board();
  const std::vector<int> legal = legal_moves(start);

  for (int depth = 1; depth <= 3; ++depth) {
    BruteMinimax<OthelloGame> brute{game};
    const auto [bv, bm] = brute.root(start, depth);
    for (const MoveOrdering ord :
         {MoveOrdering::kNone, MoveOrdering::kStaticEval}) {
      const AbResult<OthelloGame> r =
          alphabeta_search(game, start, AbConfig{depth, ord});
      INFO("depth ", depth, " ordered ", ord == MoveOrdering::kStaticEval);
      CHECK(std::count(legal.begin(), legal.end(), r.move) == 1);
      CHECK(r.stats.value == bv);
      CHECK(r.stats.nodes <= brute.nodes);
      CHECK(r.stats.nodes >= static_cast<long long>(legal.size()));
    }
  }
}
