#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgss/eval.hpp"
#include "mgss/othello.hpp"
#include "support/mc_oracles.hpp"
#include "support/othello_oracle.hpp"

using namespace mgss;
namespace mt = mgss::testing;
using namespace mgss::testing;

namespace {

OthelloBoard swap_colors(const OthelloBoard& b) {
  OthelloBoard s = b;
  std::swap(s.black, s.white);
  s.mover ^= 1;
  return s;
}

OthelloBoard board_from(std::uint64_t black, std::uint64_t white, int mover) {
  OthelloBoard b;
  b.black = black;
  b.white = white;
  b.mover = static_cast<std::uint8_t>(mover);
  return b;
}

}  // namespace

TEST_CASE("initial position") {
  const OthelloBoard b = initial_board();
  CHECK(disc_count(b) == 4);
  CHECK(disc_diff_black(b) == 0);
  CHECK(!is_terminal(b));
  const std::vector<int> moves = legal_moves(b);
  REQUIRE(moves.size() == 4);
  // d3, c4, f5, e6 in ascending square order.
  CHECK(moves == std::vector<int>{19, 26, 37, 44});
  CHECK(eval_black(b, default_eval_model()) == 0.0);
}

TEST_CASE("first move flips one disc") {
  const OthelloBoard b = initial_board();
  const OthelloBoard after = apply_move(b, coord_to_move("d3"));
  CHECK(std::popcount(after.black) == 4);
  CHECK(std::popcount(after.white) == 1);
  CHECK(after.mover == 1);
  CHECK(after.passes == 0);
  CHECK((after.black & after.white) == 0);
}

TEST_CASE("movegen matches flanking oracle on random positions") {
  auto rng = mt::make_rng(811);
  int positions = 0, discrepancies = 0;
  while (positions < 10000) {
    const int plies = static_cast<int>(rng() % 61);
    const OthelloBoard b = random_board(rng, plies);
    const ArrayBoard a = to_array(b);
    ++positions;
    for (int side = 0; side < 2; ++side) {
      std::uint64_t mask = flank_moves(b, side);
      std::vector<int> got;
      while (mask) {
        got.push_back(std::countr_zero(mask));
        mask &= mask - 1;
      }
      if (got != oracle_moves(a, side)) ++discrepancies;
    }
    // Flip sets and application agree move by move for the mover.
    for (int sq : legal_moves(b)) {
      const std::uint64_t want = oracle_flips(a, b.mover, sq);
      if (flips_for(b, sq) != want) ++discrepancies;
      const OthelloBoard next = apply_move(b, sq);
      const std::uint64_t bit = 1ull << sq;
      const std::uint64_t own = b.mover == 0 ? next.black : next.white;
      const std::uint64_t opp = b.mover == 0 ? next.white : next.black;
      if (own != (b.own() | bit | want) || opp != (b.opp() & ~want)) {
        ++discrepancies;
      }
      if (next.mover != (b.mover ^ 1) || next.passes != 0) ++discrepancies;
    }
    const bool oracle_terminal =
        oracle_moves(a, 0).empty() && oracle_moves(a, 1).empty();
    if (is_terminal(b) != oracle_terminal) ++discrepancies;
  }
  CHECK(positions == 10000);
  CHECK(discrepancies == 0);
}

TEST_CASE("pass positions") {
  // Black a1, white b1, white to move: white has no flip anywhere, black
  // replies c1; the pass is forced and leaves the discs alone.
  const OthelloBoard b = board_from(1ull << 0, 1ull << 1, 1);
  CHECK(legal_moves(b).empty());
  CHECK(!is_terminal(b));
  const OthelloBoard pass = apply_move(b, kPassMove);
  CHECK(pass.black == b.black);
  CHECK(pass.white == b.white);
  CHECK(pass.mover == 0);
  CHECK(pass.passes == 1);
  const std::vector<int> reply = legal_moves(pass);
  REQUIRE(reply.size() == 1);
  CHECK(move_to_coord(reply[0]) == "c1");
  const OthelloBoard after = apply_move(pass, reply[0]);
  CHECK(std::popcount(after.black) == 3);
  CHECK(after.white == 0);
  CHECK(after.passes == 0);

  // Passing while flips exist is illegal, as is moving without a flip.
  CHECK_THROWS_AS(apply_move(pass, kPassMove), std::invalid_argument);
  CHECK_THROWS_AS(apply_move(pass, coord_to_move("h8")), std::invalid_argument);
}

TEST_CASE("terminal positions") {
  OthelloBoard full = board_from(~0ull, 0, 0);
  CHECK(is_terminal(full));
  CHECK(legal_moves(full).empty());
  CHECK(exact_score_black(full) == 30000.0 + 640.0);

  // Neither side can move even with empties left.
  const OthelloBoard stuck = board_from(1ull << 0, 0, 1);
  CHECK(is_terminal(stuck));

  // Draw scores zero.
  const OthelloBoard draw = board_from(0x00000000ffffffffull, 0xffffffff00000000ull, 0);
  CHECK(exact_score_black(draw) == 0.0);
  const OthelloBoard lost = board_from(1ull << 0, (1ull << 8) | (1ull << 16), 0);
  CHECK(exact_score_black(lost) == -30000.0 - 10.0);
}

TEST_CASE("random playouts terminate and conserve discs") {
  auto rng = mt::make_rng(92);
  for (int i = 0; i < 200; ++i) {
    std::vector<int> moves;
    const OthelloBoard end = random_playout(initial_board(), rng, &moves);
    CHECK(is_terminal(end));
    long passes = 0, flips = 0;
    for (int m : moves) (m == kPassMove ? passes : flips)++;
    CHECK(static_cast<long>(moves.size()) <= 60 + passes);
    CHECK(disc_count(end) == 4 + flips);
    CHECK((end.black & end.white) == 0);
    CHECK(disc_count(end) <= 64);
  }
}

TEST_CASE("transcript roundtrip") {
  auto rng = mt::make_rng(4242);
  for (int i = 0; i < 20; ++i) {
    std::vector<int> moves;
    const OthelloBoard end = random_playout(initial_board(), rng, &moves);
    const std::string text = to_transcript(moves);
    CHECK(parse_transcript(text) == moves);
    CHECK(replay_transcript(text) == end);
  }
  CHECK(to_transcript({19, kPassMove, 26}) == "d3--c4");
  CHECK(parse_transcript("d3--c4") == std::vector<int>{19, kPassMove, 26});
  CHECK_THROWS_AS(parse_transcript("d3x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_transcript("i3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_transcript("a9"), std::invalid_argument);
}

TEST_CASE("coordinate conversions") {
  CHECK(coord_to_move("a1") == 0);
  CHECK(coord_to_move("h1") == 7);
  CHECK(coord_to_move("a8") == 56);
  CHECK(coord_to_move("h8") == 63);
  CHECK(coord_to_move("d3") == 19);
  CHECK(coord_to_move("--") == kPassMove);
  for (int sq = 0; sq < 64; ++sq) CHECK(coord_to_move(move_to_coord(sq)) == sq);
  CHECK(move_to_coord(kPassMove) == "--");
  CHECK_THROWS_AS(coord_to_move("z9"), std::invalid_argument);
}

TEST_CASE("evaluation antisymmetry and range") {
  const EvalModel model = default_eval_model();
  const double bound = eval_bound(model);
  auto rng = mt::make_rng(5511);
  for (int i = 0; i < 500; ++i) {
    const OthelloBoard b = random_board(rng, static_cast<int>(rng() % 61));
    const double e = eval_black(b, model);
    CHECK(std::isfinite(e));
    CHECK(std::abs(e) <= bound);
    CHECK(eval_black(swap_colors(b), model) == doctest::Approx(-e).epsilon(1e-12));
  }
  // Corner swing dominates its mirror exactly by antisymmetry.
  const OthelloBoard corner = board_from(1ull << 0, 1ull << 27, 0);
  CHECK(eval_black(swap_colors(corner), model) ==
        doctest::Approx(-eval_black(corner, model)).epsilon(1e-12));
}
