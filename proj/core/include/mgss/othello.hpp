#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mgss {

// Square index = row * 8 + col, row 0 = rank 1, col 0 = file a.
// kPassMove is the forced move when the mover has no flip.
inline constexpr int kPassMove = 64;

struct OthelloBoard {
  std::uint64_t black = 0;
  std::uint64_t white = 0;
  std::uint8_t mover = 0;   // 0 = black, 1 = white
  std::uint8_t passes = 0;  // consecutive passes so far

  std::uint64_t own() const { return mover == 0 ? black : white; }
  std::uint64_t opp() const { return mover == 0 ? white : black; }

  bool operator==(const OthelloBoard&) const = default;
};

OthelloBoard initial_board();

int disc_count(const OthelloBoard& b);
int disc_diff_black(const OthelloBoard& b);  // black minus white

// Bitmask of flip-legal squares for the given side (0 = black, 1 = white).
std::uint64_t flank_moves(const OthelloBoard& b, int side);

// Flip-legal moves for the mover, ascending square order; empty means the
// mover must pass (sole successor) unless the position is terminal.
std::vector<int> legal_moves(const OthelloBoard& b);

// Discs flipped by playing `sq` for the mover; 0 means the move is illegal.
std::uint64_t flips_for(const OthelloBoard& b, int sq);

bool is_terminal(const OthelloBoard& b);

// Applies a flip move or kPassMove.  Throws std::invalid_argument when the
// move is not legal in this position (including a pass while flips exist).
OthelloBoard apply_move(const OthelloBoard& b, int move);

// Coordinates: "d3" style, lowercase; pass is "--".
std::string move_to_coord(int move);
int coord_to_move(const std::string& coord);  // throws on malformed input

// Move list like "d3c5f6--e6"; replays from the initial position.
std::string to_transcript(const std::vector<int>& moves);
std::vector<int> parse_transcript(const std::string& text);
OthelloBoard replay_transcript(const std::string& text);

// Uniform-random playout to the end of the game; returns the final board and
// appends the moves played (passes included) to *moves when given.
OthelloBoard random_playout(OthelloBoard b, std::mt19937_64& rng,
                            std::vector<int>* moves = nullptr);

// Board reached by `plies` random moves from the start (fewer if the game
// ends first); passes do not count toward the ply budget.
OthelloBoard random_board(std::mt19937_64& rng, int plies);

}  // namespace mgss
