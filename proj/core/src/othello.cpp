#include "mgss/othello.hpp"

#include <bit>
#include <stdexcept>

namespace mgss {
namespace {

constexpr std::uint64_t kFileA = 0x0101010101010101ull;
constexpr std::uint64_t kFileH = 0x8080808080808080ull;
constexpr std::uint64_t kAll = ~0ull;

struct Dir {
  int shift;            // positive = shift left
  std::uint64_t mask;   // applied before shifting to stop file wrap
};

constexpr Dir kDirs[8] = {
    {1, ~kFileH},  {-1, ~kFileA},  {8, kAll},      {-8, kAll},
    {9, ~kFileH},  {7, ~kFileA},   {-7, ~kFileH},  {-9, ~kFileA},
};

std::uint64_t shift_dir(std::uint64_t x, const Dir& d) {
  x &= d.mask;
  return d.shift > 0 ? x << d.shift : x >> -d.shift;
}

std::uint64_t moves_mask(std::uint64_t own, std::uint64_t opp) {
  const std::uint64_t empty = ~(own | opp);
  std::uint64_t acc = 0;
  for (const Dir& d : kDirs) {
    std::uint64_t t = shift_dir(own, d) & opp;
    for (int i = 0; i < 5; ++i) t |= shift_dir(t, d) & opp;
    acc |= shift_dir(t, d) & empty;
  }
  return acc;
}

}  // namespace

OthelloBoard initial_board() {
  OthelloBoard b;
  b.black = (1ull << 35) | (1ull << 28);  // d5, e4
  b.white = (1ull << 27) | (1ull << 36);  // d4, e5
  b.mover = 0;
  b.passes = 0;
  return b;
}

int disc_count(const OthelloBoard& b) {
  return std::popcount(b.black) + std::popcount(b.white);
}

int disc_diff_black(const OthelloBoard& b) {
  return std::popcount(b.black) - std::popcount(b.white);
}

std::uint64_t flank_moves(const OthelloBoard& b, int side) {
  return side == 0 ? moves_mask(b.black, b.white) : moves_mask(b.white, b.black);
}

std::vector<int> legal_moves(const OthelloBoard& b) {
  std::uint64_t m = flank_moves(b, b.mover);
  std::vector<int> out;
  out.reserve(std::popcount(m));
  while (m) {
    const int sq = std::countr_zero(m);
    out.push_back(sq);
    m &= m - 1;
  }
  return out;
}

std::uint64_t flips_for(const OthelloBoard& b, int sq) {
  if (sq < 0 || sq >= 64) return 0;
  const std::uint64_t bit = 1ull << sq;
  const std::uint64_t own = b.own(), opp = b.opp();
  if ((own | opp) & bit) return 0;
  std::uint64_t flips = 0;
  for (const Dir& d : kDirs) {
    std::uint64_t run = 0;
    std::uint64_t cur = shift_dir(bit, d);
    while (cur & opp) {
      run |= cur;
      cur = shift_dir(cur, d);
    }
    if (cur & own) flips |= run;
  }
  return flips;
}

bool is_terminal(const OthelloBoard& b) {
  return flank_moves(b, 0) == 0 && flank_moves(b, 1) == 0;
}

OthelloBoard apply_move(const OthelloBoard& b, int move) {
  OthelloBoard next = b;
  if (move == kPassMove) {
    if (flank_moves(b, b.mover) != 0 || is_terminal(b)) {
      throw std::invalid_argument("illegal pass");
    }
    next.mover ^= 1;
    next.passes = static_cast<std::uint8_t>(b.passes + 1);
    return next;
  }
  const std::uint64_t flips = flips_for(b, move);
  if (flips == 0) throw std::invalid_argument("illegal move");
  const std::uint64_t bit = 1ull << move;
  if (b.mover == 0) {
    next.black |= bit | flips;
    next.white &= ~flips;
  } else {
    next.white |= bit | flips;
    next.black &= ~flips;
  }
  next.mover ^= 1;
  next.passes = 0;
  return next;
}

std::string move_to_coord(int move) {
  if (move == kPassMove) return "--";
  if (move < 0 || move >= 64) throw std::invalid_argument("bad square");
  std::string s(2, '\0');
  s[0] = static_cast<char>('a' + move % 8);
  s[1] = static_cast<char>('1' + move / 8);
  return s;
}

int coord_to_move(const std::string& coord) {
  if (coord == "--") return kPassMove;
  if (coord.size() != 2 || coord[0] < 'a' || coord[0] > 'h' ||
      coord[1] < '1' || coord[1] > '8') {
    throw std::invalid_argument("bad coordinate: " + coord);
  }
  return (coord[1] - '1') * 8 + (coord[0] - 'a');
}

std::string to_transcript(const std::vector<int>& moves) {
  std::string out;
  out.reserve(moves.size() * 2);
  for (int m : moves) out += move_to_coord(m);
  return out;
}

std::vector<int> parse_transcript(const std::string& text) {
  if (text.size() % 2 != 0) throw std::invalid_argument("odd transcript length");
  std::vector<int> moves;
  moves.reserve(text.size() / 2);
  for (std::size_t i = 0; i < text.size(); i += 2) {
    moves.push_back(coord_to_move(text.substr(i, 2)));
  }
  return moves;
}

OthelloBoard replay_transcript(const std::string& text) {
  OthelloBoard b = initial_board();
  for (int m : parse_transcript(text)) b = apply_move(b, m);
  return b;
}

OthelloBoard random_playout(OthelloBoard b, std::mt19937_64& rng,
                            std::vector<int>* moves) {
  while (!is_terminal(b)) {
    const std::vector<int> legal = legal_moves(b);
    int move = kPassMove;
    if (!legal.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
      move = legal[pick(rng)];
    }
    if (moves) moves->push_back(move);
    b = apply_move(b, move);
  }
  return b;
}

OthelloBoard random_board(std::mt19937_64& rng, int plies) {
  OthelloBoard b = initial_board();
  int placed = 0;
  while (placed < plies && !is_terminal(b)) {
    const std::vector<int> legal = legal_moves(b);
    if (legal.empty()) {
      b = apply_move(b, kPassMove);
      continue;
    }
    std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
    b = apply_move(b, legal[pick(rng)]);
    ++placed;
  }
  return b;
}

}  // namespace mgss
