#pragma once

// Head-to-head tournament harness for the two Othello engines, plus the
// calibration driver, cost sweep, and report emission.
//
// Protocol: games come in pairs sharing one random opening (a fixed number of
// uniform random legal plies from the start position); the engines swap
// colors within a pair, so each engine plays black in exactly half the games.
// Per-game seeds are derived from the tournament seed, making runs fully
// deterministic; games are independent and can run on several threads.  A
// draw scores half a point to each side.  An engine that returns an illegal
// move forfeits the game and the record is flagged.

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mgss/alphabeta.hpp"
#include "mgss/calibration.hpp"
#include "mgss/eval.hpp"
#include "mgss/othello.hpp"
#include "mgss/voc.hpp"

namespace mgss {

struct EngineSpec {
  enum class Kind { kMgss2, kAlphaBeta };
  Kind kind = Kind::kAlphaBeta;
  std::string name = "ab";     // report label; no commas, spaces, or newlines
  VocParams voc{};             // kMgss2
  QCalibration calibration{};  // kMgss2
  AbConfig ab{};               // kAlphaBeta
  // Test seam: when set, moves come from here instead of a search engine and
  // cost zero nodes.  Lets the harness exercise forfeit handling and fixed
  // policies without a third engine kind.
  std::function<int(const OthelloBoard&)> custom_policy;
};

EngineSpec mgss2_spec(const VocParams& voc, const QCalibration& cal,
                      std::string name = "");
EngineSpec ab_spec(const AbConfig& cfg, std::string name = "");

struct TournamentConfig {
  std::array<EngineSpec, 2> engines{};
  int games = 20;  // must be even and positive
  std::uint64_t seed = 1;
  int opening_plies = 4;
  int threads = 1;
  EvalModel eval = default_eval_model();
};

struct GameRecord {
  int game_id = 0;
  std::uint64_t seed = 0;  // per-game engine seed
  int black_engine = 0;    // engine index that played black
  int winner = -1;         // 0 = black, 1 = white, -1 = draw
  int black_discs = 0;
  int white_discs = 0;
  std::array<long long, 2> nodes{};  // successor evaluations, by engine index
  std::array<long long, 2> moves{};  // decisions taken, by engine index
  int plies = 0;
  bool forfeit = false;
  std::string transcript;  // "f5d6..." with "--" for a pass; opening included

  bool operator==(const GameRecord&) const = default;
};

struct TournamentResult {
  std::array<std::string, 2> engine_names{};
  std::vector<GameRecord> games;

  bool operator==(const TournamentResult&) const = default;
};

struct Aggregate {
  std::array<double, 2> points{};
  std::array<int, 2> wins{};
  int draws = 0;
  std::array<long long, 2> nodes{};
  std::array<long long, 2> moves{};
};

Aggregate aggregate(const TournamentResult& r);

TournamentResult run_tournament(const TournamentConfig& cfg);

// One tournament per cost value, engine 0 (which must be the sampling
// engine) re-priced each time.
struct SweepRow {
  double kappa = 0.0;
  double score = 0.0;  // engine-0 points / games
  std::array<long long, 2> nodes{};
  std::array<long long, 2> moves{};
};
std::vector<SweepRow> sweep_cost(const TournamentConfig& base,
                                 const std::vector<double>& kappas);

// Self-play sample collection plus distribution fit; warns to *log (if
// given) about buckets that fell back to the global fit, persists to
// out_path unless empty.
QCalibration run_calibration(int games, unsigned seed, const EvalModel& model,
                             const std::string& out_path, std::ostream* log);

// Child-value samples gathered along baseline self-play games (random
// openings, an occasional exploratory random move) instead of fully random
// playouts, so the statistics describe positions competent play reaches.
std::vector<CalibrationSample> collect_match_calibration_samples(
    int games, unsigned seed, const EvalModel& model, const AbConfig& ab,
    int opening_plies = 4, double explore = 0.05);

// Reports.  The generated= stamp in the first line is the only
// nondeterministic output; everything else is byte-stable for a given
// result.  parse_* invert write_* exactly (stamp and summary aside).
void write_csv(const TournamentResult& r, std::ostream& out);
TournamentResult parse_csv(std::istream& in);
void write_records(const TournamentResult& r, std::ostream& out);
TournamentResult parse_records(std::istream& in);
void write_summary(const TournamentResult& r, std::ostream& out);

// Board coordinates: "a1" is square 0, "h8" is 63, "--" is the pass move.
std::string move_name(int move);
int parse_move_name(const std::string& name);

}  // namespace mgss
