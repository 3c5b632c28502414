// Command-line driver: tournaments, calibration, cost sweeps, single games,
// and per-decision pricing traces.

#include <CLI11.hpp>

#include <bit>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mgss/alphabeta.hpp"
#include "mgss/engine.hpp"
#include "mgss/tournament.hpp"

using namespace mgss;

namespace {

std::string board_str(const OthelloBoard& b) {
  std::ostringstream os;
  os << "  a b c d e f g h\n";
  for (int r = 0; r < 8; ++r) {
    os << (r + 1) << ' ';
    for (int c = 0; c < 8; ++c) {
      const std::uint64_t bit = 1ull << (r * 8 + c);
      os << (b.black & bit ? 'X' : b.white & bit ? 'O' : '.') << ' ';
    }
    os << '\n';
  }
  return os.str();
}

OthelloBoard random_position(const OthelloGame& game, int plies,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  OthelloBoard s = initial_board();
  for (int i = 0; i < plies && !game.terminal(s); ++i) {
    const std::vector<int> moves = game.successors(s);
    std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
    s = game.apply(s, moves[pick(rng)]);
  }
  return s;
}

struct CommonOpts {
  int games = 20;
  std::uint64_t seed = 1;
  int ab_depth = 2;
  bool ab_unordered = false;
  double kappa = 0.02;
  std::string calibration_path;
  int opening_plies = 4;
  int threads = 1;
  long long max_expansions = -1;
  std::string f_mode = "exact";
  std::string out;
  std::string format = "csv";
};

void add_engine_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--ab-depth", o.ab_depth, "Alpha-beta depth limit (plies)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--ab-unordered", o.ab_unordered,
                "Disable the baseline's static-eval move ordering");
  cmd->add_option("--kappa", o.kappa,
                  "Cost per successor evaluation, in evaluation units");
  cmd->add_option("--calibration", o.calibration_path,
                  "Child-value statistics file (default: built-in)");
  cmd->add_option("--max-expansions", o.max_expansions,
                  "Per-move cap on draws beyond the root batch (-1 = none)");
  cmd->add_option("--f-mode", o.f_mode,
                  "Stage composition: exact nested or one critical stage")
      ->check(CLI::IsMember({"exact", "single-stage"}));
}

QCalibration load_calibration(const std::string& path) {
  if (path.empty()) return default_q_calibration();
  auto cal = QCalibration::load(path);
  if (!cal) throw CLI::ValidationError("--calibration", "cannot read " + path);
  return *cal;
}

VocParams make_voc(const CommonOpts& o) {
  VocParams v;
  v.kappa = o.kappa;
  v.max_expansions = o.max_expansions;
  v.f_mode =
      o.f_mode == "exact" ? FMode::kExactNested : FMode::kSingleStage;
  return v;
}

TournamentConfig make_tournament(const CommonOpts& o) {
  TournamentConfig cfg;
  cfg.engines = {
      mgss2_spec(make_voc(o), load_calibration(o.calibration_path)),
      ab_spec(AbConfig{o.ab_depth, o.ab_unordered ? MoveOrdering::kNone
                                                  : MoveOrdering::kStaticEval})};
  cfg.games = o.games;
  cfg.seed = o.seed;
  cfg.opening_plies = o.opening_plies;
  cfg.threads = o.threads;
  return cfg;
}

void write_out(const TournamentResult& r, const std::string& path,
               const std::string& format) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw CLI::ValidationError("--out", "cannot write " + path);
  if (format == "csv")
    write_csv(r, out);
  else
    write_records(r, out);
  std::cout << "wrote " << path << " (" << format << ")\n";
}

int cmd_tournament(const CommonOpts& o) {
  const TournamentResult r = run_tournament(make_tournament(o));
  write_summary(r, std::cout);
  write_out(r, o.out, o.format);
  return 0;
}

int cmd_calibrate(const CommonOpts& o, int match_depth) {
  QCalibration cal;
  if (match_depth > 0) {
    const std::vector<CalibrationSample> samples =
        collect_match_calibration_samples(
            o.games, static_cast<unsigned>(o.seed), default_eval_model(),
            AbConfig{match_depth, MoveOrdering::kStaticEval});
    std::cerr << "calibration: " << samples.size() << " samples from "
              << o.games << " baseline self-play games\n";
    cal = calibrate_q(samples);
    if (!o.out.empty() && !cal.save(o.out))
      throw CLI::ValidationError("--out", "cannot write " + o.out);
  } else {
    cal = run_calibration(o.games, static_cast<unsigned>(o.seed),
                          default_eval_model(), o.out, &std::cerr);
  }
  std::cout << "global: dmu=" << cal.global().dmu
            << " sigma=" << cal.global().sigma
            << " count=" << cal.global().count << "\n";
  for (int pi = 0; pi < QCalibration::kPhases; ++pi)
    for (int bi = 0; bi < QCalibration::kBranches; ++bi) {
      const QBucket& b = cal.cell(pi, bi);
      std::cout << "bucket(" << pi << "," << bi << "): dmu=" << b.dmu
                << " sigma=" << b.sigma << " count=" << b.count << "\n";
    }
  if (!o.out.empty()) std::cout << "wrote " << o.out << "\n";
  return 0;
}

int cmd_sweep(const CommonOpts& o, const std::vector<double>& kappas) {
  const std::vector<SweepRow> rows = sweep_cost(make_tournament(o), kappas);
  std::ostringstream csv;
  csv << "kappa,score,mgss_nodes,mgss_moves,ab_nodes,ab_moves\n";
  std::cout << "kappa        score   mgss nodes/move   ab nodes/move\n";
  for (const SweepRow& row : rows) {
    csv << row.kappa << ',' << row.score << ',' << row.nodes[0] << ','
        << row.moves[0] << ',' << row.nodes[1] << ',' << row.moves[1] << "\n";
    const double npm0 =
        row.moves[0] ? static_cast<double>(row.nodes[0]) / row.moves[0] : 0.0;
    const double npm1 =
        row.moves[1] ? static_cast<double>(row.nodes[1]) / row.moves[1] : 0.0;
    std::cout << std::left << std::setw(12) << row.kappa << ' ' << std::setw(7)
              << row.score << ' ' << std::setw(17) << npm0 << ' ' << npm1
              << "\n";
  }
  if (!o.out.empty()) {
    std::ofstream out(o.out);
    if (!out) throw CLI::ValidationError("--out", "cannot write " + o.out);
    out << csv.str();
    std::cout << "wrote " << o.out << "\n";
  }
  return 0;
}

int cmd_play(const CommonOpts& o, bool mgss_white, bool show_board) {
  const OthelloGame game;
  const QCalibration cal = load_calibration(o.calibration_path);
  const VocParams voc = make_voc(o);
  const AbConfig ab{o.ab_depth, o.ab_unordered ? MoveOrdering::kNone
                                               : MoveOrdering::kStaticEval};
  OthelloBoard s = random_position(game, o.opening_plies, o.seed ^ 0x6f70);
  std::mt19937_64 seeds(o.seed);
  long long nodes[2] = {0, 0};  // 0 = sampling engine, 1 = alpha-beta
  int ply = o.opening_plies;
  std::cout << board_str(s);
  while (!game.terminal(s)) {
    const bool mgss_to_move = (s.mover == 1) == mgss_white;
    int move;
    long long cost;
    double value;
    if (mgss_to_move) {
      const MgssResult<OthelloGame> r = mgss2_search(game, s, cal, voc, seeds());
      move = r.move;
      cost = r.stats.evals;
      value = r.stats.chosen_value;
      std::cout << "ply " << ply << "  " << (s.mover == 0 ? "black" : "white")
                << " mgss2: " << move_name(move) << "  evals=" << cost
                << " stop=" << r.stats.stop_reason << " value=" << value
                << "\n";
      nodes[0] += cost;
    } else {
      const AbResult<OthelloGame> r = alphabeta_search(game, s, ab);
      move = r.move;
      cost = r.stats.nodes;
      value = r.stats.value;
      std::cout << "ply " << ply << "  " << (s.mover == 0 ? "black" : "white")
                << " ab: " << move_name(move) << "  nodes=" << cost
                << " value=" << value << "\n";
      nodes[1] += cost;
    }
    s = game.apply(s, move);
    ++ply;
    if (show_board) std::cout << board_str(s);
  }
  std::cout << board_str(s);
  const int bd = std::popcount(s.black);
  const int wd = std::popcount(s.white);
  std::cout << "final: black " << bd << " - white " << wd << "  ("
            << (bd > wd   ? "black wins"
                : bd < wd ? "white wins"
                          : "draw")
            << ")\n"
            << "totals: mgss2 " << nodes[0] << " evals, ab " << nodes[1]
            << " nodes\n";
  return 0;
}

int cmd_voc_trace(const CommonOpts& o, int plies) {
  const OthelloGame game;
  OthelloBoard s = random_position(game, plies, o.seed);
  if (game.terminal(s)) {
    std::cerr << "position after " << plies << " plies is terminal\n";
    return 1;
  }
  std::cout << board_str(s) << (s.mover == 0 ? "black" : "white")
            << " to move\n";
  const QCalibration cal = load_calibration(o.calibration_path);
  const MgssResult<OthelloGame> r =
      mgss2_search(game, s, cal, make_voc(o), o.seed, &std::cout);
  std::cout << "chosen: " << move_name(r.move) << "  evals=" << r.stats.evals
            << " expansions=" << r.stats.expansions
            << " scored=" << r.stats.candidates_scored
            << " stop=" << r.stats.stop_reason << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Othello matchups between a decision-priced sampling engine and "
      "depth-limited alpha-beta"};
  app.require_subcommand(1);
  CommonOpts o;

  auto* tournament =
      app.add_subcommand("tournament", "Play a seeded head-to-head match");
  tournament->add_option("--games", o.games, "Game count (even)")
      ->check(CLI::PositiveNumber);
  tournament->add_option("--opening-plies", o.opening_plies,
                         "Random opening plies per game pair");
  tournament->add_option("--threads", o.threads, "Parallel games");
  tournament->add_option("--out", o.out, "Report file");
  tournament->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"csv", "records"}));
  add_engine_flags(tournament, o);

  auto* calibrate = app.add_subcommand(
      "calibrate", "Fit child-value statistics from seeded random games");
  calibrate->add_option("--games", o.games, "Sampling game count")
      ->check(CLI::PositiveNumber);
  calibrate->add_option("--seed", o.seed, "Master seed");
  calibrate->add_option("--out", o.out, "Calibration file to write");
  int match_depth = 0;
  calibrate->add_option(
      "--match-depth", match_depth,
      "Sample along baseline self-play at this depth (0 = random playouts)");

  auto* sweep = app.add_subcommand(
      "sweep-cost", "Replay the matchup across a grid of evaluation costs");
  std::vector<double> kappas{0.2, 0.05, 0.02, 0.005, 0.001};
  sweep->add_option("--kappas", kappas, "Cost grid")->delimiter(',');
  sweep->add_option("--games", o.games, "Games per grid point (even)")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--opening-plies", o.opening_plies,
                    "Random opening plies per game pair");
  sweep->add_option("--threads", o.threads, "Parallel games");
  sweep->add_option("--out", o.out, "CSV file for the sweep rows");
  add_engine_flags(sweep, o);

  auto* play =
      app.add_subcommand("play", "Play one verbose game move by move");
  bool mgss_white = false;
  bool show_board = false;
  play->add_flag("--mgss-white", mgss_white,
                 "Sampling engine takes white (default black)");
  play->add_flag("--board", show_board, "Print the board after every move");
  play->add_option("--opening-plies", o.opening_plies, "Random opening plies");
  add_engine_flags(play, o);

  auto* trace = app.add_subcommand(
      "voc-trace", "Dump candidate pricing for one move decision");
  int trace_plies = 8;
  trace->add_option("--plies", trace_plies,
                    "Random plies before the traced decision");
  add_engine_flags(trace, o);

  CLI11_PARSE(app, argc, argv);
  try {
    if (tournament->parsed()) return cmd_tournament(o);
    if (calibrate->parsed()) return cmd_calibrate(o, match_depth);
    if (sweep->parsed()) return cmd_sweep(o, kappas);
    if (play->parsed()) return cmd_play(o, mgss_white, show_board);
    if (trace->parsed()) return cmd_voc_trace(o, trace_plies);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
