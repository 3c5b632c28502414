#include "mgss/tournament.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mgss/engine.hpp"

namespace mgss {

namespace {

constexpr int kMaxPlies = 400;  // safety net; real games end far earlier

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::string iso_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct MoveChoice {
  int move = kPassMove;
  long long nodes = 0;
};

MoveChoice choose(const EngineSpec& e, const OthelloGame& game,
                  const OthelloBoard& s, std::uint64_t seed) {
  if (e.custom_policy) return {e.custom_policy(s), 0};
  if (e.kind == EngineSpec::Kind::kMgss2) {
    const MgssResult<OthelloGame> r =
        mgss2_search(game, s, e.calibration, e.voc, seed);
    return {r.move, r.stats.evals};
  }
  const AbResult<OthelloGame> r = alphabeta_search(game, s, e.ab);
  return {r.move, r.stats.nodes};
}

GameRecord play_game(const TournamentConfig& cfg, const OthelloGame& game,
                     int game_id) {
  const int pair = game_id / 2;
  GameRecord rec;
  rec.game_id = game_id;
  rec.black_engine = game_id % 2;
  rec.seed = mix(cfg.seed, 0x656e67696e65ull + game_id);

  OthelloBoard s = initial_board();
  {
    // Opening seeded per pair, so both color assignments start identically.
    std::mt19937_64 rng(mix(cfg.seed, 0x6f70656eull + pair));
    for (int i = 0; i < cfg.opening_plies && !game.terminal(s); ++i) {
      const std::vector<int> moves = game.successors(s);
      std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
      const int m = moves[pick(rng)];
      rec.transcript += move_name(m);
      s = game.apply(s, m);
      ++rec.plies;
    }
  }

  std::mt19937_64 move_seeds(rec.seed);
  while (!game.terminal(s) && rec.plies < kMaxPlies) {
    const int eng = s.mover == 0 ? rec.black_engine : 1 - rec.black_engine;
    const MoveChoice c = choose(cfg.engines[eng], game, s, move_seeds());
    rec.nodes[eng] += c.nodes;
    ++rec.moves[eng];
    const std::vector<int> legal = game.successors(s);
    if (std::find(legal.begin(), legal.end(), c.move) == legal.end()) {
      rec.forfeit = true;
      rec.winner = s.mover == 0 ? 1 : 0;  // offender loses on the spot
      rec.black_discs = std::popcount(s.black);
      rec.white_discs = std::popcount(s.white);
      return rec;
    }
    rec.transcript += move_name(c.move);
    s = game.apply(s, c.move);
    ++rec.plies;
  }

  rec.black_discs = std::popcount(s.black);
  rec.white_discs = std::popcount(s.white);
  rec.winner = rec.black_discs > rec.white_discs   ? 0
               : rec.black_discs < rec.white_discs ? 1
                                                   : -1;
  return rec;
}

void check_name(const std::string& name) {
  if (name.empty() ||
      name.find_first_of(", \n\t") != std::string::npos)
    throw std::invalid_argument(
        "tournament: engine names must be non-empty with no commas or "
        "whitespace: '" +
        name + "'");
}

std::vector<std::string> split(const std::string& line, char sep, int max_parts) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (static_cast<int>(out.size()) + 1 < max_parts) {
    const std::size_t p = line.find(sep, start);
    if (p == std::string::npos) break;
    out.push_back(line.substr(start, p - start));
    start = p + 1;
  }
  out.push_back(line.substr(start));
  return out;
}

std::string winner_name(int winner) {
  return winner < 0 ? "draw" : winner == 0 ? "black" : "white";
}

int parse_winner(const std::string& s) {
  if (s == "black") return 0;
  if (s == "white") return 1;
  if (s == "draw") return -1;
  throw std::runtime_error("parse_csv: bad winner field '" + s + "'");
}

}  // namespace

EngineSpec mgss2_spec(const VocParams& voc, const QCalibration& cal,
                      std::string name) {
  EngineSpec e;
  e.kind = EngineSpec::Kind::kMgss2;
  e.voc = voc;
  e.calibration = cal;
  if (name.empty()) {
    std::ostringstream os;
    os << "mgss2[kappa=" << voc.kappa << "]";
    name = os.str();
  }
  e.name = std::move(name);
  return e;
}

EngineSpec ab_spec(const AbConfig& cfg, std::string name) {
  EngineSpec e;
  e.kind = EngineSpec::Kind::kAlphaBeta;
  e.ab = cfg;
  if (name.empty()) {
    std::ostringstream os;
    os << "ab[depth=" << cfg.depth
       << (cfg.ordering == MoveOrdering::kNone ? ";unordered" : "") << "]";
    name = os.str();
  }
  e.name = std::move(name);
  return e;
}

Aggregate aggregate(const TournamentResult& r) {
  Aggregate a;
  for (const GameRecord& g : r.games) {
    for (int e = 0; e < 2; ++e) {
      a.nodes[e] += g.nodes[e];
      a.moves[e] += g.moves[e];
    }
    if (g.winner < 0) {
      a.points[0] += 0.5;
      a.points[1] += 0.5;
      ++a.draws;
    } else {
      const int we = g.winner == 0 ? g.black_engine : 1 - g.black_engine;
      a.points[we] += 1.0;
      ++a.wins[we];
    }
  }
  return a;
}

TournamentResult run_tournament(const TournamentConfig& cfg) {
  if (cfg.games <= 0 || cfg.games % 2 != 0)
    throw std::invalid_argument(
        "run_tournament: game count must be positive and even");
  if (cfg.opening_plies < 0)
    throw std::invalid_argument("run_tournament: negative opening plies");
  check_name(cfg.engines[0].name);
  check_name(cfg.engines[1].name);
  if (cfg.engines[0].name == cfg.engines[1].name)
    throw std::invalid_argument(
        "run_tournament: engine names must differ (labels identify sides in "
        "reports)");

  const OthelloGame game(cfg.eval);
  TournamentResult res;
  res.engine_names = {cfg.engines[0].name, cfg.engines[1].name};
  res.games.resize(cfg.games);

  const int threads = std::clamp(cfg.threads, 1, cfg.games);
  if (threads == 1) {
    for (int gid = 0; gid < cfg.games; ++gid)
      res.games[gid] = play_game(cfg, game, gid);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int gid = next.fetch_add(1); gid < cfg.games;
             gid = next.fetch_add(1))
          res.games[gid] = play_game(cfg, game, gid);
      });
    for (std::thread& th : pool) th.join();
  }
  return res;
}

std::vector<SweepRow> sweep_cost(const TournamentConfig& base,
                                 const std::vector<double>& kappas) {
  if (base.engines[0].kind != EngineSpec::Kind::kMgss2)
    throw std::invalid_argument(
        "sweep_cost: engine 0 must be the sampling engine");
  std::vector<SweepRow> out;
  out.reserve(kappas.size());
  for (const double k : kappas) {
    TournamentConfig cfg = base;
    cfg.engines[0].voc.kappa = k;
    const TournamentResult r = run_tournament(cfg);
    const Aggregate a = aggregate(r);
    SweepRow row;
    row.kappa = k;
    row.score = a.points[0] / cfg.games;
    row.nodes = a.nodes;
    row.moves = a.moves;
    out.push_back(row);
  }
  return out;
}

std::vector<CalibrationSample> collect_match_calibration_samples(
    int games, unsigned seed, const EvalModel& model, const AbConfig& ab,
    int opening_plies, double explore) {
  std::vector<CalibrationSample> out;
  const OthelloGame game(model);
  std::mt19937_64 rng(mix(seed, 0x63616cull));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int g = 0; g < games; ++g) {
    OthelloBoard b = initial_board();
    int ply = 0;
    while (!is_terminal(b)) {
      const std::vector<int> legal = legal_moves(b);
      if (legal.empty()) {
        b = apply_move(b, kPassMove);
        continue;
      }
      const double sign = b.mover == 0 ? 1.0 : -1.0;
      const double parent = sign * eval_black(b, model);
      double best = -1e300;
      for (const int mv : legal)
        best = std::max(best, sign * eval_black(apply_move(b, mv), model));
      out.push_back({disc_count(b), static_cast<int>(legal.size()),
                     best - parent});
      int mv;
      if (ply < opening_plies || coin(rng) < explore) {
        std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
        mv = legal[pick(rng)];
      } else {
        mv = alphabeta_search(game, b, ab).move;
      }
      b = apply_move(b, mv);
      ++ply;
    }
  }
  return out;
}

QCalibration run_calibration(int games, unsigned seed, const EvalModel& model,
                             const std::string& out_path, std::ostream* log) {
  const std::vector<CalibrationSample> samples =
      collect_calibration_samples(games, seed, model);
  QCalibration cal = calibrate_q(samples);
  if (log) {
    *log << "calibration: " << samples.size() << " samples from " << games
         << " games\n";
    for (int pi = 0; pi < QCalibration::kPhases; ++pi)
      for (int bi = 0; bi < QCalibration::kBranches; ++bi) {
        const QBucket& b = cal.cell(pi, bi);
        if (b.count < cal.min_count)
          *log << "calibration: bucket (" << pi << "," << bi << ") thin ("
               << b.count << " samples), global fallback applies\n";
      }
  }
  if (!out_path.empty() && !cal.save(out_path))
    throw std::runtime_error("run_calibration: cannot write " + out_path);
  return cal;
}

void write_csv(const TournamentResult& r, std::ostream& out) {
  out << "# othello-tournament v1 generated=" << iso_now() << "\n";
  out << "# engine0=" << r.engine_names[0] << " engine1=" << r.engine_names[1]
      << "\n";
  out << "game_id,seed,black_engine,white_engine,winner,black_discs,"
         "white_discs,engine1_nodes,engine2_nodes,plies,engine1_moves,"
         "engine2_moves,forfeit,transcript\n";
  for (const GameRecord& g : r.games) {
    out << g.game_id << ',' << g.seed << ',' << r.engine_names[g.black_engine]
        << ',' << r.engine_names[1 - g.black_engine] << ','
        << winner_name(g.winner) << ',' << g.black_discs << ','
        << g.white_discs << ',' << g.nodes[0] << ',' << g.nodes[1] << ','
        << g.plies << ',' << g.moves[0] << ',' << g.moves[1] << ','
        << (g.forfeit ? 1 : 0) << ',' << g.transcript << "\n";
  }
  std::ostringstream sum;
  write_summary(r, sum);
  std::istringstream lines(sum.str());
  for (std::string line; std::getline(lines, line);) out << "# " << line << "\n";
}

TournamentResult parse_csv(std::istream& in) {
  TournamentResult r;
  bool have_names = false;
  bool have_header = false;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::size_t p0 = line.find("engine0=");
      const std::size_t p1 = line.find("engine1=");
      if (p0 != std::string::npos && p1 != std::string::npos) {
        const std::size_t s0 = p0 + 8;
        r.engine_names[0] = line.substr(s0, line.find(' ', s0) - s0);
        const std::size_t s1 = p1 + 8;
        r.engine_names[1] = line.substr(s1, line.find(' ', s1) - s1);
        have_names = true;
      }
      continue;
    }
    if (!have_header) {
      have_header = true;  // column header row
      continue;
    }
    const std::vector<std::string> f = split(line, ',', 14);
    if (f.size() != 14)
      throw std::runtime_error("parse_csv: bad row: " + line);
    if (!have_names) throw std::runtime_error("parse_csv: missing engine header");
    GameRecord g;
    g.game_id = std::stoi(f[0]);
    g.seed = std::stoull(f[1]);
    g.black_engine = f[2] == r.engine_names[0] ? 0 : 1;
    g.winner = parse_winner(f[4]);
    g.black_discs = std::stoi(f[5]);
    g.white_discs = std::stoi(f[6]);
    g.nodes = {std::stoll(f[7]), std::stoll(f[8])};
    g.plies = std::stoi(f[9]);
    g.moves = {std::stoll(f[10]), std::stoll(f[11])};
    g.forfeit = f[12] == "1";
    g.transcript = f[13];
    r.games.push_back(std::move(g));
  }
  if (!have_names) throw std::runtime_error("parse_csv: missing engine header");
  return r;
}

void write_records(const TournamentResult& r, std::ostream& out) {
  using nlohmann::json;
  out << json{{"format", "othello-tournament-records"},
              {"version", 1},
              {"generated", iso_now()},
              {"engines", r.engine_names}}
             .dump()
      << "\n";
  for (const GameRecord& g : r.games) {
    out << json{{"game_id", g.game_id},
                {"seed", g.seed},
                {"black_engine", g.black_engine},
                {"winner", g.winner},
                {"black_discs", g.black_discs},
                {"white_discs", g.white_discs},
                {"nodes", g.nodes},
                {"moves", g.moves},
                {"plies", g.plies},
                {"forfeit", g.forfeit},
                {"transcript", g.transcript}}
               .dump()
        << "\n";
  }
  const Aggregate a = aggregate(r);
  out << json{{"aggregate",
               {{"points", a.points},
                {"wins", a.wins},
                {"draws", a.draws},
                {"nodes", a.nodes},
                {"moves", a.moves}}}}
             .dump()
      << "\n";
}

TournamentResult parse_records(std::istream& in) {
  using nlohmann::json;
  TournamentResult r;
  bool have_header = false;
  bool have_aggregate = false;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    if (j.contains("format")) {
      if (j.at("format") != "othello-tournament-records")
        throw std::runtime_error("parse_records: unknown format");
      j.at("engines").get_to(r.engine_names);
      have_header = true;
      continue;
    }
    if (j.contains("aggregate")) {
      const json& a = j.at("aggregate");
      const Aggregate want = aggregate(r);
      if (a.at("points").get<std::array<double, 2>>() != want.points ||
          a.at("wins").get<std::array<int, 2>>() != want.wins ||
          a.at("draws").get<int>() != want.draws ||
          a.at("nodes").get<std::array<long long, 2>>() != want.nodes ||
          a.at("moves").get<std::array<long long, 2>>() != want.moves)
        throw std::runtime_error(
            "parse_records: aggregate does not match the per-game records");
      have_aggregate = true;
      continue;
    }
    GameRecord g;
    j.at("game_id").get_to(g.game_id);
    j.at("seed").get_to(g.seed);
    j.at("black_engine").get_to(g.black_engine);
    j.at("winner").get_to(g.winner);
    j.at("black_discs").get_to(g.black_discs);
    j.at("white_discs").get_to(g.white_discs);
    j.at("nodes").get_to(g.nodes);
    j.at("moves").get_to(g.moves);
    j.at("plies").get_to(g.plies);
    j.at("forfeit").get_to(g.forfeit);
    j.at("transcript").get_to(g.transcript);
    r.games.push_back(std::move(g));
  }
  if (!have_header) throw std::runtime_error("parse_records: missing header");
  if (!have_aggregate)
    throw std::runtime_error("parse_records: missing aggregate");
  return r;
}

void write_summary(const TournamentResult& r, std::ostream& out) {
  const Aggregate a = aggregate(r);
  std::size_t w = 9;  // "algorithm"
  for (const std::string& n : r.engine_names) w = std::max(w, n.size());
  out << std::left << std::setw(static_cast<int>(w) + 2) << "algorithm"
      << std::right << std::setw(8) << "points" << std::setw(6) << "wins"
      << std::setw(7) << "draws" << std::setw(12) << "nodes" << std::setw(12)
      << "nodes/move" << "\n";
  for (int e = 0; e < 2; ++e) {
    std::ostringstream pts;
    pts << std::fixed << std::setprecision(1) << a.points[e];
    std::ostringstream npm;
    if (a.moves[e] > 0)
      npm << std::fixed << std::setprecision(1)
          << static_cast<double>(a.nodes[e]) / a.moves[e];
    else
      npm << "-";
    out << std::left << std::setw(static_cast<int>(w) + 2) << r.engine_names[e]
        << std::right << std::setw(8) << pts.str() << std::setw(6) << a.wins[e]
        << std::setw(7) << a.draws << std::setw(12) << a.nodes[e]
        << std::setw(12) << npm.str() << "\n";
  }
}

std::string move_name(int move) {
  if (move == kPassMove) return "--";
  if (move < 0 || move > 63)
    throw std::invalid_argument("move_name: bad square " + std::to_string(move));
  return {static_cast<char>('a' + move % 8), static_cast<char>('1' + move / 8)};
}

int parse_move_name(const std::string& name) {
  if (name == "--") return kPassMove;
  if (name.size() != 2 || name[0] < 'a' || name[0] > 'h' || name[1] < '1' ||
      name[1] > '8')
    throw std::invalid_argument("parse_move_name: bad square '" + name + "'");
  return (name[1] - '1') * 8 + (name[0] - 'a');
}

}  // namespace mgss
