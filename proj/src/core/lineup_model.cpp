#include "lineup_model.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "format.hpp"

namespace lrapm {

double LineupPriorTable::prior(const LineupKey& lineup, Side side) const {
  const auto& table = side == Side::Off ? off : def;
  auto it = table.find(lineup);
  if (it == table.end()) {
    throw Error(ErrorCode::MissingPrior, "no prior for lineup " +
                                             lineup.token());
  }
  return it->second;
}

LineupPriorTable build_priors(const PlayerRatings& r,
                              const std::vector<LineupKey>& lineups,
                              double league_ppp, double fallback) {
  LineupPriorTable t;
  t.league_ppp = league_ppp;
  t.fallback_player_rating = fallback;
  for (const auto& lineup : lineups) {
    double pi_off = league_ppp, pi_def = league_ppp;
    for (const auto& p : lineup.players()) {
      pi_off += r.rating(p, Side::Off, fallback);
      pi_def += r.rating(p, Side::Def, fallback);
    }
    t.off[lineup] = pi_off;
    t.def[lineup] = pi_def;
  }
  return t;
}

const char* prediction_source_name(PredictionSource s) {
  switch (s) {
    case PredictionSource::Model: return "model";
    case PredictionSource::Prior: return "prior";
    case PredictionSource::LeagueAverage: return "league_average";
  }
  return "?";
}

LineupModel fit_lrapm(const PossessionSet& ps, const LineupPriorTable& priors,
                      double lambda, double tol, int max_iter) {
  if (lambda < 0) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be >= 0");
  }
  DesignBuild build = build_design(ps, DesignMode::Lineup);
  // token -> key for center lookup and output
  std::unordered_map<std::string, LineupKey> keys;
  std::unordered_map<std::string, std::int64_t> appearances;
  for (const auto& p : ps.possessions) {
    keys.emplace(p.offense.token(), p.offense);
    keys.emplace(p.defense.token(), p.defense);
    ++appearances[p.offense.token()];
    ++appearances[p.defense.token()];
  }
  PenaltySpec penalty;
  penalty.weights.assign(build.design.n_cols, lambda);
  penalty.centers.resize(build.design.n_cols);
  for (std::size_t e = 0; e < build.design.entity_labels.size(); ++e) {
    const LineupKey& key = keys.at(build.design.entity_labels[e]);
    penalty.centers[2 * e] = priors.prior(key, Side::Off);
    penalty.centers[2 * e + 1] = priors.prior(key, Side::Def);
  }
  RidgeSolution sol = solve(build.design, build.y, penalty, tol, max_iter);

  LineupModel m;
  m.beta0 = sol.intercept;
  m.lambda = lambda;
  m.league_ppp = priors.league_ppp;
  m.fallback_rating = priors.fallback_player_rating;
  for (std::size_t e = 0; e < build.design.entity_labels.size(); ++e) {
    const std::string& token = build.design.entity_labels[e];
    const LineupKey& key = keys.at(token);
    LineupEntry entry;
    entry.beta_off = sol.coefficients[2 * e];
    entry.beta_def = sol.coefficients[2 * e + 1];
    entry.pi_off = penalty.centers[2 * e];
    entry.pi_def = penalty.centers[2 * e + 1];
    entry.train_possessions = appearances.at(token);
    m.entries.emplace(key, entry);
  }
  return m;
}

LineupModel fit_lrapm(const PossessionSet& ps, const PlayerRatings& ratings,
                      double lambda, double fallback, double tol,
                      int max_iter) {
  std::map<LineupKey, bool> seen;
  for (const auto& p : ps.possessions) {
    seen.emplace(p.offense, true);
    seen.emplace(p.defense, true);
  }
  std::vector<LineupKey> lineups;
  lineups.reserve(seen.size());
  for (const auto& [k, _] : seen) lineups.push_back(k);
  LineupPriorTable priors =
      build_priors(ratings, lineups, league_ppp(ps), fallback);
  LineupModel m = fit_lrapm(ps, priors, lambda, tol, max_iter);
  m.player_ratings = ratings;
  return m;
}

double select_lrapm_lambda(const PossessionSet& ps,
                           const PlayerRatings& ratings, int val_weeks,
                           const std::vector<double>& grid, double fallback,
                           double tol, int max_iter) {
  if (grid.empty()) {
    throw Error(ErrorCode::EmptyData, "empty lambda grid");
  }
  if (val_weeks < 1 || val_weeks >= ps.weeks) {
    throw Error(ErrorCode::InvalidArgument,
                "val_weeks must be in [1, weeks-1]");
  }
  DesignBuild build = build_design(ps, DesignMode::Lineup);
  std::unordered_map<std::string, LineupKey> keys;
  for (const auto& p : ps.possessions) {
    keys.emplace(p.offense.token(), p.offense);
    keys.emplace(p.defense.token(), p.defense);
  }
  double lppp = league_ppp(ps);
  std::vector<double> centers(build.design.n_cols);
  for (std::size_t e = 0; e < build.design.entity_labels.size(); ++e) {
    const LineupKey& key = keys.at(build.design.entity_labels[e]);
    double pi_off = lppp, pi_def = lppp;
    for (const auto& p : key.players()) {
      pi_off += ratings.rating(p, Side::Off, fallback);
      pi_def += ratings.rating(p, Side::Def, fallback);
    }
    centers[2 * e] = pi_off;
    centers[2 * e + 1] = pi_def;
  }
  const int cutoff = ps.weeks - val_weeks;
  std::vector<std::int64_t> train_rows, val_rows;
  std::vector<double> y_train, y_val;
  for (std::int64_t i = 0;
       i < static_cast<std::int64_t>(ps.possessions.size()); ++i) {
    if (ps.possessions[i].week <= cutoff) {
      train_rows.push_back(i);
      y_train.push_back(build.y[i]);
    } else {
      val_rows.push_back(i);
      y_val.push_back(build.y[i]);
    }
  }
  if (train_rows.empty() || val_rows.empty()) {
    throw Error(ErrorCode::EmptyData, "empty train or validation split");
  }
  SparseDesign train = build.design.select_rows(train_rows);
  SparseDesign val = build.design.select_rows(val_rows);
  std::vector<GridCandidate> candidates;
  for (double l : grid) candidates.push_back({l, l});
  return grid_search(train, y_train, val, y_val, candidates, centers, tol,
                     max_iter)
      .best.lambda_off;
}

namespace {

// Rating for one side with the beta -> pi -> league fallback chain.
std::pair<double, PredictionSource> side_rating(const LineupModel& m,
                                                const LineupKey& lineup,
                                                Side side) {
  auto it = m.entries.find(lineup);
  if (it != m.entries.end()) {
    return {side == Side::Off ? it->second.beta_off : it->second.beta_def,
            PredictionSource::Model};
  }
  if (m.player_ratings) {
    double pi = m.league_ppp;
    for (const auto& p : lineup.players()) {
      pi += m.player_ratings->rating(p, side, m.fallback_rating);
    }
    return {pi, PredictionSource::Prior};
  }
  return {m.league_ppp, PredictionSource::LeagueAverage};
}

}  // namespace

Prediction predict_possession(const LineupModel& m, const LineupKey& off,
                              const LineupKey& def) {
  auto [b_off, s_off] = side_rating(m, off, Side::Off);
  auto [b_def, s_def] = side_rating(m, def, Side::Def);
  Prediction pred;
  pred.expected_points = m.beta0 + b_off - b_def;
  pred.source = std::max(s_off, s_def);
  return pred;
}

double predict_matchup(const LineupModel& m, const LineupKey& mine,
                       const LineupKey& theirs) {
  return 100.0 * (predict_possession(m, mine, theirs).expected_points -
                  predict_possession(m, theirs, mine).expected_points);
}

void save_lineup_model(const LineupModel& m, std::ostream& out) {
  out << "# beta0=" << fmt_g6(m.beta0) << ",lambda=" << fmt_g6(m.lambda)
      << ",league_ppp=" << fmt_g6(m.league_ppp)
      << ",fallback_rating=" << fmt_g6(m.fallback_rating) << '\n';
  out << "p1,p2,p3,p4,p5,beta_off,beta_def,pi_off,pi_def,train_possessions\n";
  for (const auto& [key, e] : m.entries) {
    for (const auto& p : key.players()) out << p << ',';
    out << fmt_g6(e.beta_off) << ',' << fmt_g6(e.beta_def) << ','
        << fmt_g6(e.pi_off) << ',' << fmt_g6(e.pi_def) << ','
        << e.train_possessions << '\n';
  }
}

void save_lineup_model_file(const LineupModel& m, const std::string& path,
                            bool json_mirror) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  save_lineup_model(m, out);
  if (json_mirror) {
    nlohmann::json j;
    j["beta0"] = m.beta0;
    j["lambda"] = m.lambda;
    j["league_ppp"] = m.league_ppp;
    j["fallback_rating"] = m.fallback_rating;
    auto& lineups = j["lineups"] = nlohmann::json::array();
    for (const auto& [key, e] : m.entries) {
      lineups.push_back({{"players", key.players()},
                         {"beta_off", e.beta_off},
                         {"beta_def", e.beta_def},
                         {"pi_off", e.pi_off},
                         {"pi_def", e.pi_def},
                         {"train_possessions", e.train_possessions}});
    }
    std::ofstream jout(path + ".json", std::ios::binary);
    if (!jout) throw Error(ErrorCode::IoError, "cannot write " + path + ".json");
    jout << j.dump(2) << '\n';
  }
}

LineupModel load_lineup_model(std::istream& in) {
  LineupModel m;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# beta0=", 0) != 0) {
    throw Error(ErrorCode::ParseError, "missing lineup model header record");
  }
  if (std::sscanf(line.c_str(),
                  "# beta0=%lf,lambda=%lf,league_ppp=%lf,fallback_rating=%lf",
                  &m.beta0, &m.lambda, &m.league_ppp,
                  &m.fallback_rating) != 4) {
    throw Error(ErrorCode::ParseError, "bad lineup model header: " + line);
  }
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::ParseError, "missing lineup model column header");
  }
  std::int64_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::istringstream ss(line);
    std::vector<std::string> f;
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    if (f.size() != 10) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": bad model row");
    }
    try {
      std::vector<PlayerId> players(f.begin(), f.begin() + 5);
      LineupEntry e;
      e.beta_off = std::stod(f[5]);
      e.beta_def = std::stod(f[6]);
      e.pi_off = std::stod(f[7]);
      e.pi_def = std::stod(f[8]);
      e.train_possessions = std::stoll(f[9]);
      m.entries.emplace(LineupKey::make(std::span<const PlayerId>(players)),
                        e);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": bad model value");
    }
  }
  return m;
}

LineupModel load_lineup_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return load_lineup_model(in);
}

}  // namespace lrapm
