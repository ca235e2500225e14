#include "rapm.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "format.hpp"

namespace lrapm {

double PlayerRatings::rating(const PlayerId& p, Side side,
                             double fallback) const {
  const auto& table = side == Side::Off ? off : def;
  auto it = table.find(p);
  return it == table.end() ? fallback : it->second;
}

PlayerRatings fit_rapm(const PossessionSet& ps, double lambda_off,
                       double lambda_def, double tol, int max_iter) {
  if (lambda_off < 0 || lambda_def < 0) {
    throw Error(ErrorCode::InvalidArgument, "lambdas must be >= 0");
  }
  DesignBuild build = build_design(ps, DesignMode::Player);
  PenaltySpec penalty =
      PenaltySpec::by_side(build.design.n_cols, lambda_off, lambda_def);
  RidgeSolution sol = solve(build.design, build.y, penalty, tol, max_iter);
  PlayerRatings r;
  r.gamma0 = sol.intercept;
  r.lambda_off = lambda_off;
  r.lambda_def = lambda_def;
  for (std::size_t e = 0; e < build.design.entity_labels.size(); ++e) {
    const std::string& pid = build.design.entity_labels[e];
    r.off[pid] = sol.coefficients[2 * e];
    r.def[pid] = sol.coefficients[2 * e + 1];
  }
  return r;
}

GridCandidate select_rapm_lambdas(const PossessionSet& ps, int val_weeks,
                                  const std::vector<double>& grid_off,
                                  const std::vector<double>& grid_def,
                                  double tol, int max_iter) {
  if (grid_off.empty() || grid_def.empty()) {
    throw Error(ErrorCode::EmptyData, "empty lambda grid");
  }
  if (val_weeks < 1 || val_weeks >= ps.weeks) {
    throw Error(ErrorCode::InvalidArgument,
                "val_weeks must be in [1, weeks-1]");
  }
  DesignBuild build = build_design(ps, DesignMode::Player);
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
  for (double lo : grid_off) {
    for (double ld : grid_def) candidates.push_back({lo, ld});
  }
  std::vector<double> centers(build.design.n_cols, 0.0);
  return grid_search(train, y_train, val, y_val, candidates, centers, tol,
                     max_iter)
      .best;
}

void save_player_ratings(const PlayerRatings& r, std::ostream& out) {
  out << "# gamma0=" << fmt_g6(r.gamma0)
      << ",lambda_off=" << fmt_g6(r.lambda_off)
      << ",lambda_def=" << fmt_g6(r.lambda_def) << '\n';
  out << "player_id,gamma_off,gamma_def\n";
  for (const auto& [pid, g_off] : r.off) {
    out << pid << ',' << fmt_g6(g_off) << ',' << fmt_g6(r.def.at(pid))
        << '\n';
  }
}

void save_player_ratings_file(const PlayerRatings& r, const std::string& path,
                              bool json_mirror) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  save_player_ratings(r, out);
  if (json_mirror) {
    nlohmann::json j;
    j["gamma0"] = r.gamma0;
    j["lambda_off"] = r.lambda_off;
    j["lambda_def"] = r.lambda_def;
    auto& players = j["players"] = nlohmann::json::array();
    for (const auto& [pid, g_off] : r.off) {
      players.push_back({{"player_id", pid},
                         {"gamma_off", g_off},
                         {"gamma_def", r.def.at(pid)}});
    }
    std::ofstream jout(path + ".json", std::ios::binary);
    if (!jout) throw Error(ErrorCode::IoError, "cannot write " + path + ".json");
    jout << j.dump(2) << '\n';
  }
}

PlayerRatings load_player_ratings(std::istream& in) {
  PlayerRatings r;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# gamma0=", 0) != 0) {
    throw Error(ErrorCode::ParseError, "missing ratings header record");
  }
  if (std::sscanf(line.c_str(), "# gamma0=%lf,lambda_off=%lf,lambda_def=%lf",
                  &r.gamma0, &r.lambda_off, &r.lambda_def) != 3) {
    throw Error(ErrorCode::ParseError, "bad ratings header record: " + line);
  }
  if (!std::getline(in, line) ||
      (line != "player_id,gamma_off,gamma_def" &&
       line != "player_id,gamma_off,gamma_def\r")) {
    throw Error(ErrorCode::ParseError, "bad ratings column header");
  }
  std::int64_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::istringstream ss(line);
    std::string pid, soff, sdef;
    if (!std::getline(ss, pid, ',') || !std::getline(ss, soff, ',') ||
        !std::getline(ss, sdef)) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": bad ratings row");
    }
    try {
      r.off[pid] = std::stod(soff);
      r.def[pid] = std::stod(sdef);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": bad rating value");
    }
  }
  return r;
}

PlayerRatings load_player_ratings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return load_player_ratings(in);
}

}  // namespace lrapm
