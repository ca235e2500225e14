#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "format.hpp"

namespace lrapm {

namespace {

constexpr double kStarterBoost = 2.0;  // extra weight on the top 3 lineups
constexpr int kStintMin = 8;           // possessions per lineup stint
constexpr int kStintMax = 15;

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

double normal(std::mt19937_64& rng, double sd) {
  // Box-Muller; one value per call keeps the stream layout simple.
  double u = u01(rng), v = u01(rng);
  if (u <= 0) u = 0x1p-53;
  return sd * std::sqrt(-2.0 * std::log(u)) *
         std::cos(2.0 * 3.14159265358979323846 * v);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive
  return lo + static_cast<int>(u01(rng) * (hi - lo + 1));
}

std::string player_id(int team, int slot) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "T%02dP%02d", team + 1, slot + 1);
  return buf;
}

}  // namespace

void SynthConfig::validate() const {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorCode::InvalidConfig, msg);
  };
  if (n_teams < 2) fail("n_teams must be >= 2");
  if (roster_size < 5) fail("roster_size must be >= 5");
  if (weeks < 1) fail("weeks must be >= 1");
  if (games_per_week < 1) fail("games_per_week must be >= 1");
  if (possessions_per_game < 1) fail("possessions_per_game must be >= 1");
  if (lineup_pool < 1) fail("lineup_pool must be >= 1");
  if (sd_gamma_off < 0 || sd_gamma_def < 0) fail("gamma spreads must be >= 0");
  if (league_mean_ppp <= kExpectedPointsClampLo ||
      league_mean_ppp >= kExpectedPointsClampHi) {
    fail("league_mean_ppp must be in (0, 3)");
  }
  if (rotation_concentration < 0) fail("rotation_concentration must be >= 0");
  if (scoreless_rate < 0 || scoreless_rate >= 1) {
    fail("scoreless_rate must be in [0, 1)");
  }
}

double true_expected_points(const GroundTruth& gt, const LineupKey& off,
                            const LineupKey& def) {
  double mu = gt.league_mean_ppp;
  for (const auto& p : off.players()) {
    auto it = gt.gamma_off.find(p);
    if (it == gt.gamma_off.end()) {
      throw Error(ErrorCode::UnknownPlayer, "unknown player " + p);
    }
    mu += it->second;
  }
  for (const auto& p : def.players()) {
    auto it = gt.gamma_def.find(p);
    if (it == gt.gamma_def.end()) {
      throw Error(ErrorCode::UnknownPlayer, "unknown player " + p);
    }
    mu -= it->second;
  }
  return std::clamp(mu, kExpectedPointsClampLo, kExpectedPointsClampHi);
}

std::array<double, 4> point_distribution(double mu, double scoreless_rate) {
  mu = std::clamp(mu, kExpectedPointsClampLo, kExpectedPointsClampHi);
  double p0 = scoreless_rate;
  if (mu > 3.0 * (1.0 - p0)) p0 = 1.0 - mu / 3.0;  // mean not reachable
  double rest = 1.0 - p0;
  double cm = rest > 0 ? mu / rest : 0.0;  // conditional mean given points>0
  std::array<double, 4> p{p0, 0, 0, 0};
  if (cm < 1.0) {
    // too little mass needed even at 1 point; surplus returns to zero
    p[1] = mu;
    p[0] = 1.0 - mu;
  } else if (cm <= 2.0) {
    p[1] = (2.0 - cm) * rest;
    p[2] = (cm - 1.0) * rest;
  } else {
    p[2] = (3.0 - cm) * rest;
    p[3] = (cm - 2.0) * rest;
  }
  return p;
}

SynthResult generate(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);

  SynthResult result;
  result.truth.league_mean_ppp = cfg.league_mean_ppp;
  std::vector<std::vector<double>> g_off(cfg.n_teams), g_def(cfg.n_teams);
  for (int t = 0; t < cfg.n_teams; ++t) {
    g_off[t].resize(cfg.roster_size);
    g_def[t].resize(cfg.roster_size);
    for (int j = 0; j < cfg.roster_size; ++j) {
      g_off[t][j] = normal(rng, cfg.sd_gamma_off);
      g_def[t][j] = normal(rng, cfg.sd_gamma_def);
      result.truth.gamma_off[player_id(t, j)] = g_off[t][j];
      result.truth.gamma_def[player_id(t, j)] = g_def[t][j];
    }
  }

  // Rotation: rank 5-subsets by how close to the top of the roster they are
  // (lower slot indices are starters), keep the first lineup_pool of them and
  // sample stints with Zipf(rotation_concentration) weights over the ranks.
  std::vector<std::array<int, 5>> subsets;
  {
    std::array<int, 5> s{};
    for (int a = 0; a < cfg.roster_size; ++a)
      for (int b = a + 1; b < cfg.roster_size; ++b)
        for (int c = b + 1; c < cfg.roster_size; ++c)
          for (int d = c + 1; d < cfg.roster_size; ++d)
            for (int e = d + 1; e < cfg.roster_size; ++e) {
              s = {a, b, c, d, e};
              subsets.push_back(s);
            }
    std::stable_sort(subsets.begin(), subsets.end(),
                     [](const auto& x, const auto& y) {
                       int sx = std::accumulate(x.begin(), x.end(), 0);
                       int sy = std::accumulate(y.begin(), y.end(), 0);
                       if (sx != sy) return sx < sy;
                       return x < y;
                     });
  }
  const int pool =
      std::min<int>(cfg.lineup_pool, static_cast<int>(subsets.size()));
  std::vector<double> cum(pool);
  {
    double total = 0;
    for (int k = 0; k < pool; ++k) {
      double w = std::pow(static_cast<double>(k + 1),
                          -cfg.rotation_concentration);
      if (k < 3) w *= kStarterBoost;
      total += w;
      cum[k] = total;
    }
    for (double& c : cum) c /= total;
  }
  auto sample_lineup = [&](std::mt19937_64& r) {
    double u = u01(r);
    return static_cast<int>(std::lower_bound(cum.begin(), cum.end(), u) -
                            cum.begin());
  };
  // Per-team lineup keys for the pool, built once.
  std::vector<std::vector<LineupKey>> team_lineups(cfg.n_teams);
  for (int t = 0; t < cfg.n_teams; ++t) {
    team_lineups[t].reserve(pool);
    for (int k = 0; k < pool; ++k) {
      std::vector<PlayerId> ids;
      for (int j : subsets[k]) ids.push_back(player_id(t, j));
      team_lineups[t].push_back(
          LineupKey::make(std::span<const PlayerId>(ids)));
    }
  }

  auto& ps = result.possessions;
  ps.season_label = "synthetic";
  ps.weeks = cfg.weeks;
  std::int64_t order = 0;
  int game_no = 0;
  std::vector<int> teams(cfg.n_teams);
  std::iota(teams.begin(), teams.end(), 0);
  for (int week = 1; week <= cfg.weeks; ++week) {
    for (int round = 0; round < cfg.games_per_week; ++round) {
      // random pairing; each team plays exactly games_per_week games a week
      for (int i = cfg.n_teams - 1; i > 0; --i) {
        std::swap(teams[i], teams[uniform_int(rng, 0, i)]);
      }
      for (int g = 0; g + 1 < cfg.n_teams; g += 2) {
        ++game_no;
        char gid[32];
        std::snprintf(gid, sizeof(gid), "G%05d", game_no);
        for (auto [off_team, def_team] :
             {std::pair{teams[g], teams[g + 1]},
              std::pair{teams[g + 1], teams[g]}}) {
          int done = 0;
          while (done < cfg.possessions_per_game) {
            int stint = std::min(uniform_int(rng, kStintMin, kStintMax),
                                 cfg.possessions_per_game - done);
            const LineupKey& off =
                team_lineups[off_team][sample_lineup(rng)];
            const LineupKey& def =
                team_lineups[def_team][sample_lineup(rng)];
            double mu = true_expected_points(result.truth, off, def);
            auto p = point_distribution(mu, cfg.scoreless_rate);
            for (int s = 0; s < stint; ++s) {
              double u = u01(rng);
              int points = 0;
              double acc = p[0];
              while (points < 3 && u >= acc) acc += p[++points];
              ps.possessions.push_back(
                  Possession::make(points, off, def, gid, order++, week));
            }
            done += stint;
          }
        }
      }
    }
  }
  return result;
}

void write_synth(const SynthResult& result, const std::string& dir,
                 bool json_mirror) {
  std::filesystem::create_directories(dir);
  write_possessions_file(result.possessions, dir + "/possessions.csv",
                         kSynthSeasonStart, 7);
  const std::string path = dir + "/ground_truth.csv";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << "player_id,gamma_off_true,gamma_def_true\n";
  for (const auto& [pid, g] : result.truth.gamma_off) {
    out << pid << ',' << fmt_g6(g) << ','
        << fmt_g6(result.truth.gamma_def.at(pid)) << '\n';
  }
  if (json_mirror) {
    nlohmann::json j;
    j["league_mean_ppp"] = result.truth.league_mean_ppp;
    auto& players = j["players"] = nlohmann::json::array();
    for (const auto& [pid, g] : result.truth.gamma_off) {
      players.push_back({{"player_id", pid},
                         {"gamma_off_true", g},
                         {"gamma_def_true", result.truth.gamma_def.at(pid)}});
    }
    std::ofstream jout(path + ".json", std::ios::binary);
    if (!jout) throw Error(ErrorCode::IoError, "cannot write " + path + ".json");
    jout << j.dump(2) << '\n';
  }
}

}  // namespace lrapm
