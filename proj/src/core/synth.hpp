#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "ingest.hpp"
#include "types.hpp"

namespace lrapm {

struct SynthConfig {
  int n_teams = 8;
  int roster_size = 12;
  int weeks = 25;
  int games_per_week = 2;        // per team
  int possessions_per_game = 60;  // offensive possessions per team per game
  int lineup_pool = 792;          // capped at C(roster_size, 5)
  double sd_gamma_off = 0.02;
  double sd_gamma_def = 0.02;
  double league_mean_ppp = 1.10;
  double rotation_concentration = 0.9;  // Zipf exponent over ranked lineups
  double scoreless_rate = 0.5;          // target P(points == 0)
  std::uint64_t seed = 1;

  void validate() const;  // throws InvalidConfig
};

inline constexpr double kExpectedPointsClampLo = 0.0;
inline constexpr double kExpectedPointsClampHi = 3.0;

struct GroundTruth {
  std::map<PlayerId, double> gamma_off;
  std::map<PlayerId, double> gamma_def;
  double league_mean_ppp = 0;
};

// clamp(league_mean + sum gamma_off(off) - sum gamma_def(def), 0, 3).
// Throws UnknownPlayer for players outside the synthetic league.
double true_expected_points(const GroundTruth& gt, const LineupKey& off,
                            const LineupKey& def);

// Probabilities over points {0,1,2,3} with exact mean `mu` and zero mass as
// close to `scoreless_rate` as the mean allows.
std::array<double, 4> point_distribution(double mu, double scoreless_rate);

struct SynthResult {
  PossessionSet possessions;
  GroundTruth truth;
};

SynthResult generate(const SynthConfig& cfg);

inline constexpr const char* kSynthSeasonStart = "2024-01-06";

// possessions.csv + ground_truth.csv under dir.
void write_synth(const SynthResult& result, const std::string& dir,
                 bool json_mirror = false);

}  // namespace lrapm
