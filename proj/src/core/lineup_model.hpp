#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ingest.hpp"
#include "rapm.hpp"
#include "solver.hpp"
#include "types.hpp"

namespace lrapm {

struct LineupPriorTable {
  std::map<LineupKey, double> off;  // pi_off, points per possession
  std::map<LineupKey, double> def;  // pi_def
  double league_ppp = 0;
  double fallback_player_rating = kDefaultFallbackRating;

  double prior(const LineupKey& lineup, Side side) const;
};

// pi_side(L) = league_ppp + sum of the five players' gamma_side, with the
// fallback substituted for players missing from the ratings.
LineupPriorTable build_priors(const PlayerRatings& r,
                              const std::vector<LineupKey>& lineups,
                              double league_ppp, double fallback);

enum class PredictionSource { Model, Prior, LeagueAverage };
const char* prediction_source_name(PredictionSource s);

struct LineupEntry {
  double beta_off = 0;
  double beta_def = 0;
  double pi_off = 0;
  double pi_def = 0;
  std::int64_t train_possessions = 0;  // offense + defense appearances
};

struct LineupModel {
  double beta0 = 0;
  double lambda = 0;
  double league_ppp = 0;
  double fallback_rating = kDefaultFallbackRating;
  std::map<LineupKey, LineupEntry> entries;
  // When present, priors for lineups outside `entries` are built on demand.
  std::optional<PlayerRatings> player_ratings;
};

LineupModel fit_lrapm(const PossessionSet& ps, const LineupPriorTable& priors,
                      double lambda, double tol = kDefaultSolverTol,
                      int max_iter = 0);

// Convenience: builds priors from ratings over the lineups in ps, then fits.
LineupModel fit_lrapm(const PossessionSet& ps, const PlayerRatings& ratings,
                      double lambda, double fallback = kDefaultFallbackRating,
                      double tol = kDefaultSolverTol, int max_iter = 0);

// Single-lambda grid search; validation is the last val_weeks weeks.
double select_lrapm_lambda(const PossessionSet& ps,
                           const PlayerRatings& ratings, int val_weeks,
                           const std::vector<double>& grid,
                           double fallback = kDefaultFallbackRating,
                           double tol = kDefaultSolverTol, int max_iter = 0);

struct Prediction {
  double expected_points = 0;  // ppp
  PredictionSource source = PredictionSource::Model;  // weakest source used
};

// y_hat = beta0 + b_off(off) - b_def(def). Fallback chain per side:
// fitted beta -> prior pi -> league average.
Prediction predict_possession(const LineupModel& m, const LineupKey& off,
                              const LineupKey& def);

// 100 * (ppp(mine on offense) - ppp(theirs on offense)).
double predict_matchup(const LineupModel& m, const LineupKey& mine,
                       const LineupKey& theirs);

void save_lineup_model(const LineupModel& m, std::ostream& out);
void save_lineup_model_file(const LineupModel& m, const std::string& path,
                            bool json_mirror = false);
LineupModel load_lineup_model(std::istream& in);
LineupModel load_lineup_model_file(const std::string& path);

}  // namespace lrapm
