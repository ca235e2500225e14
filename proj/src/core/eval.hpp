#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ingest.hpp"
#include "lineup_model.hpp"
#include "rapm.hpp"

namespace lrapm {

struct BacktestConfig {
  int first_test_week = 5;
  std::optional<double> lambda;     // fixed L-RAPM lambda
  std::vector<double> lambda_grid;  // searched when lambda is unset
  int val_weeks = 1;  // validation weeks inside the first training window
  std::vector<double> bucket_edges = {0, 10, 25, 50, 100, 250, 500};
  bool include_unseen = true;
  bool reselect_each_week = false;
  double fallback_rating = kDefaultFallbackRating;
  double tol = kDefaultSolverTol;
  int max_iter = 0;
};

struct WeekRow {
  int week = 0;
  double rmse_model = 0;
  double rmse_baseline = 0;
  double delta = 0;
  std::int64_t n = 0;
};

struct BucketRow {
  double lo = 0;
  double hi = 0;  // infinity for the last bucket
  double rmse_model = 0;
  double rmse_baseline = 0;
  double delta = 0;
  std::int64_t n = 0;
};

// One out-of-sample prediction. min_train_poss is the smaller of the
// offensive lineup's offensive and the defensive lineup's defensive training
// possession counts; a possession is on the unseen track when it is zero.
struct PredictionRecord {
  int week = 0;
  std::int64_t min_train_poss = 0;
  double se_model = 0;
  double se_baseline = 0;
  bool unseen = false;
};

struct BacktestReport {
  std::vector<WeekRow> weekly;         // main track
  std::vector<BucketRow> buckets;      // main track, pooled across weeks
  std::vector<WeekRow> unseen_weekly;  // prior vs league-average baseline
  std::vector<PredictionRecord> records;
  double lambda_used = 0;
  std::int64_t hygiene_checked = 0;  // train/test pairs inspected
  std::int64_t hygiene_overlap = 0;  // possessions in both; must be 0

  WeekRow pooled_main() const;
  std::optional<WeekRow> pooled_unseen() const;
};

// delta = (rmse_model - rmse_baseline) / rmse_baseline (negative = model
// improved on the baseline).
double delta(double rmse_model, double rmse_baseline);

// |delta_ppp| * league_ppp * possessions_per_game, in points per game.
double game_impact(double delta_ppp, double league_ppp,
                   int possessions_per_game);

BacktestReport expanding_backtest(const PossessionSet& ps,
                                  const BacktestConfig& cfg,
                                  const PlayerRatings& player_ratings);

// Re-pools the report's main-track squared errors with different edges.
std::vector<BucketRow> bucket_report(const BacktestReport& report,
                                     const std::vector<double>& edges);

// weekly.csv, buckets.csv, unseen.csv under dir (plus .json mirrors).
void write_report(const BacktestReport& report, const std::string& dir,
                  bool json_mirror = false);

}  // namespace lrapm
