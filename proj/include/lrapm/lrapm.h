/* lrapm - lineup and player rating toolkit.
 *
 * C API over the core library: opaque handles, integer status codes, and a
 * thread-local last-error message. All functions returning lrapm_status set
 * the message retrievable via lrapm_last_error() on failure.
 */
#ifndef LRAPM_H
#define LRAPM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define LRAPM_API __declspec(dllexport)
#else
#define LRAPM_API __attribute__((visibility("default")))
#endif

typedef enum lrapm_status {
  LRAPM_OK = 0,
  LRAPM_ERR_INVALID_ARGUMENT = 1,
  LRAPM_ERR_BAD_LINEUP = 2,      /* wrong size or duplicate player */
  LRAPM_ERR_PARSE = 3,
  LRAPM_ERR_VALIDATION = 4,
  LRAPM_ERR_EMPTY_DATA = 5,
  LRAPM_ERR_DIMENSION_MISMATCH = 6,
  LRAPM_ERR_NONCONVERGENCE = 7,
  LRAPM_ERR_MISSING_PRIOR = 8,
  LRAPM_ERR_INSUFFICIENT_WEEKS = 9,
  LRAPM_ERR_UNKNOWN_PLAYER = 10,
  LRAPM_ERR_ZERO_BASELINE = 11,
  LRAPM_ERR_INVALID_CONFIG = 12,
  LRAPM_ERR_IO = 13,
  LRAPM_ERR_INTERNAL = 14
} lrapm_status;

LRAPM_API const char* lrapm_status_name(lrapm_status status);

/* Message for the most recent failure on this thread. */
LRAPM_API const char* lrapm_last_error(void);

typedef struct lrapm_possessions lrapm_possessions;
typedef struct lrapm_player_ratings lrapm_player_ratings;
typedef struct lrapm_lineup_model lrapm_lineup_model;

/* ---- possessions ------------------------------------------------------- */

/* season_start: ISO YYYY-MM-DD, or NULL to use the first game date.
 * week_length_days <= 0 defaults to 7. */
LRAPM_API lrapm_status lrapm_possessions_load(const char* path,
                                              const char* season_start,
                                              int week_length_days,
                                              int skip_bad_rows,
                                              lrapm_possessions** out);
LRAPM_API lrapm_status lrapm_possessions_save(const lrapm_possessions* ps,
                                              const char* path,
                                              const char* season_start);
LRAPM_API void lrapm_possessions_free(lrapm_possessions* ps);
LRAPM_API int64_t lrapm_possessions_count(const lrapm_possessions* ps);
LRAPM_API int lrapm_possessions_weeks(const lrapm_possessions* ps);
LRAPM_API int64_t lrapm_possessions_skipped(const lrapm_possessions* ps);
LRAPM_API lrapm_status lrapm_league_ppp(const lrapm_possessions* ps,
                                        double* out);
/* Per-lineup possession-count statistics (population std). Any output
 * pointer may be NULL. */
LRAPM_API lrapm_status lrapm_usage_stats(const lrapm_possessions* ps,
                                         double* off_mean, double* off_std,
                                         double* def_mean, double* def_std);

/* ---- synthetic league -------------------------------------------------- */

typedef struct lrapm_synth_config {
  int n_teams;
  int roster_size;
  int weeks;
  int games_per_week;
  int possessions_per_game;
  int lineup_pool;
  double sd_gamma_off;
  double sd_gamma_def;
  double league_mean_ppp;
  double rotation_concentration;
  double scoreless_rate;
  uint64_t seed;
} lrapm_synth_config;

LRAPM_API void lrapm_synth_config_default(lrapm_synth_config* cfg);
LRAPM_API lrapm_status lrapm_synth_generate(const lrapm_synth_config* cfg,
                                            lrapm_possessions** out);
/* Writes possessions.csv and ground_truth.csv under dir. */
LRAPM_API lrapm_status lrapm_synth_write(const lrapm_synth_config* cfg,
                                         const char* dir, int json_mirror);

/* ---- player ratings (RAPM) --------------------------------------------- */

/* tol <= 0 defaults to 1e-8; max_iter <= 0 defaults to 10 * columns. */
LRAPM_API lrapm_status lrapm_fit_rapm(const lrapm_possessions* ps,
                                      double lambda_off, double lambda_def,
                                      double tol, int max_iter,
                                      lrapm_player_ratings** out);
/* Grid search over the off x def Cartesian product; the last val_weeks
 * weeks are the validation split. */
LRAPM_API lrapm_status lrapm_select_rapm_lambdas(
    const lrapm_possessions* ps, int val_weeks, const double* grid_off,
    int n_off, const double* grid_def, int n_def, double tol, int max_iter,
    double* best_off, double* best_def);
LRAPM_API lrapm_status lrapm_player_ratings_save(
    const lrapm_player_ratings* r, const char* path, int json_mirror);
LRAPM_API lrapm_status lrapm_player_ratings_load(const char* path,
                                                 lrapm_player_ratings** out);
LRAPM_API void lrapm_player_ratings_free(lrapm_player_ratings* r);
LRAPM_API lrapm_status lrapm_player_ratings_gamma0(
    const lrapm_player_ratings* r, double* out);
/* side: 0 = offense, 1 = defense. Unseen players get `fallback`. */
LRAPM_API lrapm_status lrapm_player_rating(const lrapm_player_ratings* r,
                                           const char* player_id, int side,
                                           double fallback, double* out);

/* ---- lineup model (L-RAPM) --------------------------------------------- */

LRAPM_API lrapm_status lrapm_fit_lineup_model(const lrapm_possessions* ps,
                                              const lrapm_player_ratings* r,
                                              double lambda,
                                              double fallback_rating,
                                              double tol, int max_iter,
                                              lrapm_lineup_model** out);
LRAPM_API lrapm_status lrapm_select_lineup_lambda(
    const lrapm_possessions* ps, const lrapm_player_ratings* r, int val_weeks,
    const double* grid, int n_grid, double fallback_rating, double tol,
    int max_iter, double* best);
LRAPM_API lrapm_status lrapm_lineup_model_save(const lrapm_lineup_model* m,
                                               const char* path,
                                               int json_mirror);
LRAPM_API lrapm_status lrapm_lineup_model_load(const char* path,
                                               lrapm_lineup_model** out);
/* Enables prior-based predictions for lineups outside the training set of a
 * loaded model. Copies the ratings; the handle stays caller-owned. */
LRAPM_API lrapm_status lrapm_lineup_model_attach_ratings(
    lrapm_lineup_model* m, const lrapm_player_ratings* r);
LRAPM_API void lrapm_lineup_model_free(lrapm_lineup_model* m);

/* Expected points for one possession, offense vs defense. `source` (may be
 * NULL) receives "model", "prior", or "league_average" and must hold at
 * least 16 bytes. */
LRAPM_API lrapm_status lrapm_predict_possession(const lrapm_lineup_model* m,
                                                const char* const off[5],
                                                const char* const def[5],
                                                double* expected_points,
                                                char* source);
/* Net points per 100 possessions for `mine` over `theirs`. */
LRAPM_API lrapm_status lrapm_predict_matchup(const lrapm_lineup_model* m,
                                             const char* const mine[5],
                                             const char* const theirs[5],
                                             double* net_per100);

/* ---- evaluation --------------------------------------------------------- */

typedef struct lrapm_backtest_config {
  int first_test_week;     /* default 5 */
  double lambda;           /* < 0 means "search the grid" */
  const double* lambda_grid;
  int n_lambda_grid;
  int val_weeks;           /* validation weeks for the grid search */
  const double* bucket_edges; /* ascending; last bucket is open-ended */
  int n_bucket_edges;
  int include_unseen;
  int reselect_each_week;
  double fallback_rating;
  double tol;
  int max_iter;
} lrapm_backtest_config;

LRAPM_API void lrapm_backtest_config_default(lrapm_backtest_config* cfg);
/* Runs the expanding-window backtest and writes weekly.csv, buckets.csv and
 * unseen.csv under dir. Summary outputs may be NULL. */
LRAPM_API lrapm_status lrapm_backtest_run(const lrapm_possessions* ps,
                                          const lrapm_player_ratings* r,
                                          const lrapm_backtest_config* cfg,
                                          const char* dir, int json_mirror,
                                          double* overall_delta,
                                          double* unseen_delta);

/* ---- small computations -------------------------------------------------*/

LRAPM_API double lrapm_winston_adjust(double raw_rating_per100,
                                      double avg_opponent_rating_per100);
LRAPM_API lrapm_status lrapm_delta(double rmse_model, double rmse_baseline,
                                   double* out);
LRAPM_API double lrapm_game_impact(double delta_ppp, double league_ppp,
                                   int possessions_per_game);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LRAPM_H */
