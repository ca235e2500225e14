#include "lrapm/lrapm.h"

#include <cstring>
#include <string>

#include "core/baseline.hpp"
#include "core/eval.hpp"
#include "core/ingest.hpp"
#include "core/lineup_model.hpp"
#include "core/rapm.hpp"
#include "core/synth.hpp"
#include "core/types.hpp"

struct lrapm_possessions {
  lrapm::PossessionSet ps;
};
struct lrapm_player_ratings {
  lrapm::PlayerRatings ratings;
};
struct lrapm_lineup_model {
  lrapm::LineupModel model;
};

namespace {

thread_local std::string g_last_error;

lrapm_status status_for(lrapm::ErrorCode code) {
  using EC = lrapm::ErrorCode;
  switch (code) {
    case EC::InvalidArgument: return LRAPM_ERR_INVALID_ARGUMENT;
    case EC::BadLineupSize:
    case EC::DuplicatePlayer: return LRAPM_ERR_BAD_LINEUP;
    case EC::ParseError: return LRAPM_ERR_PARSE;
    case EC::ValidationError: return LRAPM_ERR_VALIDATION;
    case EC::EmptyData: return LRAPM_ERR_EMPTY_DATA;
    case EC::DimensionMismatch: return LRAPM_ERR_DIMENSION_MISMATCH;
    case EC::NonConvergence: return LRAPM_ERR_NONCONVERGENCE;
    case EC::MissingPrior: return LRAPM_ERR_MISSING_PRIOR;
    case EC::InsufficientWeeks: return LRAPM_ERR_INSUFFICIENT_WEEKS;
    case EC::UnknownPlayer: return LRAPM_ERR_UNKNOWN_PLAYER;
    case EC::ZeroBaseline: return LRAPM_ERR_ZERO_BASELINE;
    case EC::InvalidConfig: return LRAPM_ERR_INVALID_CONFIG;
    case EC::IoError: return LRAPM_ERR_IO;
  }
  return LRAPM_ERR_INTERNAL;
}

template <typename Fn>
lrapm_status guarded(Fn&& fn) {
  try {
    fn();
    return LRAPM_OK;
  } catch (const lrapm::Error& e) {
    g_last_error = e.what();
    return status_for(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LRAPM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return LRAPM_ERR_INTERNAL;
  }
}

lrapm_status invalid(const char* msg) {
  g_last_error = msg;
  return LRAPM_ERR_INVALID_ARGUMENT;
}

lrapm::LineupKey key_from(const char* const players[5]) {
  std::vector<lrapm::PlayerId> ids;
  ids.reserve(5);
  for (int i = 0; i < 5; ++i) {
    if (!players[i]) {
      throw lrapm::Error(lrapm::ErrorCode::InvalidArgument,
                         "null player id");
    }
    ids.emplace_back(players[i]);
  }
  return lrapm::LineupKey::make(std::span<const lrapm::PlayerId>(ids));
}

lrapm::SynthConfig synth_config_from(const lrapm_synth_config& c) {
  lrapm::SynthConfig cfg;
  cfg.n_teams = c.n_teams;
  cfg.roster_size = c.roster_size;
  cfg.weeks = c.weeks;
  cfg.games_per_week = c.games_per_week;
  cfg.possessions_per_game = c.possessions_per_game;
  cfg.lineup_pool = c.lineup_pool;
  cfg.sd_gamma_off = c.sd_gamma_off;
  cfg.sd_gamma_def = c.sd_gamma_def;
  cfg.league_mean_ppp = c.league_mean_ppp;
  cfg.rotation_concentration = c.rotation_concentration;
  cfg.scoreless_rate = c.scoreless_rate;
  cfg.seed = c.seed;
  return cfg;
}

}  // namespace

extern "C" {

const char* lrapm_status_name(lrapm_status status) {
  switch (status) {
    case LRAPM_OK: return "ok";
    case LRAPM_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case LRAPM_ERR_BAD_LINEUP: return "bad_lineup";
    case LRAPM_ERR_PARSE: return "parse_error";
    case LRAPM_ERR_VALIDATION: return "validation_error";
    case LRAPM_ERR_EMPTY_DATA: return "empty_data";
    case LRAPM_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
    case LRAPM_ERR_NONCONVERGENCE: return "nonconvergence";
    case LRAPM_ERR_MISSING_PRIOR: return "missing_prior";
    case LRAPM_ERR_INSUFFICIENT_WEEKS: return "insufficient_weeks";
    case LRAPM_ERR_UNKNOWN_PLAYER: return "unknown_player";
    case LRAPM_ERR_ZERO_BASELINE: return "zero_baseline";
    case LRAPM_ERR_INVALID_CONFIG: return "invalid_config";
    case LRAPM_ERR_IO: return "io_error";
    case LRAPM_ERR_INTERNAL: return "internal_error";
  }
  return "?";
}

const char* lrapm_last_error(void) { return g_last_error.c_str(); }

lrapm_status lrapm_possessions_load(const char* path,
                                    const char* season_start,
                                    int week_length_days, int skip_bad_rows,
                                    lrapm_possessions** out) {
  if (!path || !out) return invalid("path and out are required");
  return guarded([&] {
    auto ps = lrapm::parse_possessions_file(
        path, season_start ? season_start : "",
        week_length_days > 0 ? week_length_days : 7, skip_bad_rows != 0);
    *out = new lrapm_possessions{std::move(ps)};
  });
}

lrapm_status lrapm_possessions_save(const lrapm_possessions* ps,
                                    const char* path,
                                    const char* season_start) {
  if (!ps || !path) return invalid("ps and path are required");
  return guarded([&] {
    lrapm::write_possessions_file(
        ps->ps, path,
        season_start ? season_start : lrapm::kSynthSeasonStart, 7);
  });
}

void lrapm_possessions_free(lrapm_possessions* ps) { delete ps; }

int64_t lrapm_possessions_count(const lrapm_possessions* ps) {
  return ps ? static_cast<int64_t>(ps->ps.possessions.size()) : 0;
}

int lrapm_possessions_weeks(const lrapm_possessions* ps) {
  return ps ? ps->ps.weeks : 0;
}

int64_t lrapm_possessions_skipped(const lrapm_possessions* ps) {
  return ps ? ps->ps.skipped_rows : 0;
}

lrapm_status lrapm_league_ppp(const lrapm_possessions* ps, double* out) {
  if (!ps || !out) return invalid("ps and out are required");
  return guarded([&] { *out = lrapm::league_ppp(ps->ps); });
}

lrapm_status lrapm_usage_stats(const lrapm_possessions* ps, double* off_mean,
                               double* off_std, double* def_mean,
                               double* def_std) {
  if (!ps) return invalid("ps is required");
  return guarded([&] {
    auto st = lrapm::usage_stats(ps->ps);
    if (off_mean) *off_mean = st.off_mean;
    if (off_std) *off_std = st.off_std;
    if (def_mean) *def_mean = st.def_mean;
    if (def_std) *def_std = st.def_std;
  });
}

void lrapm_synth_config_default(lrapm_synth_config* cfg) {
  if (!cfg) return;
  lrapm::SynthConfig d;
  cfg->n_teams = d.n_teams;
  cfg->roster_size = d.roster_size;
  cfg->weeks = d.weeks;
  cfg->games_per_week = d.games_per_week;
  cfg->possessions_per_game = d.possessions_per_game;
  cfg->lineup_pool = d.lineup_pool;
  cfg->sd_gamma_off = d.sd_gamma_off;
  cfg->sd_gamma_def = d.sd_gamma_def;
  cfg->league_mean_ppp = d.league_mean_ppp;
  cfg->rotation_concentration = d.rotation_concentration;
  cfg->scoreless_rate = d.scoreless_rate;
  cfg->seed = d.seed;
}

lrapm_status lrapm_synth_generate(const lrapm_synth_config* cfg,
                                  lrapm_possessions** out) {
  if (!cfg || !out) return invalid("cfg and out are required");
  return guarded([&] {
    auto result = lrapm::generate(synth_config_from(*cfg));
    *out = new lrapm_possessions{std::move(result.possessions)};
  });
}

lrapm_status lrapm_synth_write(const lrapm_synth_config* cfg, const char* dir,
                               int json_mirror) {
  if (!cfg || !dir) return invalid("cfg and dir are required");
  return guarded([&] {
    auto result = lrapm::generate(synth_config_from(*cfg));
    lrapm::write_synth(result, dir, json_mirror != 0);
  });
}

lrapm_status lrapm_fit_rapm(const lrapm_possessions* ps, double lambda_off,
                            double lambda_def, double tol, int max_iter,
                            lrapm_player_ratings** out) {
  if (!ps || !out) return invalid("ps and out are required");
  return guarded([&] {
    auto r = lrapm::fit_rapm(ps->ps, lambda_off, lambda_def,
                             tol > 0 ? tol : lrapm::kDefaultSolverTol,
                             max_iter);
    *out = new lrapm_player_ratings{std::move(r)};
  });
}

lrapm_status lrapm_select_rapm_lambdas(const lrapm_possessions* ps,
                                       int val_weeks, const double* grid_off,
                                       int n_off, const double* grid_def,
                                       int n_def, double tol, int max_iter,
                                       double* best_off, double* best_def) {
  if (!ps || !grid_off || !grid_def || !best_off || !best_def) {
    return invalid("ps, grids, and outputs are required");
  }
  return guarded([&] {
    auto best = lrapm::select_rapm_lambdas(
        ps->ps, val_weeks, std::vector<double>(grid_off, grid_off + n_off),
        std::vector<double>(grid_def, grid_def + n_def),
        tol > 0 ? tol : lrapm::kDefaultSolverTol, max_iter);
    *best_off = best.lambda_off;
    *best_def = best.lambda_def;
  });
}

lrapm_status lrapm_player_ratings_save(const lrapm_player_ratings* r,
                                       const char* path, int json_mirror) {
  if (!r || !path) return invalid("r and path are required");
  return guarded(
      [&] { lrapm::save_player_ratings_file(r->ratings, path, json_mirror); });
}

lrapm_status lrapm_player_ratings_load(const char* path,
                                       lrapm_player_ratings** out) {
  if (!path || !out) return invalid("path and out are required");
  return guarded([&] {
    *out = new lrapm_player_ratings{lrapm::load_player_ratings_file(path)};
  });
}

void lrapm_player_ratings_free(lrapm_player_ratings* r) { delete r; }

lrapm_status lrapm_player_ratings_gamma0(const lrapm_player_ratings* r,
                                         double* out) {
  if (!r || !out) return invalid("r and out are required");
  *out = r->ratings.gamma0;
  return LRAPM_OK;
}

lrapm_status lrapm_player_rating(const lrapm_player_ratings* r,
                                 const char* player_id, int side,
                                 double fallback, double* out) {
  if (!r || !player_id || !out) return invalid("r, player_id, out required");
  if (side != 0 && side != 1) return invalid("side must be 0 or 1");
  *out = r->ratings.rating(player_id,
                           side == 0 ? lrapm::Side::Off : lrapm::Side::Def,
                           fallback);
  return LRAPM_OK;
}

lrapm_status lrapm_fit_lineup_model(const lrapm_possessions* ps,
                                    const lrapm_player_ratings* r,
                                    double lambda, double fallback_rating,
                                    double tol, int max_iter,
                                    lrapm_lineup_model** out) {
  if (!ps || !r || !out) return invalid("ps, r and out are required");
  return guarded([&] {
    auto m = lrapm::fit_lrapm(ps->ps, r->ratings, lambda, fallback_rating,
                              tol > 0 ? tol : lrapm::kDefaultSolverTol,
                              max_iter);
    *out = new lrapm_lineup_model{std::move(m)};
  });
}

lrapm_status lrapm_select_lineup_lambda(const lrapm_possessions* ps,
                                        const lrapm_player_ratings* r,
                                        int val_weeks, const double* grid,
                                        int n_grid, double fallback_rating,
                                        double tol, int max_iter,
                                        double* best) {
  if (!ps || !r || !grid || !best) {
    return invalid("ps, r, grid, best are required");
  }
  return guarded([&] {
    *best = lrapm::select_lrapm_lambda(
        ps->ps, r->ratings, val_weeks,
        std::vector<double>(grid, grid + n_grid), fallback_rating,
        tol > 0 ? tol : lrapm::kDefaultSolverTol, max_iter);
  });
}

lrapm_status lrapm_lineup_model_save(const lrapm_lineup_model* m,
                                     const char* path, int json_mirror) {
  if (!m || !path) return invalid("m and path are required");
  return guarded(
      [&] { lrapm::save_lineup_model_file(m->model, path, json_mirror); });
}

lrapm_status lrapm_lineup_model_load(const char* path,
                                     lrapm_lineup_model** out) {
  if (!path || !out) return invalid("path and out are required");
  return guarded([&] {
    *out = new lrapm_lineup_model{lrapm::load_lineup_model_file(path)};
  });
}

lrapm_status lrapm_lineup_model_attach_ratings(lrapm_lineup_model* m,
                                               const lrapm_player_ratings* r) {
  if (!m || !r) return invalid("m and r are required");
  m->model.player_ratings = r->ratings;
  return LRAPM_OK;
}

void lrapm_lineup_model_free(lrapm_lineup_model* m) { delete m; }

lrapm_status lrapm_predict_possession(const lrapm_lineup_model* m,
                                      const char* const off[5],
                                      const char* const def[5],
                                      double* expected_points, char* source) {
  if (!m || !off || !def || !expected_points) {
    return invalid("m, off, def, expected_points are required");
  }
  return guarded([&] {
    auto pred =
        lrapm::predict_possession(m->model, key_from(off), key_from(def));
    *expected_points = pred.expected_points;
    if (source) {
      std::strncpy(source, lrapm::prediction_source_name(pred.source), 15);
      source[15] = '\0';
    }
  });
}

lrapm_status lrapm_predict_matchup(const lrapm_lineup_model* m,
                                   const char* const mine[5],
                                   const char* const theirs[5],
                                   double* net_per100) {
  if (!m || !mine || !theirs || !net_per100) {
    return invalid("m, mine, theirs, net_per100 are required");
  }
  return guarded([&] {
    *net_per100 =
        lrapm::predict_matchup(m->model, key_from(mine), key_from(theirs));
  });
}

void lrapm_backtest_config_default(lrapm_backtest_config* cfg) {
  if (!cfg) return;
  lrapm::BacktestConfig d;
  cfg->first_test_week = d.first_test_week;
  cfg->lambda = -1.0;
  cfg->lambda_grid = nullptr;
  cfg->n_lambda_grid = 0;
  cfg->val_weeks = d.val_weeks;
  cfg->bucket_edges = nullptr;
  cfg->n_bucket_edges = 0;
  cfg->include_unseen = d.include_unseen ? 1 : 0;
  cfg->reselect_each_week = d.reselect_each_week ? 1 : 0;
  cfg->fallback_rating = d.fallback_rating;
  cfg->tol = d.tol;
  cfg->max_iter = d.max_iter;
}

lrapm_status lrapm_backtest_run(const lrapm_possessions* ps,
                                const lrapm_player_ratings* r,
                                const lrapm_backtest_config* cfg,
                                const char* dir, int json_mirror,
                                double* overall_delta, double* unseen_delta) {
  if (!ps || !r || !cfg || !dir) {
    return invalid("ps, r, cfg, dir are required");
  }
  return guarded([&] {
    lrapm::BacktestConfig c;
    c.first_test_week = cfg->first_test_week;
    if (cfg->lambda >= 0) c.lambda = cfg->lambda;
    if (cfg->lambda_grid && cfg->n_lambda_grid > 0) {
      c.lambda_grid.assign(cfg->lambda_grid,
                           cfg->lambda_grid + cfg->n_lambda_grid);
    }
    c.val_weeks = cfg->val_weeks;
    if (cfg->bucket_edges && cfg->n_bucket_edges > 0) {
      c.bucket_edges.assign(cfg->bucket_edges,
                            cfg->bucket_edges + cfg->n_bucket_edges);
    }
    c.include_unseen = cfg->include_unseen != 0;
    c.reselect_each_week = cfg->reselect_each_week != 0;
    c.fallback_rating = cfg->fallback_rating;
    c.tol = cfg->tol > 0 ? cfg->tol : lrapm::kDefaultSolverTol;
    c.max_iter = cfg->max_iter;
    auto report = lrapm::expanding_backtest(ps->ps, c, r->ratings);
    lrapm::write_report(report, dir, json_mirror != 0);
    if (overall_delta) *overall_delta = report.pooled_main().delta;
    if (unseen_delta) {
      auto pooled = report.pooled_unseen();
      *unseen_delta = pooled ? pooled->delta : 0.0;
    }
  });
}

double lrapm_winston_adjust(double raw_rating_per100,
                            double avg_opponent_rating_per100) {
  return lrapm::winston_adjust(raw_rating_per100, avg_opponent_rating_per100);
}

lrapm_status lrapm_delta(double rmse_model, double rmse_baseline,
                         double* out) {
  if (!out) return invalid("out is required");
  return guarded([&] { *out = lrapm::delta(rmse_model, rmse_baseline); });
}

double lrapm_game_impact(double delta_ppp, double league_ppp,
                         int possessions_per_game) {
  return lrapm::game_impact(delta_ppp, league_ppp, possessions_per_game);
}

}  // extern "C"
