// lrapm command-line front end. Talks to the library exclusively through the
// C API so it doubles as a smoke test for the shared-library surface.
//
// Exit codes: 0 success, 1 data/computation error, 2 usage error.

#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lrapm/lrapm.h"

namespace {

struct ApiError : std::runtime_error {
  explicit ApiError(lrapm_status s)
      : std::runtime_error(std::string(lrapm_status_name(s)) + ": " +
                           lrapm_last_error()) {}
};

void check(lrapm_status s) {
  if (s != LRAPM_OK) throw ApiError(s);
}

using PossessionsPtr =
    std::unique_ptr<lrapm_possessions, decltype(&lrapm_possessions_free)>;
using RatingsPtr = std::unique_ptr<lrapm_player_ratings,
                                   decltype(&lrapm_player_ratings_free)>;
using ModelPtr =
    std::unique_ptr<lrapm_lineup_model, decltype(&lrapm_lineup_model_free)>;

struct LoadOpts {
  std::string season_start;
  int week_length_days = 7;
  bool skip_bad_rows = false;
};

void add_load_opts(CLI::App* cmd, LoadOpts& o) {
  cmd->add_option("--season-start", o.season_start,
                  "Season start date (YYYY-MM-DD); default: first game date");
  cmd->add_option("--week-length-days", o.week_length_days,
                  "Days per week bucket (default 7)");
  cmd->add_flag("--skip-bad-rows", o.skip_bad_rows,
                "Skip malformed rows instead of failing");
}

PossessionsPtr load_possessions(const std::string& path, const LoadOpts& o) {
  lrapm_possessions* ps = nullptr;
  check(lrapm_possessions_load(
      path.c_str(), o.season_start.empty() ? nullptr : o.season_start.c_str(),
      o.week_length_days, o.skip_bad_rows ? 1 : 0, &ps));
  PossessionsPtr out(ps, lrapm_possessions_free);
  if (long long skipped = lrapm_possessions_skipped(ps); skipped > 0) {
    std::fprintf(stderr, "warning: skipped %lld malformed rows\n", skipped);
  }
  return out;
}

RatingsPtr load_ratings(const std::string& path) {
  lrapm_player_ratings* r = nullptr;
  check(lrapm_player_ratings_load(path.c_str(), &r));
  return RatingsPtr(r, lrapm_player_ratings_free);
}

// Accepts either 5 separate ids or one "p1,p2,p3,p4,p5" token.
std::vector<std::string> normalize_lineup(const std::vector<std::string>& in) {
  std::vector<std::string> ids;
  for (const auto& tok : in) {
    std::size_t start = 0;
    while (true) {
      std::size_t comma = tok.find(',', start);
      ids.push_back(tok.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (ids.size() != 5) {
    throw CLI::ValidationError("lineup", "expected exactly 5 player ids");
  }
  return ids;
}

std::array<const char*, 5> lineup_ptrs(const std::vector<std::string>& ids) {
  std::array<const char*, 5> p{};
  for (int i = 0; i < 5; ++i) p[i] = ids[i].c_str();
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lrapm: regularized player and lineup ratings"};
  app.require_subcommand(1);
  bool json_mirror = false;
  app.add_flag("--json", json_mirror,
               "Also write .json mirrors next to CSV outputs");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic season");
  lrapm_synth_config scfg;
  lrapm_synth_config_default(&scfg);
  std::string synth_dir;
  synth->add_option("--out", synth_dir, "Output directory")->required();
  synth->add_option("--teams", scfg.n_teams, "Number of teams");
  synth->add_option("--roster", scfg.roster_size, "Players per team");
  synth->add_option("--weeks", scfg.weeks, "Season length in weeks");
  synth->add_option("--games-per-week", scfg.games_per_week,
                    "Games per team per week");
  synth->add_option("--possessions-per-game", scfg.possessions_per_game,
                    "Offensive possessions per team per game");
  synth->add_option("--lineup-pool", scfg.lineup_pool,
                    "Distinct lineups per team");
  synth->add_option("--sd-gamma-off", scfg.sd_gamma_off,
                    "Std dev of true offensive effects (ppp)");
  synth->add_option("--sd-gamma-def", scfg.sd_gamma_def,
                    "Std dev of true defensive effects (ppp)");
  synth->add_option("--league-ppp", scfg.league_mean_ppp,
                    "League mean points per possession");
  synth->add_option("--rotation-concentration", scfg.rotation_concentration,
                    "Zipf exponent over ranked lineups");
  synth->add_option("--scoreless-rate", scfg.scoreless_rate,
                    "Target share of zero-point possessions");
  synth->add_option("--seed", scfg.seed, "RNG seed");

  // fit-rapm
  auto* fit_rapm = app.add_subcommand("fit-rapm", "Fit player RAPM ratings");
  std::string fr_poss, fr_out;
  LoadOpts fr_load;
  double fr_loff = -1, fr_ldef = -1;
  std::vector<double> fr_grid_off, fr_grid_def;
  int fr_val_weeks = 1;
  fit_rapm->add_option("--possessions", fr_poss, "Possession CSV")->required();
  fit_rapm->add_option("--out", fr_out, "Output ratings CSV")->required();
  fit_rapm->add_option("--lambda-off", fr_loff, "Offense ridge penalty");
  fit_rapm->add_option("--lambda-def", fr_ldef, "Defense ridge penalty");
  fit_rapm->add_option("--grid-off", fr_grid_off,
                       "Offense penalty candidates (grid search)");
  fit_rapm->add_option("--grid-def", fr_grid_def,
                       "Defense penalty candidates");
  fit_rapm->add_option("--val-weeks", fr_val_weeks,
                       "Validation weeks for the grid search");
  add_load_opts(fit_rapm, fr_load);

  // fit-lrapm
  auto* fit_lrapm =
      app.add_subcommand("fit-lrapm", "Fit the prior-centered lineup model");
  std::string fl_poss, fl_ratings, fl_out;
  LoadOpts fl_load;
  double fl_lambda = -1, fl_fallback = -0.01;
  std::vector<double> fl_grid;
  int fl_val_weeks = 1;
  fit_lrapm->add_option("--possessions", fl_poss, "Possession CSV")
      ->required();
  fit_lrapm
      ->add_option("--player-ratings,--ratings", fl_ratings,
                   "Player ratings CSV")
      ->required()
      ->check(CLI::ExistingFile);
  fit_lrapm->add_option("--out", fl_out, "Output model CSV")->required();
  fit_lrapm->add_option("--lambda", fl_lambda, "Lineup ridge penalty");
  fit_lrapm->add_option("--grid", fl_grid,
                        "Penalty candidates (grid search)");
  fit_lrapm->add_option("--val-weeks", fl_val_weeks,
                        "Validation weeks for the grid search");
  fit_lrapm->add_option("--fallback-rating", fl_fallback,
                        "Rating for players missing from the ratings file");
  add_load_opts(fit_lrapm, fl_load);

  // predict
  auto* predict = app.add_subcommand("predict", "Predict with a fitted model");
  std::string pr_model, pr_ratings;
  std::vector<std::string> pr_off, pr_def;
  bool pr_matchup = false;
  predict->add_option("--model", pr_model, "Lineup model CSV")->required();
  predict->add_option("--ratings", pr_ratings,
                      "Player ratings CSV (enables prior fallback)");
  predict
      ->add_option("--off", pr_off,
                   "Offensive lineup (5 ids, or one comma-joined token)")
      ->required()
      ->expected(1, 5);
  predict
      ->add_option("--def", pr_def,
                   "Defensive lineup (5 ids, or one comma-joined token)")
      ->required()
      ->expected(1, 5);
  predict->add_flag("--per-100,--matchup", pr_matchup,
                    "Report net points per 100 (off lineup vs def lineup)");

  // backtest
  auto* backtest =
      app.add_subcommand("backtest", "Expanding-window out-of-sample test");
  std::string bt_poss, bt_ratings, bt_dir;
  LoadOpts bt_load;
  lrapm_backtest_config bcfg;
  lrapm_backtest_config_default(&bcfg);
  std::vector<double> bt_grid, bt_edges;
  backtest->add_option("--possessions", bt_poss, "Possession CSV")
      ->required();
  backtest
      ->add_option("--player-ratings,--ratings", bt_ratings,
                   "Player ratings CSV")
      ->required()
      ->check(CLI::ExistingFile);
  backtest->add_option("--out", bt_dir, "Report directory")->required();
  backtest->add_option("--lambda", bcfg.lambda,
                       "Fixed lineup penalty (omit to grid-search)");
  backtest->add_option("--grid", bt_grid, "Penalty candidates");
  backtest->add_option("--first-test-week", bcfg.first_test_week,
                       "First week scored out of sample");
  backtest->add_option("--val-weeks", bcfg.val_weeks,
                       "Validation weeks for the grid search");
  backtest->add_option("--buckets", bt_edges,
                       "Training-possession bucket edges");
  backtest->add_option("--fallback-rating", bcfg.fallback_rating,
                       "Rating for players missing from the ratings file");
  bool bt_no_unseen = false, bt_reselect = false;
  backtest->add_flag("--no-unseen", bt_no_unseen,
                     "Drop never-seen lineups instead of scoring them");
  backtest->add_flag("--reselect-each-week", bt_reselect,
                     "Re-run the penalty search every test week");
  add_load_opts(backtest, bt_load);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error
  }

  try {
    if (*synth) {
      check(lrapm_synth_write(&scfg, synth_dir.c_str(), json_mirror ? 1 : 0));
      std::printf("wrote %s/possessions.csv and ground_truth.csv\n",
                  synth_dir.c_str());
    } else if (*fit_rapm) {
      auto ps = load_possessions(fr_poss, fr_load);
      double loff = fr_loff, ldef = fr_ldef;
      if (loff < 0 || ldef < 0) {
        if (fr_grid_off.empty() || fr_grid_def.empty()) {
          std::fprintf(stderr,
                       "either --lambda-off/--lambda-def or "
                       "--grid-off/--grid-def is required\n");
          return 2;
        }
        check(lrapm_select_rapm_lambdas(
            ps.get(), fr_val_weeks, fr_grid_off.data(),
            static_cast<int>(fr_grid_off.size()), fr_grid_def.data(),
            static_cast<int>(fr_grid_def.size()), 0, 0, &loff, &ldef));
        std::printf("selected lambda_off=%g lambda_def=%g\n", loff, ldef);
      }
      lrapm_player_ratings* r = nullptr;
      check(lrapm_fit_rapm(ps.get(), loff, ldef, 0, 0, &r));
      RatingsPtr ratings(r, lrapm_player_ratings_free);
      check(lrapm_player_ratings_save(ratings.get(), fr_out.c_str(),
                                      json_mirror ? 1 : 0));
      double g0 = 0;
      check(lrapm_player_ratings_gamma0(ratings.get(), &g0));
      std::printf("wrote %s (gamma0=%g)\n", fr_out.c_str(), g0);
    } else if (*fit_lrapm) {
      auto ps = load_possessions(fl_poss, fl_load);
      auto ratings = load_ratings(fl_ratings);
      double lambda = fl_lambda;
      if (lambda < 0) {
        if (fl_grid.empty()) {
          std::fprintf(stderr, "either --lambda or --grid is required\n");
          return 2;
        }
        check(lrapm_select_lineup_lambda(
            ps.get(), ratings.get(), fl_val_weeks, fl_grid.data(),
            static_cast<int>(fl_grid.size()), fl_fallback, 0, 0, &lambda));
        std::printf("selected lambda=%g\n", lambda);
      }
      lrapm_lineup_model* m = nullptr;
      check(lrapm_fit_lineup_model(ps.get(), ratings.get(), lambda,
                                   fl_fallback, 0, 0, &m));
      ModelPtr model(m, lrapm_lineup_model_free);
      check(lrapm_lineup_model_save(model.get(), fl_out.c_str(),
                                    json_mirror ? 1 : 0));
      std::printf("wrote %s\n", fl_out.c_str());
    } else if (*predict) {
      lrapm_lineup_model* m = nullptr;
      check(lrapm_lineup_model_load(pr_model.c_str(), &m));
      ModelPtr model(m, lrapm_lineup_model_free);
      if (!pr_ratings.empty()) {
        auto ratings = load_ratings(pr_ratings);
        check(lrapm_lineup_model_attach_ratings(model.get(), ratings.get()));
      }
      auto off_ids = normalize_lineup(pr_off);
      auto def_ids = normalize_lineup(pr_def);
      auto off = lineup_ptrs(off_ids);
      auto def = lineup_ptrs(def_ids);
      if (pr_matchup) {
        double net = 0;
        check(lrapm_predict_matchup(model.get(), off.data(), def.data(),
                                    &net));
        std::printf("net_per100=%.4f\n", net);
      } else {
        double pts = 0;
        char source[16];
        check(lrapm_predict_possession(model.get(), off.data(), def.data(),
                                       &pts, source));
        std::printf("expected_points=%.4f source=%s\n", pts, source);
      }
    } else if (*backtest) {
      auto ps = load_possessions(bt_poss, bt_load);
      auto ratings = load_ratings(bt_ratings);
      if (!bt_grid.empty()) {
        bcfg.lambda_grid = bt_grid.data();
        bcfg.n_lambda_grid = static_cast<int>(bt_grid.size());
      }
      if (!bt_edges.empty()) {
        bcfg.bucket_edges = bt_edges.data();
        bcfg.n_bucket_edges = static_cast<int>(bt_edges.size());
      }
      bcfg.include_unseen = bt_no_unseen ? 0 : 1;
      bcfg.reselect_each_week = bt_reselect ? 1 : 0;
      double overall = 0, unseen = 0;
      check(lrapm_backtest_run(ps.get(), ratings.get(), &bcfg, bt_dir.c_str(),
                               json_mirror ? 1 : 0, &overall, &unseen));
      std::printf("overall_delta=%.6f unseen_delta=%.6f reports=%s\n",
                  overall, unseen, bt_dir.c_str());
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
