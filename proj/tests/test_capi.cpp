// Exercises the shared-library surface end to end: generate, persist, load,
// fit, predict, and backtest purely through the C API.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "lrapm/lrapm.h"

namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
  auto dir = fs::temp_directory_path() / "lrapm_capi_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

lrapm_synth_config small_config() {
  lrapm_synth_config cfg;
  lrapm_synth_config_default(&cfg);
  cfg.n_teams = 4;
  cfg.roster_size = 7;
  cfg.weeks = 8;
  cfg.games_per_week = 2;
  cfg.possessions_per_game = 40;
  cfg.scoreless_rate = 0.4;
  cfg.seed = 31;
  return cfg;
}

}  // namespace

TEST_CASE("status names and argument validation") {
  CHECK(std::string(lrapm_status_name(LRAPM_OK)) == "ok");
  CHECK(std::string(lrapm_status_name(LRAPM_ERR_PARSE)) == "parse_error");
  CHECK(lrapm_possessions_load(nullptr, nullptr, 7, 0, nullptr) ==
        LRAPM_ERR_INVALID_ARGUMENT);
  CHECK(std::string(lrapm_last_error()).size() > 0);

  lrapm_possessions* ps = nullptr;
  CHECK(lrapm_possessions_load("/no/such/file.csv", nullptr, 7, 0, &ps) ==
        LRAPM_ERR_IO);
  CHECK(ps == nullptr);

  lrapm_player_ratings* r = nullptr;
  CHECK(lrapm_player_ratings_load("/no/such/ratings.csv", &r) ==
        LRAPM_ERR_IO);

  // accessors tolerate null handles
  CHECK(lrapm_possessions_count(nullptr) == 0);
  CHECK(lrapm_possessions_weeks(nullptr) == 0);
}

TEST_CASE("full pipeline through the C API") {
  auto dir = work_dir();
  auto cfg = small_config();

  // generate + persist + reload
  REQUIRE(lrapm_synth_write(&cfg, (dir / "season").string().c_str(), 0) ==
          LRAPM_OK);
  lrapm_possessions* ps = nullptr;
  REQUIRE(lrapm_possessions_load(
              (dir / "season" / "possessions.csv").string().c_str(), nullptr,
              7, 0, &ps) == LRAPM_OK);
  CHECK(lrapm_possessions_count(ps) > 0);
  CHECK(lrapm_possessions_weeks(ps) == 8);
  CHECK(lrapm_possessions_skipped(ps) == 0);

  double lppp = 0;
  REQUIRE(lrapm_league_ppp(ps, &lppp) == LRAPM_OK);
  CHECK(lppp > 0.5);
  CHECK(lppp < 2.0);

  double om = 0, os = 0;
  REQUIRE(lrapm_usage_stats(ps, &om, &os, nullptr, nullptr) == LRAPM_OK);
  CHECK(om > 0);

  // player ratings
  lrapm_player_ratings* ratings = nullptr;
  REQUIRE(lrapm_fit_rapm(ps, 300.0, 300.0, 0, 0, &ratings) == LRAPM_OK);
  double g0 = 0;
  REQUIRE(lrapm_player_ratings_gamma0(ratings, &g0) == LRAPM_OK);
  CHECK(std::abs(g0 - lppp) < 0.2);
  double rating = 0;
  REQUIRE(lrapm_player_rating(ratings, "T01P01", 0, -0.01, &rating) ==
          LRAPM_OK);
  CHECK(std::abs(rating) < 0.5);
  REQUIRE(lrapm_player_rating(ratings, "GHOST", 1, -0.01, &rating) ==
          LRAPM_OK);
  CHECK(rating == -0.01);

  auto ratings_path = (dir / "ratings.csv").string();
  REQUIRE(lrapm_player_ratings_save(ratings, ratings_path.c_str(), 1) ==
          LRAPM_OK);
  CHECK(fs::exists(ratings_path + ".json"));
  lrapm_player_ratings* loaded = nullptr;
  REQUIRE(lrapm_player_ratings_load(ratings_path.c_str(), &loaded) ==
          LRAPM_OK);
  double g0b = 0;
  REQUIRE(lrapm_player_ratings_gamma0(loaded, &g0b) == LRAPM_OK);
  CHECK(std::abs(g0 - g0b) < 1e-4);

  // lambda selection returns a grid member
  double best_off = 0, best_def = 0;
  double grid[] = {100.0, 1000.0};
  REQUIRE(lrapm_select_rapm_lambdas(ps, 2, grid, 2, grid, 2, 0, 0, &best_off,
                                    &best_def) == LRAPM_OK);
  CHECK((best_off == 100.0 || best_off == 1000.0));

  // lineup model
  lrapm_lineup_model* model = nullptr;
  REQUIRE(lrapm_fit_lineup_model(ps, ratings, 60.0, -0.01, 0, 0, &model) ==
          LRAPM_OK);
  auto model_path = (dir / "model.csv").string();
  REQUIRE(lrapm_lineup_model_save(model, model_path.c_str(), 0) == LRAPM_OK);

  // pull one real lineup out of the saved model
  std::string text = slurp(model_path);
  auto line_start = text.find('\n', text.find('\n') + 1) + 1;
  std::string row = text.substr(line_start, text.find('\n', line_start) -
                                                line_start);
  std::string ids[5];
  std::size_t pos = 0;
  for (auto& id : ids) {
    auto comma = row.find(',', pos);
    id = row.substr(pos, comma - pos);
    pos = comma + 1;
  }
  const char* seen[5] = {ids[0].c_str(), ids[1].c_str(), ids[2].c_str(),
                         ids[3].c_str(), ids[4].c_str()};
  // a lineup the rotation never produced: mixes two teams
  const char* mixed[5] = {"T01P01", "T01P02", "T02P01", "T02P02", "T03P01"};

  double pts = 0;
  char source[16];
  REQUIRE(lrapm_predict_possession(model, seen, seen, &pts, source) ==
          LRAPM_OK);
  CHECK(std::string(source) == "model");
  CHECK(pts > 0);
  REQUIRE(lrapm_predict_possession(model, seen, mixed, &pts, source) ==
          LRAPM_OK);
  CHECK(std::string(source) == "prior");

  double net = 0;
  REQUIRE(lrapm_predict_matchup(model, seen, seen, &net) == LRAPM_OK);
  CHECK(std::abs(net) < 1e-9);

  // a loaded model has no ratings until they are attached
  lrapm_lineup_model* reloaded = nullptr;
  REQUIRE(lrapm_lineup_model_load(model_path.c_str(), &reloaded) == LRAPM_OK);
  REQUIRE(lrapm_predict_possession(reloaded, seen, mixed, &pts, source) ==
          LRAPM_OK);
  CHECK(std::string(source) == "league_average");
  REQUIRE(lrapm_lineup_model_attach_ratings(reloaded, ratings) == LRAPM_OK);
  REQUIRE(lrapm_predict_possession(reloaded, seen, mixed, &pts, source) ==
          LRAPM_OK);
  CHECK(std::string(source) == "prior");

  // bad lineup through the C boundary
  const char* dup[5] = {"T01P01", "T01P01", "T02P01", "T02P02", "T03P01"};
  CHECK(lrapm_predict_possession(model, dup, seen, &pts, source) ==
        LRAPM_ERR_BAD_LINEUP);
  CHECK(std::string(lrapm_last_error()).find("duplicate") !=
        std::string::npos);

  // backtest
  lrapm_backtest_config bcfg;
  lrapm_backtest_config_default(&bcfg);
  bcfg.first_test_week = 5;
  bcfg.lambda = 60.0;
  double overall = 0, unseen = 0;
  auto report_dir = (dir / "report").string();
  REQUIRE(lrapm_backtest_run(ps, ratings, &bcfg, report_dir.c_str(), 0,
                             &overall, &unseen) == LRAPM_OK);
  CHECK(fs::exists(fs::path(report_dir) / "weekly.csv"));
  CHECK(fs::exists(fs::path(report_dir) / "buckets.csv"));
  CHECK(fs::exists(fs::path(report_dir) / "unseen.csv"));
  CHECK(std::isfinite(overall));

  // scalar helpers
  CHECK(lrapm_winston_adjust(113.2, 0.26) == doctest::Approx(111.9));
  double d = 0;
  REQUIRE(lrapm_delta(0.95, 1.0, &d) == LRAPM_OK);
  CHECK(d == doctest::Approx(-0.05));
  CHECK(lrapm_delta(1.0, 0.0, &d) == LRAPM_ERR_ZERO_BASELINE);
  CHECK(lrapm_game_impact(0.015, 1.13, 200) == doctest::Approx(3.39));

  lrapm_lineup_model_free(model);
  lrapm_lineup_model_free(reloaded);
  lrapm_player_ratings_free(ratings);
  lrapm_player_ratings_free(loaded);
  lrapm_possessions_free(ps);
  fs::remove_all(dir);
}

TEST_CASE("synth determinism through the C API") {
  auto dir = work_dir();
  auto cfg = small_config();
  cfg.weeks = 3;
  REQUIRE(lrapm_synth_write(&cfg, (dir / "a").string().c_str(), 0) ==
          LRAPM_OK);
  REQUIRE(lrapm_synth_write(&cfg, (dir / "b").string().c_str(), 0) ==
          LRAPM_OK);
  CHECK(slurp(dir / "a" / "possessions.csv") ==
        slurp(dir / "b" / "possessions.csv"));
  CHECK(slurp(dir / "a" / "ground_truth.csv") ==
        slurp(dir / "b" / "ground_truth.csv"));
  fs::remove_all(dir);
}
