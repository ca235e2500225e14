#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "core/eval.hpp"
#include "core/rapm.hpp"
#include "core/synth.hpp"
#include "test_util.hpp"

using namespace lrapm;
using testutil::five;
using testutil::make_possessions;
using testutil::Row;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("delta and game impact") {
  CHECK(delta(0.95, 1.0) == doctest::Approx(-0.05));
  CHECK(delta(1.05, 1.0) == doctest::Approx(0.05));
  CHECK_THROWS_AS(delta(1.0, 0.0), Error);
  CHECK(game_impact(0.015, 1.13, 200) == doctest::Approx(3.39));
  CHECK(game_impact(-0.015, 1.13, 200) == doctest::Approx(3.39));
}

TEST_CASE("constant data gives a zero-delta backtest") {
  std::vector<Row> rows;
  for (int w = 1; w <= 3; ++w) {
    for (int i = 0; i < 20; ++i) rows.push_back({1, five(0), five(5), w});
  }
  auto ps = make_possessions(rows);
  PlayerRatings r;  // empty: every player takes the fallback
  BacktestConfig cfg;
  cfg.first_test_week = 2;
  cfg.lambda = 10.0;
  auto report = expanding_backtest(ps, cfg, r);
  REQUIRE(report.weekly.size() == 2);
  for (const auto& wk : report.weekly) {
    CHECK(wk.rmse_model == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(wk.rmse_baseline == doctest::Approx(0.0));
    CHECK(wk.delta == doctest::Approx(0.0));
    CHECK(wk.n == 20);
  }
  CHECK(report.hygiene_checked == 40);
  CHECK(report.hygiene_overlap == 0);
  CHECK(report.lambda_used == 10.0);
}

TEST_CASE("never-before-seen lineups route to the unseen track") {
  std::vector<Row> rows;
  for (int w = 1; w <= 2; ++w) {
    for (int i = 0; i < 10; ++i) rows.push_back({1, five(0), five(5), w});
  }
  auto extra = LineupKey::make({"q1", "q2", "q3", "q4", "q5"});
  rows.push_back({2, extra, five(5), 2});
  auto ps = make_possessions(rows);
  PlayerRatings r;
  BacktestConfig cfg;
  cfg.first_test_week = 2;
  cfg.lambda = 10.0;
  auto report = expanding_backtest(ps, cfg, r);
  std::int64_t unseen = 0;
  for (const auto& rec : report.records) {
    if (rec.unseen) {
      ++unseen;
      CHECK(rec.min_train_poss == 0);
    }
  }
  CHECK(unseen == 1);
  REQUIRE(report.unseen_weekly.size() == 1);
  CHECK(report.unseen_weekly[0].n == 1);
  REQUIRE(report.pooled_unseen().has_value());
  CHECK(report.pooled_main().n == 10);

  cfg.include_unseen = false;
  auto without = expanding_backtest(ps, cfg, r);
  CHECK(without.unseen_weekly.empty());
  CHECK_FALSE(without.pooled_unseen().has_value());
}

TEST_CASE("backtest configuration validation") {
  auto ps = make_possessions({{1, five(0), five(5), 1},
                              {1, five(0), five(5), 2}});
  PlayerRatings r;
  BacktestConfig cfg;
  cfg.lambda = 1.0;
  cfg.first_test_week = 5;
  CHECK_THROWS_AS(expanding_backtest(ps, cfg, r), Error);  // too few weeks
  cfg.first_test_week = 1;
  CHECK_THROWS_AS(expanding_backtest(ps, cfg, r), Error);
  cfg.first_test_week = 2;
  cfg.lambda.reset();
  CHECK_THROWS_AS(expanding_backtest(ps, cfg, r), Error);  // no lambda source
}

TEST_CASE("bucket_report pools by minimum training possessions") {
  BacktestReport report;
  auto add = [&](std::int64_t poss, double se_m, double se_b) {
    PredictionRecord rec;
    rec.week = 5;
    rec.min_train_poss = poss;
    rec.se_model = se_m;
    rec.se_baseline = se_b;
    report.records.push_back(rec);
  };
  add(5, 0.25, 1.0);
  add(7, 0.25, 1.0);
  add(30, 1.0, 1.0);
  add(700, 4.0, 1.0);
  auto rows = bucket_report(report, {0, 10, 25, 50, 100, 250, 500});
  REQUIRE(rows.size() == 3);  // [0,10), [25,50), [500,inf); others absent
  CHECK(rows[0].lo == 0);
  CHECK(rows[0].hi == 10);
  CHECK(rows[0].n == 2);
  CHECK(rows[0].rmse_model == doctest::Approx(0.5));
  CHECK(rows[0].delta == doctest::Approx(-0.5));
  CHECK(rows[1].lo == 25);
  CHECK(rows[1].delta == doctest::Approx(0.0));
  CHECK(rows[2].lo == 500);
  CHECK(std::isinf(rows[2].hi));
  CHECK(rows[2].delta == doctest::Approx(1.0));

  CHECK_THROWS_AS(bucket_report(report, {}), Error);
  CHECK_THROWS_AS(bucket_report(report, {0, 10, 10}), Error);

  // unseen records never land in the main buckets
  report.records[0].unseen = true;
  auto rows2 = bucket_report(report, {0, 10});
  CHECK(rows2[0].n == 1);
}

TEST_CASE("backtest on synthetic data stays out of sample and writes reports") {
  SynthConfig scfg;
  scfg.n_teams = 4;
  scfg.roster_size = 7;
  scfg.weeks = 8;
  scfg.games_per_week = 2;
  scfg.possessions_per_game = 40;
  scfg.scoreless_rate = 0.4;
  scfg.seed = 12;
  auto ps = generate(scfg).possessions;
  auto ratings = fit_rapm(ps, 300.0, 300.0);
  BacktestConfig cfg;
  cfg.first_test_week = 5;
  cfg.lambda_grid = {20.0, 80.0};
  cfg.bucket_edges = {0, 10, 50};  // small season: keep the open bucket busy
  auto report = expanding_backtest(ps, cfg, ratings);
  CHECK(report.hygiene_checked > 0);
  CHECK(report.hygiene_overlap == 0);
  CHECK((report.lambda_used == 20.0 || report.lambda_used == 80.0));
  CHECK(report.weekly.size() == 4);  // weeks 5..8
  for (const auto& wk : report.weekly) CHECK(std::isfinite(wk.delta));
  CHECK_FALSE(report.buckets.empty());

  auto dir = std::filesystem::temp_directory_path() / "lrapm_eval_test";
  std::filesystem::remove_all(dir);
  write_report(report, dir.string(), true);
  auto weekly = read_file(dir / "weekly.csv");
  CHECK(weekly.rfind("week,rmse_model,rmse_baseline,delta,n\n", 0) == 0);
  auto unseen = read_file(dir / "unseen.csv");
  CHECK(unseen.rfind("week,rmse_prior,rmse_league,delta,n\n", 0) == 0);
  auto buckets = read_file(dir / "buckets.csv");
  CHECK(buckets.rfind("bucket_lo,bucket_hi,rmse_model,rmse_baseline,delta,n\n",
                      0) == 0);
  CHECK(buckets.find("inf") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "weekly.csv.json"));
  std::filesystem::remove_all(dir);
}
