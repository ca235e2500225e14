#include "eval.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "baseline.hpp"
#include "format.hpp"

namespace lrapm {

double delta(double rmse_model, double rmse_baseline) {
  if (rmse_baseline <= 0) {
    throw Error(ErrorCode::ZeroBaseline, "baseline RMSE must be > 0");
  }
  return (rmse_model - rmse_baseline) / rmse_baseline;
}

double game_impact(double delta_ppp, double league_ppp,
                   int possessions_per_game) {
  return std::abs(delta_ppp) * league_ppp *
         static_cast<double>(possessions_per_game);
}

namespace {

// delta with the degenerate constant-data case mapped to 0. Model RMSE below
// the solver's noise floor counts as an exact fit.
double safe_delta(double rm, double rb) {
  if (rb > 0) return delta(rm, rb);
  return rm <= 1e-9 ? 0.0 : std::numeric_limits<double>::infinity();
}

WeekRow make_week_row(int week, double sum_sq_m, double sum_sq_b,
                      std::int64_t n) {
  WeekRow row;
  row.week = week;
  row.n = n;
  row.rmse_model = std::sqrt(sum_sq_m / static_cast<double>(n));
  row.rmse_baseline = std::sqrt(sum_sq_b / static_cast<double>(n));
  row.delta = safe_delta(row.rmse_model, row.rmse_baseline);
  return row;
}

}  // namespace

WeekRow BacktestReport::pooled_main() const {
  double sm = 0, sb = 0;
  std::int64_t n = 0;
  for (const auto& r : records) {
    if (r.unseen) continue;
    sm += r.se_model;
    sb += r.se_baseline;
    ++n;
  }
  if (n == 0) return {};
  return make_week_row(0, sm, sb, n);
}

std::optional<WeekRow> BacktestReport::pooled_unseen() const {
  double sm = 0, sb = 0;
  std::int64_t n = 0;
  for (const auto& r : records) {
    if (!r.unseen) continue;
    sm += r.se_model;
    sb += r.se_baseline;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return make_week_row(0, sm, sb, n);
}

std::vector<BucketRow> bucket_report(const BacktestReport& report,
                                     const std::vector<double>& edges) {
  if (edges.empty()) {
    throw Error(ErrorCode::InvalidArgument, "bucket edges must be non-empty");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] <= edges[i - 1]) {
      throw Error(ErrorCode::InvalidArgument,
                  "bucket edges must be strictly increasing");
    }
  }
  const std::size_t nb = edges.size();  // last bucket is [edges.back(), inf)
  std::vector<double> sm(nb, 0), sb(nb, 0);
  std::vector<std::int64_t> n(nb, 0);
  for (const auto& r : report.records) {
    if (r.unseen) continue;
    double key = static_cast<double>(r.min_train_poss);
    if (key < edges.front()) continue;
    std::size_t b =
        static_cast<std::size_t>(
            std::upper_bound(edges.begin(), edges.end(), key) -
            edges.begin()) -
        1;
    sm[b] += r.se_model;
    sb[b] += r.se_baseline;
    ++n[b];
  }
  std::vector<BucketRow> rows;
  for (std::size_t b = 0; b < nb; ++b) {
    if (n[b] == 0) continue;  // empty buckets are absent, not zero
    BucketRow row;
    row.lo = edges[b];
    row.hi = b + 1 < nb ? edges[b + 1]
                        : std::numeric_limits<double>::infinity();
    row.n = n[b];
    row.rmse_model = std::sqrt(sm[b] / static_cast<double>(n[b]));
    row.rmse_baseline = std::sqrt(sb[b] / static_cast<double>(n[b]));
    row.delta = safe_delta(row.rmse_model, row.rmse_baseline);
    rows.push_back(row);
  }
  return rows;
}

BacktestReport expanding_backtest(const PossessionSet& ps,
                                  const BacktestConfig& cfg,
                                  const PlayerRatings& player_ratings) {
  if (cfg.first_test_week < 2) {
    throw Error(ErrorCode::InvalidArgument, "first_test_week must be >= 2");
  }
  if (ps.weeks < cfg.first_test_week) {
    throw Error(ErrorCode::InsufficientWeeks,
                "need at least " + std::to_string(cfg.first_test_week) +
                    " weeks, have " + std::to_string(ps.weeks));
  }
  if (!cfg.lambda && cfg.lambda_grid.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "backtest needs a lambda or a lambda grid");
  }

  BacktestReport report;
  std::vector<std::vector<const Possession*>> by_week(ps.weeks + 1);
  for (const auto& p : ps.possessions) by_week[p.week].push_back(&p);

  auto training_set = [&](int test_week) {
    PossessionSet train;
    train.weeks = test_week - 1;
    for (int w = 1; w < test_week; ++w) {
      for (const auto* p : by_week[w]) train.possessions.push_back(*p);
    }
    return train;
  };

  double lambda_used = cfg.lambda.value_or(0.0);
  if (!cfg.lambda) {
    PossessionSet first_window = training_set(cfg.first_test_week);
    lambda_used =
        select_lrapm_lambda(first_window, player_ratings, cfg.val_weeks,
                            cfg.lambda_grid, cfg.fallback_rating, cfg.tol,
                            cfg.max_iter);
  }
  report.lambda_used = lambda_used;

  for (int week = cfg.first_test_week; week <= ps.weeks; ++week) {
    if (by_week[week].empty()) continue;
    PossessionSet train = training_set(week);
    if (train.possessions.empty()) {
      throw Error(ErrorCode::EmptyData, "empty training window");
    }
    if (cfg.reselect_each_week && !cfg.lambda) {
      lambda_used =
          select_lrapm_lambda(train, player_ratings, cfg.val_weeks,
                              cfg.lambda_grid, cfg.fallback_rating, cfg.tol,
                              cfg.max_iter);
    }
    LineupModel model = fit_lrapm(train, player_ratings, lambda_used,
                                  cfg.fallback_rating, cfg.tol, cfg.max_iter);
    RawRatingTable raw = accumulate_raw(ps, week - 1);

    // Out-of-sample instrumentation: no possession may sit in both the
    // training window and this week's test set.
    std::unordered_set<std::int64_t> train_orders;
    train_orders.reserve(train.possessions.size());
    for (const auto& p : train.possessions) train_orders.insert(p.order);

    double wk_sm = 0, wk_sb = 0, un_sm = 0, un_sb = 0;
    std::int64_t wk_n = 0, un_n = 0;
    for (const auto* p : by_week[week]) {
      ++report.hygiene_checked;
      if (train_orders.count(p->order)) ++report.hygiene_overlap;

      auto it_off = raw.counts.find(p->offense);
      auto it_def = raw.counts.find(p->defense);
      std::int64_t n_off =
          it_off == raw.counts.end() ? 0 : it_off->second.off_possessions;
      std::int64_t n_def =
          it_def == raw.counts.end() ? 0 : it_def->second.def_possessions;
      std::int64_t min_poss = std::min(n_off, n_def);

      double pred_model =
          predict_possession(model, p->offense, p->defense).expected_points;
      double y = static_cast<double>(p->points);

      PredictionRecord rec;
      rec.week = week;
      rec.min_train_poss = min_poss;
      rec.unseen = min_poss == 0;
      rec.se_model = (pred_model - y) * (pred_model - y);
      if (rec.unseen) {
        if (!cfg.include_unseen) continue;
        double pred_league = raw.league_ppp;
        rec.se_baseline = (pred_league - y) * (pred_league - y);
        un_sm += rec.se_model;
        un_sb += rec.se_baseline;
        ++un_n;
      } else {
        double pred_base = baseline_predict(raw, p->offense, p->defense);
        rec.se_baseline = (pred_base - y) * (pred_base - y);
        wk_sm += rec.se_model;
        wk_sb += rec.se_baseline;
        ++wk_n;
      }
      report.records.push_back(rec);
    }
    if (wk_n > 0) report.weekly.push_back(make_week_row(week, wk_sm, wk_sb, wk_n));
    if (un_n > 0) {
      report.unseen_weekly.push_back(make_week_row(week, un_sm, un_sb, un_n));
    }
  }
  report.buckets = bucket_report(report, cfg.bucket_edges);
  return report;
}

namespace {

void write_week_rows(const std::vector<WeekRow>& rows,
                     const std::string& path, const char* model_col,
                     const char* baseline_col, bool json_mirror) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << "week," << model_col << ',' << baseline_col << ",delta,n\n";
  for (const auto& r : rows) {
    out << r.week << ',' << fmt_g6(r.rmse_model) << ','
        << fmt_g6(r.rmse_baseline) << ',' << fmt_g6(r.delta) << ',' << r.n
        << '\n';
  }
  if (json_mirror) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
      j.push_back({{"week", r.week},
                   {model_col, r.rmse_model},
                   {baseline_col, r.rmse_baseline},
                   {"delta", r.delta},
                   {"n", r.n}});
    }
    std::ofstream jout(path + ".json", std::ios::binary);
    if (!jout) throw Error(ErrorCode::IoError, "cannot write " + path + ".json");
    jout << j.dump(2) << '\n';
  }
}

}  // namespace

void write_report(const BacktestReport& report, const std::string& dir,
                  bool json_mirror) {
  std::filesystem::create_directories(dir);
  write_week_rows(report.weekly, dir + "/weekly.csv", "rmse_model",
                  "rmse_baseline", json_mirror);
  write_week_rows(report.unseen_weekly, dir + "/unseen.csv", "rmse_prior",
                  "rmse_league", json_mirror);

  const std::string path = dir + "/buckets.csv";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << "bucket_lo,bucket_hi,rmse_model,rmse_baseline,delta,n\n";
  for (const auto& b : report.buckets) {
    out << fmt_g6(b.lo) << ','
        << (std::isinf(b.hi) ? std::string("inf") : fmt_g6(b.hi)) << ','
        << fmt_g6(b.rmse_model) << ',' << fmt_g6(b.rmse_baseline) << ','
        << fmt_g6(b.delta) << ',' << b.n << '\n';
  }
  if (json_mirror) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& b : report.buckets) {
      j.push_back({{"bucket_lo", b.lo},
                   {"bucket_hi", std::isinf(b.hi) ? -1.0 : b.hi},
                   {"rmse_model", b.rmse_model},
                   {"rmse_baseline", b.rmse_baseline},
                   {"delta", b.delta},
                   {"n", b.n}});
    }
    std::ofstream jout(path + ".json", std::ios::binary);
    if (!jout) throw Error(ErrorCode::IoError, "cannot write " + path + ".json");
    jout << j.dump(2) << '\n';
  }
}

}  // namespace lrapm
