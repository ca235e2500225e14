#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "ingest.hpp"
#include "types.hpp"

namespace lrapm {

struct RawLineupCounts {
  std::int64_t off_possessions = 0;
  std::int64_t off_points = 0;
  std::int64_t def_possessions = 0;
  std::int64_t def_points = 0;
};

struct RawRatingTable {
  std::map<LineupKey, RawLineupCounts> counts;
  double league_ppp = 0;  // fallback for lineups with no data on a side

  // 100 * points / possessions; nullopt when the side was never observed.
  std::optional<double> off_rating(const LineupKey& lineup) const;
  std::optional<double> def_rating(const LineupKey& lineup) const;
};

// Counts and points summed over possessions with week <= through_week.
RawRatingTable accumulate_raw(const PossessionSet& ps, int through_week);

// Winston's opponent adjustment: raw minus five times the average per-100
// rating of the opposing players faced.
double winston_adjust(double raw_rating_per100,
                      double avg_opponent_rating_per100);

// y_hat = off_rate(off)/100 + def_rate(def)/100 - league_ppp, with league_ppp
// substituted for any missing rate.
double baseline_predict(const RawRatingTable& t, const LineupKey& off,
                        const LineupKey& def);

void save_raw_ratings(const RawRatingTable& t, std::ostream& out);

}  // namespace lrapm
