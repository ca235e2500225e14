#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "types.hpp"

namespace lrapm {

struct PossessionSet {
  std::vector<Possession> possessions;
  std::string season_label;
  int weeks = 0;  // max week index
  std::vector<std::string> warnings;
  std::int64_t skipped_rows = 0;  // only populated in skip-bad-rows mode
};

struct LineupUsageStats {
  std::unordered_map<LineupKey, std::int64_t, LineupKeyHash> off_counts;
  std::unordered_map<LineupKey, std::int64_t, LineupKeyHash> def_counts;
  double off_mean = 0, off_std = 0;  // population std over lineups with count>0
  double def_mean = 0, def_std = 0;
  // Log-binned histogram: bin b counts lineups with count in [2^b, 2^(b+1)).
  std::vector<std::int64_t> off_histogram;
  std::vector<std::int64_t> def_histogram;
};

// Days since 1970-01-01 for a strict ISO-8601 YYYY-MM-DD string.
std::int64_t parse_iso_date(const std::string& s);

inline constexpr const char* kPossessionHeader =
    "points,off1,off2,off3,off4,off5,def1,def2,def3,def4,def5,game_id,"
    "game_date";

// Parses the possession CSV. Week index of a row is
// 1 + floor((game_date - season_start) / week_length_days).
// season_start empty means "first game date in the file".
PossessionSet parse_possessions(std::istream& in,
                                const std::string& season_start,
                                int week_length_days, bool skip_bad_rows,
                                const std::string& season_label = "");
PossessionSet parse_possessions_file(const std::string& path,
                                     const std::string& season_start,
                                     int week_length_days, bool skip_bad_rows);

// Writes the possession CSV (round-trips through parse_possessions). Rows
// keep their ingest order; game_date is reconstructed from the week index and
// the given season start date.
void write_possessions(const PossessionSet& ps, std::ostream& out,
                       const std::string& season_start, int week_length_days);
void write_possessions_file(const PossessionSet& ps, const std::string& path,
                            const std::string& season_start,
                            int week_length_days);

double league_ppp(const PossessionSet& ps);

LineupUsageStats usage_stats(const PossessionSet& ps);

}  // namespace lrapm
