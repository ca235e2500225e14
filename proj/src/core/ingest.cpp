#include "ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lrapm {

namespace {

// Howard Hinnant's days-from-civil algorithm.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::int64_t parse_iso_date(const std::string& s) {
  int y, m, d;
  char extra;
  if (s.size() != 10 ||
      std::sscanf(s.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &extra) != 3 ||
      s[4] != '-' || s[7] != '-') {
    throw Error(ErrorCode::ParseError, "bad ISO date: '" + s + "'");
  }
  if (m < 1 || m > 12 || d < 1 || d > 31) {
    throw Error(ErrorCode::ParseError, "bad ISO date: '" + s + "'");
  }
  return days_from_civil(y, m, d);
}

PossessionSet parse_possessions(std::istream& in,
                                const std::string& season_start,
                                int week_length_days, bool skip_bad_rows,
                                const std::string& season_label) {
  if (week_length_days < 1) {
    throw Error(ErrorCode::InvalidArgument, "week_length_days must be >= 1");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::ParseError, "empty possession file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kPossessionHeader) {
    throw Error(ErrorCode::ParseError,
                "unexpected header, want '" + std::string(kPossessionHeader) +
                    "', got '" + line + "'");
  }

  std::int64_t start_day = -1;
  bool have_start = !season_start.empty();
  if (have_start) start_day = parse_iso_date(season_start);

  PossessionSet ps;
  ps.season_label = season_label;
  std::int64_t line_no = 1;
  std::int64_t order = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    try {
      auto f = split_csv(line);
      if (f.size() != 13) {
        throw Error(ErrorCode::ParseError,
                    "expected 13 fields, got " + std::to_string(f.size()));
      }
      int points;
      std::size_t pos;
      try {
        points = std::stoi(f[0], &pos);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad points value '" + f[0] + "'");
      }
      if (pos != f[0].size()) {
        throw Error(ErrorCode::ParseError, "bad points value '" + f[0] + "'");
      }
      std::vector<PlayerId> off(f.begin() + 1, f.begin() + 6);
      std::vector<PlayerId> def(f.begin() + 6, f.begin() + 11);
      const std::string& game_id = f[11];
      std::int64_t day = parse_iso_date(f[12]);
      if (!have_start) {
        start_day = day;
        have_start = true;
      }
      if (day < start_day) {
        throw Error(ErrorCode::ValidationError,
                    "game_date precedes season start");
      }
      int week = 1 + static_cast<int>((day - start_day) / week_length_days);
      ps.possessions.push_back(Possession::make(
          points, LineupKey::make(std::span<const PlayerId>(off)),
          LineupKey::make(std::span<const PlayerId>(def)), game_id, order,
          week));
      ++order;
      ps.weeks = std::max(ps.weeks, week);
    } catch (const Error& e) {
      if (skip_bad_rows) {
        ++ps.skipped_rows;
        continue;
      }
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " +
                                e.what());
    }
  }

  std::vector<bool> seen(static_cast<std::size_t>(ps.weeks) + 1, false);
  for (const auto& p : ps.possessions) seen[p.week] = true;
  for (int w = 1; w <= ps.weeks; ++w) {
    if (!seen[w]) {
      ps.warnings.push_back("week " + std::to_string(w) +
                            " has no possessions");
    }
  }
  return ps;
}

PossessionSet parse_possessions_file(const std::string& path,
                                     const std::string& season_start,
                                     int week_length_days,
                                     bool skip_bad_rows) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path);
  }
  return parse_possessions(in, season_start, week_length_days, skip_bad_rows,
                           path);
}

void write_possessions(const PossessionSet& ps, std::ostream& out,
                       const std::string& season_start,
                       int week_length_days) {
  std::int64_t start_day = parse_iso_date(season_start);
  out << kPossessionHeader << '\n';
  for (const auto& p : ps.possessions) {
    out << p.points;
    for (const auto& pl : p.offense.players()) out << ',' << pl;
    for (const auto& pl : p.defense.players()) out << ',' << pl;
    std::int64_t day =
        start_day + static_cast<std::int64_t>(p.week - 1) * week_length_days;
    int y, m, d;
    civil_from_days(day, y, m, d);
    char date[16];
    std::snprintf(date, sizeof(date), "%04d-%02d-%02d", y, m, d);
    out << ',' << p.game_id << ',' << date << '\n';
  }
}

void write_possessions_file(const PossessionSet& ps, const std::string& path,
                            const std::string& season_start,
                            int week_length_days) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path);
  }
  write_possessions(ps, out, season_start, week_length_days);
}

double league_ppp(const PossessionSet& ps) {
  if (ps.possessions.empty()) {
    throw Error(ErrorCode::EmptyData, "no possessions");
  }
  double total = 0;
  for (const auto& p : ps.possessions) total += p.points;
  return total / static_cast<double>(ps.possessions.size());
}

namespace {

void summarize(
    const std::unordered_map<LineupKey, std::int64_t, LineupKeyHash>& counts,
    double& mean, double& stdev, std::vector<std::int64_t>& histogram) {
  mean = stdev = 0;
  histogram.clear();
  if (counts.empty()) return;
  double sum = 0, sum2 = 0;
  for (const auto& [k, c] : counts) {
    sum += static_cast<double>(c);
    sum2 += static_cast<double>(c) * static_cast<double>(c);
    int bin = 0;
    while ((std::int64_t{1} << (bin + 1)) <= c) ++bin;
    if (static_cast<std::size_t>(bin) >= histogram.size()) {
      histogram.resize(bin + 1, 0);
    }
    ++histogram[bin];
  }
  double n = static_cast<double>(counts.size());
  mean = sum / n;
  stdev = std::sqrt(std::max(0.0, sum2 / n - mean * mean));
}

}  // namespace

LineupUsageStats usage_stats(const PossessionSet& ps) {
  if (ps.possessions.empty()) {
    throw Error(ErrorCode::EmptyData, "no possessions");
  }
  LineupUsageStats st;
  for (const auto& p : ps.possessions) {
    ++st.off_counts[p.offense];
    ++st.def_counts[p.defense];
  }
  summarize(st.off_counts, st.off_mean, st.off_std, st.off_histogram);
  summarize(st.def_counts, st.def_mean, st.def_std, st.def_histogram);
  return st;
}

}  // namespace lrapm
