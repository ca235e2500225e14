#include "baseline.hpp"

#include <ostream>

#include "format.hpp"

namespace lrapm {

std::optional<double> RawRatingTable::off_rating(
    const LineupKey& lineup) const {
  auto it = counts.find(lineup);
  if (it == counts.end() || it->second.off_possessions == 0) {
    return std::nullopt;
  }
  return 100.0 * static_cast<double>(it->second.off_points) /
         static_cast<double>(it->second.off_possessions);
}

std::optional<double> RawRatingTable::def_rating(
    const LineupKey& lineup) const {
  auto it = counts.find(lineup);
  if (it == counts.end() || it->second.def_possessions == 0) {
    return std::nullopt;
  }
  return 100.0 * static_cast<double>(it->second.def_points) /
         static_cast<double>(it->second.def_possessions);
}

RawRatingTable accumulate_raw(const PossessionSet& ps, int through_week) {
  if (through_week < 1) {
    throw Error(ErrorCode::InvalidArgument, "through_week must be >= 1");
  }
  RawRatingTable t;
  std::int64_t total_points = 0, total_poss = 0;
  for (const auto& p : ps.possessions) {
    if (p.week > through_week) continue;
    auto& off = t.counts[p.offense];
    ++off.off_possessions;
    off.off_points += p.points;
    auto& def = t.counts[p.defense];
    ++def.def_possessions;
    def.def_points += p.points;
    total_points += p.points;
    ++total_poss;
  }
  t.league_ppp = total_poss == 0 ? 0.0
                                 : static_cast<double>(total_points) /
                                       static_cast<double>(total_poss);
  return t;
}

double winston_adjust(double raw_rating_per100,
                      double avg_opponent_rating_per100) {
  return raw_rating_per100 - 5.0 * avg_opponent_rating_per100;
}

double baseline_predict(const RawRatingTable& t, const LineupKey& off,
                        const LineupKey& def) {
  double off_ppp = t.off_rating(off).value_or(100.0 * t.league_ppp) / 100.0;
  double def_ppp = t.def_rating(def).value_or(100.0 * t.league_ppp) / 100.0;
  return off_ppp + def_ppp - t.league_ppp;
}

void save_raw_ratings(const RawRatingTable& t, std::ostream& out) {
  out << "p1,p2,p3,p4,p5,off_poss,off_rating,def_poss,def_rating\n";
  for (const auto& [key, c] : t.counts) {
    for (const auto& p : key.players()) out << p << ',';
    out << c.off_possessions << ',';
    auto off = t.off_rating(key);
    out << (off ? fmt_g6(*off) : "") << ',' << c.def_possessions << ',';
    auto def = t.def_rating(key);
    out << (def ? fmt_g6(*def) : "") << '\n';
  }
}

}  // namespace lrapm
