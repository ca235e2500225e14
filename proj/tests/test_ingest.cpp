#include <doctest.h>

#include <sstream>

#include "core/ingest.hpp"

using namespace lrapm;

namespace {

const std::string kHeader = std::string(kPossessionHeader) + "\n";

std::string row(int points, const std::string& date,
                const std::string& game = "G1") {
  return std::to_string(points) + ",a1,a2,a3,a4,a5,b1,b2,b3,b4,b5," + game +
         "," + date + "\n";
}

}  // namespace

TEST_CASE("iso date parsing") {
  CHECK(parse_iso_date("1970-01-01") == 0);
  CHECK(parse_iso_date("1970-01-08") == 7);
  CHECK(parse_iso_date("2024-02-29") - parse_iso_date("2024-02-28") == 1);
  CHECK_THROWS_AS(parse_iso_date("2024-13-01"), Error);
  CHECK_THROWS_AS(parse_iso_date("2024-1-01"), Error);
  CHECK_THROWS_AS(parse_iso_date("not-a-date"), Error);
}

TEST_CASE("parse assigns week indices from the season start") {
  std::istringstream in(kHeader + row(2, "2024-01-06") +
                        row(0, "2024-01-12") + row(3, "2024-01-13"));
  auto ps = parse_possessions(in, "", 7, false);
  REQUIRE(ps.possessions.size() == 3);
  CHECK(ps.possessions[0].week == 1);  // day 0
  CHECK(ps.possessions[1].week == 1);  // day 6
  CHECK(ps.possessions[2].week == 2);  // day 7
  CHECK(ps.weeks == 2);
  CHECK(ps.possessions[0].order == 0);
  CHECK(ps.possessions[2].order == 2);
  CHECK(ps.possessions[0].offense.token() == "a1|a2|a3|a4|a5");
}

TEST_CASE("explicit season start and week length") {
  std::istringstream in(kHeader + row(1, "2024-01-10"));
  auto ps = parse_possessions(in, "2024-01-01", 3, false);
  // day offset 9, week = 1 + 9/3 = 4
  CHECK(ps.possessions[0].week == 4);
  CHECK(ps.weeks == 4);
  CHECK(ps.warnings.size() == 3);  // weeks 1..3 have no possessions
}

TEST_CASE("strict mode rejects bad rows with line numbers") {
  std::istringstream bad_header("points,stuff\n");
  CHECK_THROWS_AS(parse_possessions(bad_header, "", 7, false), Error);

  std::istringstream short_row(kHeader + "1,a1,a2\n");
  try {
    parse_possessions(short_row, "", 7, false);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).rfind("line 2:", 0) == 0);
  }

  std::istringstream bad_points(kHeader + row(2, "2024-01-06") +
                                "x,a1,a2,a3,a4,a5,b1,b2,b3,b4,b5,G1,"
                                "2024-01-06\n");
  CHECK_THROWS_AS(parse_possessions(bad_points, "", 7, false), Error);

  std::istringstream early(kHeader + row(2, "2024-01-06"));
  CHECK_THROWS_AS(parse_possessions(early, "2024-02-01", 7, false), Error);
}

TEST_CASE("skip-bad-rows mode counts and continues") {
  std::istringstream in(kHeader + row(2, "2024-01-06") + "garbage\n" +
                        "9,a1,a2,a3,a4,a5,b1,b2,b3,b4,b5,G1,2024-01-06\n" +
                        row(1, "2024-01-06"));
  auto ps = parse_possessions(in, "", 7, true);
  CHECK(ps.possessions.size() == 2);
  CHECK(ps.skipped_rows == 2);
}

TEST_CASE("write/parse round trip preserves everything") {
  std::istringstream in(kHeader + row(2, "2024-01-06") +
                        row(0, "2024-01-15", "G2") + row(3, "2024-01-20"));
  auto ps = parse_possessions(in, "2024-01-06", 7, false);
  std::ostringstream out;
  write_possessions(ps, out, "2024-01-06", 7);
  std::istringstream back(out.str());
  auto ps2 = parse_possessions(back, "2024-01-06", 7, false);
  REQUIRE(ps2.possessions.size() == ps.possessions.size());
  for (std::size_t i = 0; i < ps.possessions.size(); ++i) {
    CHECK(ps2.possessions[i].points == ps.possessions[i].points);
    CHECK(ps2.possessions[i].offense == ps.possessions[i].offense);
    CHECK(ps2.possessions[i].defense == ps.possessions[i].defense);
    CHECK(ps2.possessions[i].game_id == ps.possessions[i].game_id);
    CHECK(ps2.possessions[i].week == ps.possessions[i].week);
  }
}

TEST_CASE("league ppp is the plain mean") {
  std::istringstream in(kHeader + row(2, "2024-01-06") + row(0, "2024-01-06") +
                        row(1, "2024-01-06"));
  auto ps = parse_possessions(in, "", 7, false);
  CHECK(league_ppp(ps) == doctest::Approx(1.0));
  PossessionSet empty;
  CHECK_THROWS_AS(league_ppp(empty), Error);
}

TEST_CASE("usage stats summarize per-lineup counts") {
  std::string other = "1,c1,c2,c3,c4,c5,b1,b2,b3,b4,b5,G1,2024-01-06\n";
  std::istringstream in(kHeader + row(2, "2024-01-06") + row(1, "2024-01-06") +
                        row(0, "2024-01-06") + other);
  auto ps = parse_possessions(in, "", 7, false);
  auto st = usage_stats(ps);
  REQUIRE(st.off_counts.size() == 2);  // a-lineup x3, c-lineup x1
  CHECK(st.off_mean == doctest::Approx(2.0));
  CHECK(st.off_std == doctest::Approx(1.0));  // population std of {3, 1}
  REQUIRE(st.def_counts.size() == 1);
  CHECK(st.def_mean == doctest::Approx(4.0));
  CHECK(st.def_std == doctest::Approx(0.0));
  // histogram: count 1 -> bin 0, count 3 -> bin 1, count 4 -> bin 2
  REQUIRE(st.off_histogram.size() == 2);
  CHECK(st.off_histogram[0] == 1);
  CHECK(st.off_histogram[1] == 1);
  REQUIRE(st.def_histogram.size() == 3);
  CHECK(st.def_histogram[2] == 1);
}
