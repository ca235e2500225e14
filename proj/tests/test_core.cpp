#include <doctest.h>

#include "core/types.hpp"

using namespace lrapm;

namespace {

LineupKey lk(std::initializer_list<PlayerId> ids) {
  return LineupKey::make(ids);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("lineup key canonicalizes player order") {
  auto a = lk({"e", "d", "c", "b", "a"});
  auto b = lk({"a", "b", "c", "d", "e"});
  CHECK(a == b);
  CHECK(a.token() == "a|b|c|d|e");
  CHECK(LineupKeyHash{}(a) == LineupKeyHash{}(b));
  CHECK(a.players()[0] == "a");
  CHECK(a.contains("c"));
  CHECK_FALSE(a.contains("f"));
}

TEST_CASE("lineup key validation") {
  std::vector<PlayerId> four{"a", "b", "c", "d"};
  CHECK(code_of([&] {
          LineupKey::make(std::span<const PlayerId>(four));
        }) == ErrorCode::BadLineupSize);
  CHECK(code_of([] { lk({"a", "b", "c", "d", "a"}); }) ==
        ErrorCode::DuplicatePlayer);
  CHECK(code_of([] { lk({"a", "b", "c", "d", ""}); }) ==
        ErrorCode::BadLineupSize);
}

TEST_CASE("lineup keys order deterministically") {
  auto a = lk({"a", "b", "c", "d", "e"});
  auto b = lk({"a", "b", "c", "d", "f"});
  CHECK(a < b);
  CHECK(a != b);
}

TEST_CASE("possession validation") {
  auto off = lk({"a", "b", "c", "d", "e"});
  auto def = lk({"f", "g", "h", "i", "j"});
  auto p = Possession::make(3, off, def, "G1", 0, 2);
  CHECK(p.points == 3);
  CHECK(p.week == 2);

  CHECK(code_of([&] { Possession::make(-1, off, def, "G1", 0, 1); }) ==
        ErrorCode::ValidationError);
  CHECK(code_of([&] {
          Possession::make(kMaxPossessionPoints + 1, off, def, "G1", 0, 1);
        }) == ErrorCode::ValidationError);
  CHECK(code_of([&] { Possession::make(2, off, def, "G1", 0, 0); }) ==
        ErrorCode::ValidationError);

  auto overlap = lk({"e", "g", "h", "i", "j"});
  CHECK(code_of([&] { Possession::make(2, off, overlap, "G1", 0, 1); }) ==
        ErrorCode::ValidationError);
}

TEST_CASE("error code names are distinct and stable") {
  CHECK(std::string(error_code_name(ErrorCode::ParseError)) == "ParseError");
  CHECK(std::string(error_code_name(ErrorCode::NonConvergence)) ==
        "NonConvergence");
  CHECK(std::string(error_code_name(ErrorCode::MissingPrior)) !=
        std::string(error_code_name(ErrorCode::ZeroBaseline)));
}
