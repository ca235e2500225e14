#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrapm {

enum class ErrorCode {
  InvalidArgument,
  BadLineupSize,
  DuplicatePlayer,
  ParseError,
  ValidationError,
  EmptyData,
  DimensionMismatch,
  NonConvergence,
  MissingPrior,
  InsufficientWeeks,
  UnknownPlayer,
  ZeroBaseline,
  InvalidConfig,
  IoError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

using PlayerId = std::string;

// Unordered set of the 5 players a team has on court. Stored sorted so that
// any permutation of the same players compares and hashes equal.
class LineupKey {
 public:
  LineupKey() = default;

  // Canonicalizes (sorts) and validates: exactly 5 distinct non-empty ids.
  static LineupKey make(std::span<const PlayerId> players);
  static LineupKey make(std::initializer_list<PlayerId> players);

  const std::array<PlayerId, 5>& players() const noexcept { return players_; }
  bool contains(const PlayerId& p) const;

  // "p1|p2|p3|p4|p5" in canonical order; used as a column label and map key.
  std::string token() const;

  friend bool operator==(const LineupKey&, const LineupKey&) = default;
  friend auto operator<=>(const LineupKey&, const LineupKey&) = default;

 private:
  std::array<PlayerId, 5> players_{};
};

struct LineupKeyHash {
  std::size_t operator()(const LineupKey& k) const noexcept;
};

struct Possession {
  int points = 0;
  LineupKey offense;
  LineupKey defense;
  std::string game_id;
  std::int64_t order = 0;  // file order, monotone within a game
  int week = 1;

  // Throws ValidationError on points out of [0,6] or offense/defense overlap.
  static Possession make(int points, LineupKey offense, LineupKey defense,
                         std::string game_id, std::int64_t order, int week);
};

constexpr int kMaxPossessionPoints = 6;

}  // namespace lrapm
