#include "types.hpp"

#include <algorithm>

namespace lrapm {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BadLineupSize: return "BadLineupSize";
    case ErrorCode::DuplicatePlayer: return "DuplicatePlayer";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::MissingPrior: return "MissingPrior";
    case ErrorCode::InsufficientWeeks: return "InsufficientWeeks";
    case ErrorCode::UnknownPlayer: return "UnknownPlayer";
    case ErrorCode::ZeroBaseline: return "ZeroBaseline";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

LineupKey LineupKey::make(std::span<const PlayerId> players) {
  if (players.size() != 5) {
    throw Error(ErrorCode::BadLineupSize,
                "lineup must have exactly 5 players, got " +
                    std::to_string(players.size()));
  }
  LineupKey key;
  std::copy(players.begin(), players.end(), key.players_.begin());
  std::sort(key.players_.begin(), key.players_.end());
  for (std::size_t i = 0; i < 5; ++i) {
    if (key.players_[i].empty()) {
      throw Error(ErrorCode::BadLineupSize, "empty player id in lineup");
    }
    if (i > 0 && key.players_[i] == key.players_[i - 1]) {
      throw Error(ErrorCode::DuplicatePlayer,
                  "duplicate player in lineup: " + key.players_[i]);
    }
  }
  return key;
}

LineupKey LineupKey::make(std::initializer_list<PlayerId> players) {
  std::vector<PlayerId> v(players);
  return make(std::span<const PlayerId>(v));
}

bool LineupKey::contains(const PlayerId& p) const {
  return std::binary_search(players_.begin(), players_.end(), p);
}

std::string LineupKey::token() const {
  std::string out = players_[0];
  for (std::size_t i = 1; i < 5; ++i) {
    out += '|';
    out += players_[i];
  }
  return out;
}

std::size_t LineupKeyHash::operator()(const LineupKey& k) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (const auto& p : k.players()) {
    for (char c : p) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ull;
    }
    h ^= '|';
    h *= 0x100000001b3ull;
  }
  return h;
}

Possession Possession::make(int points, LineupKey offense, LineupKey defense,
                            std::string game_id, std::int64_t order,
                            int week) {
  if (points < 0 || points > kMaxPossessionPoints) {
    throw Error(ErrorCode::ValidationError,
                "points out of range [0," +
                    std::to_string(kMaxPossessionPoints) +
                    "]: " + std::to_string(points));
  }
  for (const auto& p : offense.players()) {
    if (defense.contains(p)) {
      throw Error(ErrorCode::ValidationError,
                  "player on both offense and defense: " + p);
    }
  }
  if (week < 1) {
    throw Error(ErrorCode::ValidationError,
                "week index must be >= 1, got " + std::to_string(week));
  }
  Possession poss;
  poss.points = points;
  poss.offense = std::move(offense);
  poss.defense = std::move(defense);
  poss.game_id = std::move(game_id);
  poss.order = order;
  poss.week = week;
  return poss;
}

}  // namespace lrapm
