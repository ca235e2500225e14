#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ingest.hpp"
#include "solver.hpp"
#include "types.hpp"

namespace lrapm {

// Unseen-player fallback, in points per possession per side. The source
// convention of "-1" is read as per-100-possessions; see README.
inline constexpr double kDefaultFallbackRating = -0.01;

struct PlayerRatings {
  double gamma0 = 0;
  std::map<PlayerId, double> off;
  std::map<PlayerId, double> def;
  double lambda_off = 0;
  double lambda_def = 0;

  double rating(const PlayerId& p, Side side, double fallback) const;
};

PlayerRatings fit_rapm(const PossessionSet& ps, double lambda_off,
                       double lambda_def, double tol = kDefaultSolverTol,
                       int max_iter = 0);

// Grid search over the Cartesian product of the off/def candidates. The last
// val_weeks weeks of ps are the validation set, everything before is train.
GridCandidate select_rapm_lambdas(const PossessionSet& ps, int val_weeks,
                                  const std::vector<double>& grid_off,
                                  const std::vector<double>& grid_def,
                                  double tol = kDefaultSolverTol,
                                  int max_iter = 0);

void save_player_ratings(const PlayerRatings& r, std::ostream& out);
void save_player_ratings_file(const PlayerRatings& r, const std::string& path,
                              bool json_mirror = false);
PlayerRatings load_player_ratings(std::istream& in);
PlayerRatings load_player_ratings_file(const std::string& path);

}  // namespace lrapm
