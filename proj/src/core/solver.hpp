#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ingest.hpp"
#include "types.hpp"

namespace lrapm {

enum class DesignMode { Player, Lineup };
enum class Side { Off = 0, Def = 1 };

// CSR matrix over {+1,-1} entries. Columns come in (off, def) pairs per
// entity: entity k owns columns 2k (off) and 2k+1 (def), entities in sorted
// token order.
struct SparseDesign {
  std::int64_t n_rows = 0;
  int n_cols = 0;
  std::vector<std::int64_t> row_ptr;
  std::vector<std::int32_t> col;
  std::vector<std::int8_t> val;
  std::vector<std::string> entity_labels;  // size n_cols / 2

  int column(int entity, Side side) const {
    return 2 * entity + static_cast<int>(side);
  }
  Side column_side(int c) const { return static_cast<Side>(c % 2); }

  // y = X * x  (y sized n_rows)
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  // y = X^T * x  (y sized n_cols)
  void multiply_transpose(const std::vector<double>& x,
                          std::vector<double>& y) const;
  // Restrict to a row range [begin, end).
  SparseDesign slice_rows(std::int64_t begin, std::int64_t end) const;
  // Restrict to an explicit row index list (same column index).
  SparseDesign select_rows(const std::vector<std::int64_t>& rows) const;
};

struct DesignBuild {
  SparseDesign design;
  std::vector<double> y;
  std::unordered_map<std::string, int> entity_index;  // token -> entity
};

DesignBuild build_design(const PossessionSet& ps, DesignMode mode);

struct PenaltySpec {
  std::vector<double> weights;  // per-column lambda, >= 0
  std::vector<double> centers;  // per-column prior value

  static PenaltySpec uniform(int n_cols, double lambda, double center = 0.0);
  // lambda_off on even (off) columns, lambda_def on odd (def) columns.
  static PenaltySpec by_side(int n_cols, double lambda_off, double lambda_def);
};

struct RidgeSolution {
  double intercept = 0;
  std::vector<double> coefficients;
  int iterations = 0;
  double residual_norm = 0;  // relative normal-equations residual
};

inline constexpr double kDefaultSolverTol = 1e-8;

// Minimizes sum_i (y_i - b0 - X_i beta)^2 + sum_j w_j (beta_j - c_j)^2 with
// the intercept b0 unpenalized. Solved as Jacobi-preconditioned CG on the
// normal equations of the intercept-augmented, prior-centered system.
// max_iter <= 0 means 10 * (n_cols + 1).
RidgeSolution solve(const SparseDesign& design, const std::vector<double>& y,
                    const PenaltySpec& penalty,
                    double tol = kDefaultSolverTol, int max_iter = 0);

struct GridCandidate {
  double lambda_off = 0;
  double lambda_def = 0;  // equal to lambda_off for single-lambda searches
};

struct GridResult {
  GridCandidate best;
  double best_rmse = 0;
  std::vector<double> rmse;  // per candidate, in input order
};

// Fits each candidate on (train, y_train) with centers from penalty_template
// and side-dependent weights (lambda_off / lambda_def), scores RMSE on
// (val, y_val), and returns the minimizer. Ties break toward the larger
// (lambda_off, lambda_def) pair. Candidates are evaluated concurrently,
// capped by the LRAPM_THREADS environment variable.
GridResult grid_search(const SparseDesign& train,
                       const std::vector<double>& y_train,
                       const SparseDesign& val,
                       const std::vector<double>& y_val,
                       const std::vector<GridCandidate>& candidates,
                       const std::vector<double>& centers,
                       double tol = kDefaultSolverTol, int max_iter = 0);

double rmse(const std::vector<double>& predicted,
            const std::vector<double>& actual);

int worker_cap();  // LRAPM_THREADS, defaulting to hardware concurrency

}  // namespace lrapm
