// Shared helpers for the unit and acceptance suites: a dense closed-form
// generalized-ridge oracle (independent of the CG path) and small data
// builders.
#pragma once

#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core/ingest.hpp"
#include "core/solver.hpp"
#include "core/types.hpp"

namespace testutil {

inline Eigen::MatrixXd dense_from(const lrapm::SparseDesign& d) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(d.n_rows, d.n_cols);
  for (std::int64_t r = 0; r < d.n_rows; ++r) {
    for (std::int64_t k = d.row_ptr[r]; k < d.row_ptr[r + 1]; ++k) {
      X(r, d.col[k]) += d.val[k];
    }
  }
  return X;
}

struct OracleSolution {
  double intercept = 0;
  std::vector<double> coefficients;
};

// Minimizes ||y - b0 - X b||^2 + sum w_j (b_j - c_j)^2 in closed form via the
// augmented normal equations, solved densely with LDLT.
inline OracleSolution oracle_solve(const Eigen::MatrixXd& X,
                                   const std::vector<double>& y,
                                   const std::vector<double>& weights,
                                   const std::vector<double>& centers) {
  const Eigen::Index n = X.cols();
  Eigen::MatrixXd A(X.rows(), n + 1);
  A.leftCols(n) = X;
  A.col(n).setOnes();
  Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());
  Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(centers.data(), n);
  Eigen::VectorXd ytilde = yv - X * c;
  Eigen::MatrixXd M = A.transpose() * A;
  for (Eigen::Index j = 0; j < n; ++j) M(j, j) += weights[j];
  Eigen::VectorXd z = M.ldlt().solve(A.transpose() * ytilde);
  OracleSolution sol;
  sol.intercept = z(n);
  sol.coefficients.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) sol.coefficients[j] = centers[j] + z(j);
  return sol;
}

inline OracleSolution oracle_solve(const lrapm::SparseDesign& d,
                                   const std::vector<double>& y,
                                   const lrapm::PenaltySpec& penalty) {
  return oracle_solve(dense_from(d), y, penalty.weights, penalty.centers);
}

// Random fully-dense +-1 design, wrapped in CSR.
inline lrapm::SparseDesign random_pm1_design(std::mt19937& rng,
                                             std::int64_t n_rows, int n_cols) {
  lrapm::SparseDesign d;
  d.n_rows = n_rows;
  d.n_cols = n_cols;
  d.row_ptr.push_back(0);
  std::bernoulli_distribution coin(0.5);
  for (std::int64_t r = 0; r < n_rows; ++r) {
    for (int c = 0; c < n_cols; ++c) {
      d.col.push_back(c);
      d.val.push_back(coin(rng) ? 1 : -1);
    }
    d.row_ptr.push_back(static_cast<std::int64_t>(d.col.size()));
  }
  for (int e = 0; e < n_cols / 2; ++e) {
    d.entity_labels.push_back("e" + std::to_string(e));
  }
  return d;
}

inline double pearson(const std::vector<double>& a,
                      const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Two disjoint 5-player lineups drawn from a 10-player universe "p0".."p9",
// offset selects which split.
inline lrapm::LineupKey five(int base) {
  std::vector<lrapm::PlayerId> ids;
  for (int i = 0; i < 5; ++i) ids.push_back("p" + std::to_string(base + i));
  return lrapm::LineupKey::make(std::span<const lrapm::PlayerId>(ids));
}

struct Row {
  int points;
  lrapm::LineupKey off;
  lrapm::LineupKey def;
  int week = 1;
};

inline lrapm::PossessionSet make_possessions(const std::vector<Row>& rows) {
  lrapm::PossessionSet ps;
  std::int64_t order = 0;
  for (const auto& r : rows) {
    ps.possessions.push_back(lrapm::Possession::make(
        r.points, r.off, r.def, "G1", order++, r.week));
    ps.weeks = std::max(ps.weeks, r.week);
  }
  return ps;
}

}  // namespace testutil
