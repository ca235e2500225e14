#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <thread>

namespace lrapm {

void SparseDesign::multiply(const std::vector<double>& x,
                            std::vector<double>& y) const {
  y.assign(n_rows, 0.0);
  for (std::int64_t r = 0; r < n_rows; ++r) {
    double acc = 0;
    for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      acc += val[k] * x[col[k]];
    }
    y[r] = acc;
  }
}

void SparseDesign::multiply_transpose(const std::vector<double>& x,
                                      std::vector<double>& y) const {
  y.assign(n_cols, 0.0);
  for (std::int64_t r = 0; r < n_rows; ++r) {
    for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      y[col[k]] += val[k] * x[r];
    }
  }
}

SparseDesign SparseDesign::slice_rows(std::int64_t begin,
                                      std::int64_t end) const {
  SparseDesign out;
  out.n_cols = n_cols;
  out.entity_labels = entity_labels;
  out.n_rows = end - begin;
  out.row_ptr.reserve(out.n_rows + 1);
  out.row_ptr.push_back(0);
  for (std::int64_t r = begin; r < end; ++r) {
    for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      out.col.push_back(col[k]);
      out.val.push_back(val[k]);
    }
    out.row_ptr.push_back(static_cast<std::int64_t>(out.col.size()));
  }
  return out;
}

SparseDesign SparseDesign::select_rows(
    const std::vector<std::int64_t>& rows) const {
  SparseDesign out;
  out.n_cols = n_cols;
  out.entity_labels = entity_labels;
  out.n_rows = static_cast<std::int64_t>(rows.size());
  out.row_ptr.reserve(out.n_rows + 1);
  out.row_ptr.push_back(0);
  for (std::int64_t r : rows) {
    for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      out.col.push_back(col[k]);
      out.val.push_back(val[k]);
    }
    out.row_ptr.push_back(static_cast<std::int64_t>(out.col.size()));
  }
  return out;
}

DesignBuild build_design(const PossessionSet& ps, DesignMode mode) {
  if (ps.possessions.empty()) {
    throw Error(ErrorCode::EmptyData, "no possessions");
  }
  // Deterministic column order: sorted entity tokens.
  std::map<std::string, int> sorted;
  auto note = [&sorted](const std::string& token) { sorted.emplace(token, 0); };
  for (const auto& p : ps.possessions) {
    if (mode == DesignMode::Player) {
      for (const auto& pl : p.offense.players()) note(pl);
      for (const auto& pl : p.defense.players()) note(pl);
    } else {
      note(p.offense.token());
      note(p.defense.token());
    }
  }
  DesignBuild build;
  auto& d = build.design;
  d.entity_labels.reserve(sorted.size());
  for (auto& [token, idx] : sorted) {
    idx = static_cast<int>(d.entity_labels.size());
    build.entity_index.emplace(token, idx);
    d.entity_labels.push_back(token);
  }
  d.n_cols = 2 * static_cast<int>(d.entity_labels.size());
  d.n_rows = static_cast<std::int64_t>(ps.possessions.size());
  const int nnz_per_row = mode == DesignMode::Player ? 10 : 2;
  d.row_ptr.reserve(d.n_rows + 1);
  d.col.reserve(d.n_rows * nnz_per_row);
  d.val.reserve(d.n_rows * nnz_per_row);
  d.row_ptr.push_back(0);
  build.y.reserve(d.n_rows);
  for (const auto& p : ps.possessions) {
    if (mode == DesignMode::Player) {
      for (const auto& pl : p.offense.players()) {
        d.col.push_back(d.column(sorted.at(pl), Side::Off));
        d.val.push_back(1);
      }
      for (const auto& pl : p.defense.players()) {
        d.col.push_back(d.column(sorted.at(pl), Side::Def));
        d.val.push_back(-1);
      }
    } else {
      d.col.push_back(d.column(sorted.at(p.offense.token()), Side::Off));
      d.val.push_back(1);
      d.col.push_back(d.column(sorted.at(p.defense.token()), Side::Def));
      d.val.push_back(-1);
    }
    d.row_ptr.push_back(static_cast<std::int64_t>(d.col.size()));
    build.y.push_back(static_cast<double>(p.points));
  }
  return build;
}

PenaltySpec PenaltySpec::uniform(int n_cols, double lambda, double center) {
  PenaltySpec spec;
  spec.weights.assign(n_cols, lambda);
  spec.centers.assign(n_cols, center);
  return spec;
}

PenaltySpec PenaltySpec::by_side(int n_cols, double lambda_off,
                                 double lambda_def) {
  PenaltySpec spec;
  spec.weights.resize(n_cols);
  spec.centers.assign(n_cols, 0.0);
  for (int c = 0; c < n_cols; ++c) {
    spec.weights[c] = (c % 2 == 0) ? lambda_off : lambda_def;
  }
  return spec;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

RidgeSolution solve(const SparseDesign& design, const std::vector<double>& y,
                    const PenaltySpec& penalty, double tol, int max_iter) {
  const int n = design.n_cols;
  if (static_cast<std::int64_t>(y.size()) != design.n_rows) {
    throw Error(ErrorCode::DimensionMismatch,
                "y length does not match design rows");
  }
  if (static_cast<int>(penalty.weights.size()) != n ||
      static_cast<int>(penalty.centers.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "penalty length does not match design columns");
  }
  for (double w : penalty.weights) {
    if (w < 0 || !std::isfinite(w)) {
      throw Error(ErrorCode::InvalidArgument, "penalty weights must be >= 0");
    }
  }
  if (max_iter <= 0) max_iter = 10 * (n + 1);

  // Center on the priors: delta = beta - pi, y_tilde = y - X pi. The system
  // solved is (A^T A + D) z = A^T y_tilde with A = [X 1] and D having zero
  // weight on the intercept slot z[n].
  const int na = n + 1;
  std::vector<double> ytilde(design.n_rows);
  design.multiply(penalty.centers, ytilde);
  for (std::int64_t i = 0; i < design.n_rows; ++i) {
    ytilde[i] = y[i] - ytilde[i];
  }
  std::vector<double> b(na, 0.0);
  {
    std::vector<double> xt;
    design.multiply_transpose(ytilde, xt);
    std::copy(xt.begin(), xt.end(), b.begin());
    double s = 0;
    for (double v : ytilde) s += v;
    b[n] = s;
  }

  // diag(A^T A): entries are +-1 so this is the per-column nonzero count.
  std::vector<double> diag(na, 0.0);
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(design.col.size());
       ++k) {
    diag[design.col[k]] += 1.0;
  }
  diag[n] = static_cast<double>(design.n_rows);
  for (int c = 0; c < n; ++c) diag[c] += penalty.weights[c];
  for (int c = 0; c < na; ++c) {
    if (diag[c] <= 0) diag[c] = 1.0;  // column never observed, zero weight
  }

  auto apply = [&](const std::vector<double>& z, std::vector<double>& out,
                   std::vector<double>& row_tmp) {
    // out = A^T A z + D z, with A = [X 1]
    design.multiply(z, row_tmp);  // X * z[0..n)
    double zi = z[n];
    for (std::int64_t i = 0; i < design.n_rows; ++i) row_tmp[i] += zi;
    std::vector<double> xt;
    design.multiply_transpose(row_tmp, xt);
    std::copy(xt.begin(), xt.end(), out.begin());
    double s = 0;
    for (double v : row_tmp) s += v;
    out[n] = s;
    for (int c = 0; c < n; ++c) out[c] += penalty.weights[c] * z[c];
  };

  const double bnorm = std::sqrt(dot(b, b));
  RidgeSolution sol;
  sol.coefficients = penalty.centers;
  std::vector<double> z(na, 0.0), r = b, p(na), q(na), mr(na), row_tmp;
  if (bnorm == 0.0) {
    sol.residual_norm = 0;
    return sol;
  }
  for (int c = 0; c < na; ++c) p[c] = r[c] / diag[c];
  double rho = dot(r, p);
  int it = 0;
  double rel = 1.0;
  for (; it < max_iter; ++it) {
    rel = std::sqrt(dot(r, r)) / bnorm;
    if (rel <= tol) break;
    apply(p, q, row_tmp);
    double alpha = rho / dot(p, q);
    for (int c = 0; c < na; ++c) {
      z[c] += alpha * p[c];
      r[c] -= alpha * q[c];
    }
    for (int c = 0; c < na; ++c) mr[c] = r[c] / diag[c];
    double rho_next = dot(r, mr);
    double beta = rho_next / rho;
    rho = rho_next;
    for (int c = 0; c < na; ++c) p[c] = mr[c] + beta * p[c];
  }
  // True residual, not the CG recurrence.
  apply(z, q, row_tmp);
  double rn = 0;
  for (int c = 0; c < na; ++c) {
    double d = q[c] - b[c];
    rn += d * d;
  }
  rel = std::sqrt(rn) / bnorm;
  if (rel > tol) {
    throw Error(ErrorCode::NonConvergence,
                "CG did not converge: relative residual " +
                    std::to_string(rel) + " after " + std::to_string(it) +
                    " iterations");
  }
  sol.iterations = it;
  sol.residual_norm = rel;
  sol.intercept = z[n];
  for (int c = 0; c < n; ++c) sol.coefficients[c] = penalty.centers[c] + z[c];
  return sol;
}

int worker_cap() {
  if (const char* env = std::getenv("LRAPM_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

double rmse(const std::vector<double>& predicted,
            const std::vector<double>& actual) {
  if (predicted.size() != actual.size() || predicted.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "rmse input size mismatch");
  }
  double s = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    double d = predicted[i] - actual[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(predicted.size()));
}

GridResult grid_search(const SparseDesign& train,
                       const std::vector<double>& y_train,
                       const SparseDesign& val,
                       const std::vector<double>& y_val,
                       const std::vector<GridCandidate>& candidates,
                       const std::vector<double>& centers, double tol,
                       int max_iter) {
  if (candidates.empty()) {
    throw Error(ErrorCode::EmptyData, "no lambda candidates");
  }
  if (train.n_cols != val.n_cols) {
    throw Error(ErrorCode::DimensionMismatch,
                "train and val designs must share the column index");
  }
  GridResult result;
  result.rmse.assign(candidates.size(), 0.0);
  std::vector<std::exception_ptr> errors(candidates.size());

  auto evaluate = [&](std::size_t i) {
    try {
      PenaltySpec spec;
      spec.centers = centers;
      spec.weights.resize(train.n_cols);
      for (int c = 0; c < train.n_cols; ++c) {
        spec.weights[c] = (c % 2 == 0) ? candidates[i].lambda_off
                                       : candidates[i].lambda_def;
      }
      RidgeSolution sol = solve(train, y_train, spec, tol, max_iter);
      std::vector<double> pred;
      val.multiply(sol.coefficients, pred);
      for (double& p : pred) p += sol.intercept;
      result.rmse[i] = rmse(pred, y_val);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  int workers = std::min<int>(worker_cap(),
                              static_cast<int>(candidates.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < candidates.size(); ++i) evaluate(i);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < candidates.size();
             i += static_cast<std::size_t>(workers)) {
          evaluate(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    bool better = result.rmse[i] < result.rmse[best];
    bool tie_larger =
        result.rmse[i] == result.rmse[best] &&
        std::make_pair(candidates[i].lambda_off, candidates[i].lambda_def) >
            std::make_pair(candidates[best].lambda_off,
                           candidates[best].lambda_def);
    if (better || tie_larger) best = i;
  }
  result.best = candidates[best];
  result.best_rmse = result.rmse[best];
  return result;
}

}  // namespace lrapm
