#pragma once

#include "simdiag/types.hpp"

namespace simdiag {

// min cost^T u  s.t.  rows * u <= rhs,  u_i >= 0 where nonneg[i]
struct LpInstance {
  Vec cost;
  Mat rows;  // may have zero rows
  Vec rhs;
  std::vector<bool> nonneg;  // empty means all nonnegative
};

struct LpResult {
  enum class Status { Optimal, Unbounded, Infeasible };
  Status status = Status::Optimal;
  double value = 0.0;
  Vec point;
  double feas_residual = 0.0;  // max(0, rows*u - rhs) and negativity violation
};

namespace detail {

// dense tableau simplex with Bland's rule; variables are all nonnegative,
// constraints are equalities with rhs >= 0, initial basis supplied
struct SimplexTableau {
  Mat T;                   // (m+1) x (n+1): body | rhs, last row = reduced costs
  std::vector<int> basis;  // basic variable per row
  double pivot_tol = 1e-10;

  // returns false when unbounded
  bool run() {
    const int mrows = static_cast<int>(T.rows()) - 1;
    const int ncols = static_cast<int>(T.cols()) - 1;
    for (;;) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j)
        if (T(mrows, j) < -pivot_tol) {
          enter = j;  // Bland: smallest index with negative reduced cost
          break;
        }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < mrows; ++i) {
        if (T(i, enter) <= pivot_tol) continue;
        double ratio = T(i, ncols) / T(i, enter);
        if (ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 &&
             (leave < 0 || basis[i] < basis[leave]))) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  void pivot(int row, int col) {
    T.row(row) /= T(row, col);
    for (Eigen::Index i = 0; i < T.rows(); ++i) {
      if (i == row) continue;
      double f = T(i, col);
      if (f != 0.0) T.row(i) -= f * T.row(row);
    }
    basis[row] = col;
  }
};

}  // namespace detail

inline LpResult solve_lp(const LpInstance& lp) {
  const int n_in = static_cast<int>(lp.cost.size());
  const int m = static_cast<int>(lp.rhs.size());
  if (lp.rows.rows() != m || (m > 0 && lp.rows.cols() != n_in))
    throw std::invalid_argument("solve_lp: shape mismatch");
  if (!lp.cost.allFinite() || (m > 0 && !lp.rows.allFinite()) ||
      !lp.rhs.allFinite())
    throw std::invalid_argument("solve_lp: data must be finite");
  auto is_nonneg = [&](int j) {
    return lp.nonneg.empty() || lp.nonneg[static_cast<std::size_t>(j)];
  };

  // split free variables into differences of nonnegative ones
  std::vector<int> pos_col(n_in), neg_col(n_in, -1);
  int n = 0;
  for (int j = 0; j < n_in; ++j) {
    pos_col[j] = n++;
    if (!is_nonneg(j)) neg_col[j] = n++;
  }
  Mat A = Mat::Zero(m, n + m);  // structurals + slacks
  Vec b = lp.rhs;
  Vec c = Vec::Zero(n + m);
  for (int j = 0; j < n_in; ++j) {
    c(pos_col[j]) = lp.cost(j);
    if (neg_col[j] >= 0) c(neg_col[j]) = -lp.cost(j);
    for (int i = 0; i < m; ++i) {
      A(i, pos_col[j]) = lp.rows(i, j);
      if (neg_col[j] >= 0) A(i, neg_col[j]) = -lp.rows(i, j);
    }
  }
  for (int i = 0; i < m; ++i) A(i, n + i) = 1.0;  // slack

  // make rhs nonnegative; flipped rows get artificials, others use the slack
  std::vector<int> art_col;
  std::vector<bool> flipped(m, false);
  for (int i = 0; i < m; ++i)
    if (b(i) < 0) {
      A.row(i) *= -1.0;
      b(i) = -b(i);
      flipped[i] = true;
    }
  int n_art = 0;
  for (int i = 0; i < m; ++i)
    if (flipped[i]) ++n_art;
  Mat full = Mat::Zero(m, n + m + n_art);
  full.leftCols(n + m) = A;
  {
    int at = n + m;
    for (int i = 0; i < m; ++i)
      if (flipped[i]) {
        full(i, at) = 1.0;
        art_col.push_back(at++);
      }
  }

  detail::SimplexTableau tab;
  const int total = n + m + n_art;
  tab.T = Mat::Zero(m + 1, total + 1);
  tab.T.topLeftCorner(m, total) = full;
  tab.T.col(total).head(m) = b;
  tab.basis.resize(m);
  {
    int at = 0;
    for (int i = 0; i < m; ++i)
      tab.basis[i] = flipped[i] ? art_col[at++] : n + i;
  }

  LpResult res;
  if (n_art > 0) {
    // phase 1: drive the artificials to zero
    for (int acol : art_col) tab.T(m, acol) = 1.0;
    for (int i = 0; i < m; ++i)
      if (flipped[i]) tab.T.row(m) -= tab.T.row(i);
    tab.run();  // phase-1 objective is bounded below by 0
    double art_sum = -tab.T(m, total);
    if (art_sum > 1e-9) {
      res.status = LpResult::Status::Infeasible;
      return res;
    }
    // pivot any artificial still basic (at zero) out if possible
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] < n + m) continue;
      int col = -1;
      for (int j = 0; j < n + m; ++j)
        if (std::abs(tab.T(i, j)) > tab.pivot_tol) {
          col = j;
          break;
        }
      if (col >= 0) tab.pivot(i, col);
    }
    // remove artificials from play and install the real objective
    for (int acol : art_col) tab.T.col(acol).setZero();
  }
  tab.T.row(m).setZero();
  for (int j = 0; j < n + m; ++j) tab.T(m, j) = j < n ? c(j) : 0.0;
  for (int i = 0; i < m; ++i)
    if (std::abs(tab.T(m, tab.basis[i])) > 0.0)
      tab.T.row(m) -= tab.T(m, tab.basis[i]) * tab.T.row(i);

  if (!tab.run()) {
    res.status = LpResult::Status::Unbounded;
    return res;
  }

  Vec x = Vec::Zero(total);
  for (int i = 0; i < m; ++i) x(tab.basis[i]) = tab.T(i, total);
  res.point = Vec(n_in);
  for (int j = 0; j < n_in; ++j) {
    res.point(j) = x(pos_col[j]);
    if (neg_col[j] >= 0) res.point(j) -= x(neg_col[j]);
  }
  res.value = lp.cost.dot(res.point);
  res.status = LpResult::Status::Optimal;
  double viol = 0.0;
  if (m > 0) viol = (lp.rows * res.point - lp.rhs).cwiseMax(0.0).maxCoeff();
  for (int j = 0; j < n_in; ++j)
    if (is_nonneg(j)) viol = std::max(viol, -res.point(j));
  res.feas_residual = viol;
  return res;
}

}  // namespace simdiag
