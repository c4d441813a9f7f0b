#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fcr/milp_model.hpp"

namespace fcr {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// maximize c'x  s.t.  A x (sense) b,  lower <= x <= upper.
template <typename Scalar>
struct LpProblem {
  MatrixX<Scalar> A;
  VectorX<Scalar> b;
  std::vector<Sense> sense;
  VectorX<Scalar> c;
  VectorX<Scalar> lower, upper;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

template <typename Scalar>
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Scalar objective = 0;
  VectorX<Scalar> x;
  long pivots = 0;
};

namespace detail {

// Dense tableau for max c'y, rows with rhs >= 0, y >= 0. Column `cols`
// holds the rhs, row `rows` the reduced costs (negated objective).
template <typename Scalar>
class Tableau {
 public:
  Tableau(MatrixX<Scalar> t, std::vector<Eigen::Index> basis, Scalar eps)
      : t_(std::move(t)), basis_(std::move(basis)), eps_(eps) {}

  // Bland's rule: lowest-index improving column, ties in the ratio test go
  // to the lowest basic index. Returns false when unbounded.
  bool optimize(const std::vector<bool>& allowed, long max_pivots, long& pivots) {
    const Eigen::Index m = t_.rows() - 1;
    const Eigen::Index n = t_.cols() - 1;
    while (pivots < max_pivots) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < n; ++j)
        if (allowed[static_cast<std::size_t>(j)] && t_(m, j) < -eps_) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      Scalar best = std::numeric_limits<Scalar>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        if (t_(i, enter) <= eps_) continue;
        const Scalar ratio = t_(i, n) / t_(i, enter);
        if (leave < 0 || ratio < best - eps_) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + eps_ &&
                   basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      ++pivots;
    }
    return true;
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const Scalar f = t_(i, c);
      if (f != Scalar(0)) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  MatrixX<Scalar>& table() { return t_; }
  std::vector<Eigen::Index>& basis() { return basis_; }

 private:
  MatrixX<Scalar> t_;
  std::vector<Eigen::Index> basis_;
  Scalar eps_;
};

}  // namespace detail

/// Two-phase primal simplex with Bland's rule on a dense tableau. Columns
/// with a finite lower bound are shifted, upper-only columns mirrored, free
/// columns split; finite upper bounds become rows. Fixed columns are folded
/// into the right-hand side.
template <typename Scalar>
LpResult<Scalar> solve_lp(const LpProblem<Scalar>& lp, Scalar eps = Scalar(1e-9), long max_pivots = 200000) {
  using Idx = Eigen::Index;
  const Idx rows = lp.A.rows();
  const Idx cols = lp.A.cols();
  LpResult<Scalar> result;
  result.x = VectorX<Scalar>::Zero(cols);

  // Column transform x_j = offset_j + sign_j * y_k (+ second y for free columns).
  struct Map {
    Idx y = -1, y_neg = -1;
    Scalar offset = 0, sign = 1;
  };
  std::vector<Map> map(static_cast<std::size_t>(cols));
  Idx ny = 0;
  std::vector<std::pair<Idx, Scalar>> ub_rows;  // (y, bound)
  for (Idx j = 0; j < cols; ++j) {
    auto& mp = map[static_cast<std::size_t>(j)];
    const Scalar lo = lp.lower[j], hi = lp.upper[j];
    if (lo > hi + eps) return result;  // infeasible bounds
    if (std::isfinite(double(lo)) && std::isfinite(double(hi)) && hi - lo <= eps) {
      mp.offset = lo;
      continue;
    }
    if (std::isfinite(double(lo))) {
      mp.offset = lo;
      mp.y = ny++;
      if (std::isfinite(double(hi))) ub_rows.emplace_back(mp.y, hi - lo);
    } else if (std::isfinite(double(hi))) {
      mp.offset = hi;
      mp.sign = -1;
      mp.y = ny++;
    } else {
      mp.y = ny++;
      mp.y_neg = ny++;
    }
  }

  // Structural rows in y, then upper-bound rows.
  const Idx m = rows + static_cast<Idx>(ub_rows.size());
  MatrixX<Scalar> A = MatrixX<Scalar>::Zero(m, ny);
  VectorX<Scalar> b(m);
  std::vector<Sense> sense(static_cast<std::size_t>(m), Sense::LessEqual);
  for (Idx i = 0; i < rows; ++i) {
    Scalar rhs = lp.b[i];
    for (Idx j = 0; j < cols; ++j) {
      const Scalar a = lp.A(i, j);
      if (a == Scalar(0)) continue;
      const auto& mp = map[static_cast<std::size_t>(j)];
      rhs -= a * mp.offset;
      if (mp.y >= 0) A(i, mp.y) += a * mp.sign;
      if (mp.y_neg >= 0) A(i, mp.y_neg) -= a;
    }
    b[i] = rhs;
    sense[static_cast<std::size_t>(i)] = lp.sense[static_cast<std::size_t>(i)];
  }
  for (std::size_t k = 0; k < ub_rows.size(); ++k) {
    const Idx i = rows + static_cast<Idx>(k);
    A(i, ub_rows[k].first) = 1;
    b[i] = ub_rows[k].second;
  }
  VectorX<Scalar> cy = VectorX<Scalar>::Zero(ny);
  for (Idx j = 0; j < cols; ++j) {
    const auto& mp = map[static_cast<std::size_t>(j)];
    if (mp.y >= 0) cy[mp.y] += lp.c[j] * mp.sign;
    if (mp.y_neg >= 0) cy[mp.y_neg] -= lp.c[j];
  }

  // Normalize to rhs >= 0 and count auxiliary columns.
  for (Idx i = 0; i < m; ++i) {
    if (b[i] < 0) {
      A.row(i) *= -1;
      b[i] = -b[i];
      auto& s = sense[static_cast<std::size_t>(i)];
      if (s == Sense::LessEqual) s = Sense::GreaterEqual;
      else if (s == Sense::GreaterEqual) s = Sense::LessEqual;
    }
  }
  Idx n_slack = 0, n_art = 0;
  for (auto s : sense) {
    if (s != Sense::Equal) ++n_slack;
    if (s != Sense::LessEqual) ++n_art;
  }
  const Idx n = ny + n_slack + n_art;
  MatrixX<Scalar> T = MatrixX<Scalar>::Zero(m + 1, n + 1);
  T.topLeftCorner(m, ny) = A;
  T.block(0, n, m, 1) = b;
  std::vector<Idx> basis(static_cast<std::size_t>(m));
  std::vector<bool> is_art(static_cast<std::size_t>(n), false);
  Idx slack = ny, art = ny + n_slack;
  for (Idx i = 0; i < m; ++i) {
    const auto s = sense[static_cast<std::size_t>(i)];
    if (s == Sense::LessEqual) {
      T(i, slack) = 1;
      basis[static_cast<std::size_t>(i)] = slack++;
    } else {
      if (s == Sense::GreaterEqual) T(i, slack++) = -1;
      T(i, art) = 1;
      is_art[static_cast<std::size_t>(art)] = true;
      basis[static_cast<std::size_t>(i)] = art++;
    }
  }

  detail::Tableau<Scalar> tab(std::move(T), std::move(basis), eps);
  auto& t = tab.table();
  std::vector<bool> allowed(static_cast<std::size_t>(n), true);

  // Phase 1: maximize -sum(artificials).
  if (n_art > 0) {
    t.row(m).setZero();
    for (Idx i = 0; i < m; ++i)
      if (is_art[static_cast<std::size_t>(tab.basis()[static_cast<std::size_t>(i)])]) t.row(m) -= t.row(i);
    for (Idx j = 0; j < n; ++j)
      if (is_art[static_cast<std::size_t>(j)]) t(m, j) = 0;
    if (!tab.optimize(allowed, max_pivots, result.pivots)) return result;  // cannot happen: bounded below
    if (result.pivots >= max_pivots) {
      result.status = LpStatus::IterationLimit;
      return result;
    }
    const Scalar scale = std::max<Scalar>(Scalar(1), b.cwiseAbs().maxCoeff());
    if (-t(m, n) > eps * 1e3 * scale) return result;  // infeasible
    // Drive remaining zero-level artificials out of the basis.
    for (Idx i = 0; i < m; ++i) {
      if (!is_art[static_cast<std::size_t>(tab.basis()[static_cast<std::size_t>(i)])]) continue;
      for (Idx j = 0; j < n; ++j)
        if (!is_art[static_cast<std::size_t>(j)] && std::abs(t(i, j)) > eps) {
          tab.pivot(i, j);
          break;
        }
    }
    for (Idx j = 0; j < n; ++j)
      if (is_art[static_cast<std::size_t>(j)]) allowed[static_cast<std::size_t>(j)] = false;
  }

  // Phase 2.
  t.row(m).setZero();
  t.block(m, 0, 1, ny) = -cy.transpose();
  for (Idx i = 0; i < m; ++i) {
    const Idx bj = tab.basis()[static_cast<std::size_t>(i)];
    const Scalar cb = bj < ny ? cy[bj] : Scalar(0);
    if (cb != Scalar(0)) t.row(m) += cb * t.row(i);
  }
  if (!tab.optimize(allowed, max_pivots, result.pivots)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  if (result.pivots >= max_pivots) {
    result.status = LpStatus::IterationLimit;
    return result;
  }

  VectorX<Scalar> y = VectorX<Scalar>::Zero(ny);
  for (Idx i = 0; i < m; ++i) {
    const Idx bj = tab.basis()[static_cast<std::size_t>(i)];
    if (bj < ny) y[bj] = t(i, n);
  }
  for (Idx j = 0; j < cols; ++j) {
    const auto& mp = map[static_cast<std::size_t>(j)];
    Scalar v = mp.offset;
    if (mp.y >= 0) v += mp.sign * y[mp.y];
    if (mp.y_neg >= 0) v -= y[mp.y_neg];
    result.x[j] = v;
  }
  result.objective = lp.c.dot(result.x);
  result.status = LpStatus::Optimal;
  return result;
}

}  // namespace fcr
