#include <fmt/format.h>

#include <chrono>
#include <cmath>

#include "fcr/simplex.hpp"
#include "fcr/solver.hpp"

namespace fcr {

namespace {

constexpr double kIntTol = 1e-6;

struct Search {
  const MilpModel& model;
  LpProblem<double> lp;
  std::vector<Index> binaries;
  std::chrono::steady_clock::time_point start;
  double time_limit;
  bool timed_out = false;
  bool have_incumbent = false;
  double best = -kInf;
  Eigen::VectorXd incumbent;
  long nodes = 0;

  bool out_of_time() {
    if (!timed_out)
      timed_out = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > time_limit;
    return timed_out;
  }

  void dfs() {
    if (out_of_time()) return;
    ++nodes;
    const auto res = solve_lp(lp);
    if (res.status == LpStatus::Unbounded) throw Unbounded("LP relaxation is unbounded");
    if (res.status != LpStatus::Optimal) return;
    const double bound = res.objective;
    const double slack = 1e-9 * std::max(1.0, std::abs(best));
    if (have_incumbent && bound <= best + slack) return;

    Index branch = -1;
    for (Index j : binaries) {
      const double v = res.x[j];
      if (std::abs(v - std::round(v)) > kIntTol) {
        branch = j;
        break;
      }
    }
    if (branch < 0) {
      accept(res.x);
      return;
    }
    const double lo = lp.lower[branch], hi = lp.upper[branch];
    // Larger LP value first: usually the better side.
    const double first = res.x[branch] >= 0.5 ? 1.0 : 0.0;
    for (double v : {first, 1.0 - first}) {
      lp.lower[branch] = lp.upper[branch] = v;
      dfs();
    }
    lp.lower[branch] = lo;
    lp.upper[branch] = hi;
  }

  // Integral node: fix the binaries exactly and re-solve for a clean point.
  void accept(const Eigen::VectorXd& x) {
    LpProblem<double> fixed = lp;
    for (Index j : binaries) fixed.lower[j] = fixed.upper[j] = std::round(x[j]);
    const auto res = solve_lp(fixed);
    if (res.status != LpStatus::Optimal) return;
    if (!have_incumbent || res.objective > best) {
      have_incumbent = true;
      best = res.objective;
      incumbent = res.x;
    }
  }
};

}  // namespace

SolveResult solve_micro(const MilpModel& model, const SolveLimits& limits, const MicroCaps& caps) {
  const auto start = std::chrono::steady_clock::now();
  const Index nb = model.num_binaries();
  const Index nc = model.num_variables() - nb;
  if (nb > caps.max_binaries || nc > caps.max_continuous)
    throw TooLarge(fmt::format("micro solver handles at most {} binaries and {} continuous columns (model has {} and {})",
                               caps.max_binaries, caps.max_continuous, nb, nc));

  const Index n = model.num_variables();
  const Index m = model.num_constraints();
  Search s{model, {}, {}, start, limits.time_limit, false, false, -kInf, {}, 0};
  auto& lp = s.lp;
  lp.A = Eigen::MatrixXd::Zero(m, n);
  lp.b.resize(m);
  lp.sense.resize(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    const auto& row = model.constraints()[static_cast<std::size_t>(i)];
    for (const auto& t : row.terms) lp.A(i, t.col) += t.coef;
    lp.b[i] = row.rhs;
    lp.sense[static_cast<std::size_t>(i)] = row.sense;
  }
  lp.c = Eigen::Map<const Eigen::VectorXd>(model.objective().data(), n);
  lp.lower.resize(n);
  lp.upper.resize(n);
  for (Index j = 0; j < n; ++j) {
    const auto& v = model.variable(j);
    lp.lower[j] = v.lower;
    lp.upper[j] = v.upper;
    if (v.type == VarType::Binary) {
      lp.lower[j] = std::max(0.0, std::ceil(v.lower - kIntTol));
      lp.upper[j] = std::min(1.0, std::floor(v.upper + kIntTol));
      s.binaries.push_back(j);
    }
  }

  s.dfs();

  SolveResult r;
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.message = fmt::format("{} nodes", s.nodes);
  if (s.have_incumbent) {
    r.solution = s.incumbent;
    r.objective = model.evaluate_objective(r.solution);
  }
  if (s.timed_out) {
    r.status = SolveStatus::TimeLimit;
    r.gap = kInf;
  } else {
    r.status = s.have_incumbent ? SolveStatus::Optimal : SolveStatus::Infeasible;
  }
  return r;
}

}  // namespace fcr
