#include "fcr/milp_model.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace fcr {

const char* to_string(RowFamily family) {
  switch (family) {
    case RowFamily::BaselineBounds: return "baseline-bounds";
    case RowFamily::StepPowerBounds: return "step-power-bounds";
    case RowFamily::Exclusivity: return "exclusivity";
    case RowFamily::SoE: return "soe";
    case RowFamily::DroopCoupling: return "droop-coupling";
    case RowFamily::BidBounds: return "bid-bounds";
    case RowFamily::PowerRequirement: return "power-requirement";
    case RowFamily::Endurance: return "endurance";
    case RowFamily::Degradation: return "degradation";
    case RowFamily::Other: return "other";
  }
  return "?";
}

Index MilpModel::add_variable(std::string name, double lower, double upper, VarType type) {
  if (registry_.count(name)) throw std::logic_error("duplicate variable name '" + name + "'");
  if (!(lower <= upper)) throw std::logic_error(fmt::format("variable '{}' has lower {} > upper {}", name, lower, upper));
  const auto index = static_cast<Index>(variables_.size());
  registry_.emplace(name, index);
  variables_.push_back({std::move(name), lower, upper, type});
  objective_.push_back(0.0);
  return index;
}

Index MilpModel::add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs, RowFamily family) {
  for (const auto& t : terms)
    if (t.col < 0 || t.col >= num_variables())
      throw std::logic_error(fmt::format("row '{}' references unknown column {}", name, t.col));
  constraints_.push_back({std::move(name), std::move(terms), sense, rhs, family});
  return static_cast<Index>(constraints_.size()) - 1;
}

void MilpModel::fix(Index col, double value) {
  auto& v = variable(col);
  v.lower = value;
  v.upper = value;
}

Index MilpModel::num_binaries() const {
  Index n = 0;
  for (const auto& v : variables_) n += v.type == VarType::Binary;
  return n;
}

Index MilpModel::col(const std::string& name) const {
  auto it = registry_.find(name);
  if (it == registry_.end()) throw RegistryMiss("no column named '" + name + "'");
  return it->second;
}

double MilpModel::evaluate_objective(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  double value = objective_constant_;
  for (std::size_t j = 0; j < objective_.size(); ++j) value += objective_[j] * x[static_cast<Index>(j)];
  return value;
}

double MilpModel::row_activity(const Constraint& row, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  double a = 0.0;
  for (const auto& t : row.terms) a += t.coef * x[t.col];
  return a;
}

void MilpModel::check() const {
  for (const auto& v : variables_) {
    if (!(v.lower <= v.upper)) throw std::logic_error("bad bounds on " + v.name);
    if (v.type == VarType::Binary && (v.lower < 0 || v.upper > 1)) throw std::logic_error("binary out of [0,1]: " + v.name);
  }
  for (const auto& r : constraints_)
    for (const auto& t : r.terms)
      if (t.col < 0 || t.col >= num_variables() || !std::isfinite(t.coef))
        throw std::logic_error("bad term in row " + r.name);
  if (registry_.size() != variables_.size()) throw std::logic_error("registry out of sync");
}

const FamilyViolation* ViolationReport::find(RowFamily family) const {
  for (const auto& r : rows)
    if (r.family == family) return &r;
  return nullptr;
}

ViolationReport validate_solution(const MilpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x, double tol) {
  if (x.size() != model.num_variables())
    throw std::invalid_argument("validate_solution: solution length does not match the model");
  ViolationReport report;
  report.tolerance = tol;

  for (Index j = 0; j < model.num_variables(); ++j) {
    const auto& v = model.variable(j);
    const double excess = std::max(v.lower - x[j], x[j] - v.upper);
    if (excess > report.worst_bound) {
      report.worst_bound = excess;
      report.worst_bound_where = v.name;
    }
    if (v.type == VarType::Binary) report.worst_integrality = std::max(report.worst_integrality, std::abs(x[j] - std::round(x[j])));
  }

  std::array<FamilyViolation, kRowFamilyCount> worst{};
  for (int f = 0; f < kRowFamilyCount; ++f) worst[static_cast<std::size_t>(f)].family = static_cast<RowFamily>(f);
  for (const auto& row : model.constraints()) {
    const double a = model.row_activity(row, x);
    double v = 0.0;
    switch (row.sense) {
      case Sense::LessEqual: v = a - row.rhs; break;
      case Sense::GreaterEqual: v = row.rhs - a; break;
      case Sense::Equal: v = std::abs(a - row.rhs); break;
    }
    if (v <= tol) continue;
    auto& w = worst[static_cast<std::size_t>(row.family)];
    ++w.count;
    if (v > w.worst) {
      w.worst = v;
      w.where = row.name;
    }
  }
  for (const auto& w : worst)
    if (w.count > 0) report.rows.push_back(w);
  return report;
}

}  // namespace fcr
