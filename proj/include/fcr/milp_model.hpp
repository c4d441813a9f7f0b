#pragma once

#include <Eigen/Core>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fcr/time_grid.hpp"

namespace fcr {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarType { Continuous, Binary };
enum class Sense { LessEqual, Equal, GreaterEqual };

/// Constraint groups reported separately by the solution checker.
enum class RowFamily {
  BaselineBounds,
  StepPowerBounds,
  Exclusivity,
  SoE,
  DroopCoupling,
  BidBounds,
  PowerRequirement,
  Endurance,
  Degradation,
  Other,
};
inline constexpr int kRowFamilyCount = static_cast<int>(RowFamily::Other) + 1;
const char* to_string(RowFamily family);

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  VarType type = VarType::Continuous;
};

struct Term {
  Index col;
  double coef;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
  RowFamily family = RowFamily::Other;
};

class RegistryMiss : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Linear objective (maximized), bounded columns with optional
/// integrality, and named sparse rows. Column names are unique and map
/// back to indices through the registry.
class MilpModel {
 public:
  Index add_variable(std::string name, double lower, double upper, VarType type = VarType::Continuous);
  Index add_binary(std::string name) { return add_variable(std::move(name), 0.0, 1.0, VarType::Binary); }
  Index add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs, RowFamily family);

  void set_objective(Index col, double coef) { objective_[static_cast<std::size_t>(col)] = coef; }
  void add_objective(Index col, double coef) { objective_[static_cast<std::size_t>(col)] += coef; }
  void set_objective_constant(double c) { objective_constant_ = c; }
  void fix(Index col, double value);

  Index num_variables() const { return static_cast<Index>(variables_.size()); }
  Index num_constraints() const { return static_cast<Index>(constraints_.size()); }
  Index num_binaries() const;

  const Variable& variable(Index col) const { return variables_.at(static_cast<std::size_t>(col)); }
  Variable& variable(Index col) { return variables_.at(static_cast<std::size_t>(col)); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<double>& objective() const { return objective_; }
  double objective_constant() const { return objective_constant_; }

  /// Column of a registered name; throws RegistryMiss.
  Index col(const std::string& name) const;
  bool has(const std::string& name) const { return registry_.count(name) != 0; }

  double evaluate_objective(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double row_activity(const Constraint& row, const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Throws std::logic_error when an invariant is broken.
  void check() const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<double> objective_;
  double objective_constant_ = 0.0;
  std::unordered_map<std::string, Index> registry_;
};

struct FamilyViolation {
  RowFamily family;
  double worst = 0.0;
  std::string where;
  Index count = 0;
};

struct ViolationReport {
  double tolerance = 1e-6;
  std::vector<FamilyViolation> rows;  // only families with violations
  double worst_bound = 0.0;
  std::string worst_bound_where;
  double worst_integrality = 0.0;

  bool ok() const { return rows.empty() && worst_bound <= tolerance && worst_integrality <= tolerance; }
  const FamilyViolation* find(RowFamily family) const;
};

ViolationReport validate_solution(const MilpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x,
                                  double tolerance = 1e-6);

}  // namespace fcr
