#pragma once

// Solver-agnostic sparse MIP container.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace fmp {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class VarKind { Binary, Continuous };
enum class Sense { Le, Ge, Eq };

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lb = 0.0;
  double ub = kInf;
};

struct Term {
  int col = 0;
  double coef = 0.0;
  bool operator==(const Term&) const = default;
};

struct Row {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::Le;
  double rhs = 0.0;
};

struct ModelStats {
  long n_vars = 0;
  long n_cons = 0;
  long n_nonzeros = 0;
  long n_binary = 0;
  bool operator==(const ModelStats&) const = default;
};

class MatrixModel {
 public:
  int add_variable(std::string name, VarKind kind, double lb, double ub) {
    if (kind == VarKind::Binary) {
      lb = std::max(lb, 0.0);
      ub = std::min(ub, 1.0);
    }
    const int col = static_cast<int>(vars_.size());
    if (!index_.emplace(name, col).second) throw ModelError("duplicate variable name " + name);
    vars_.push_back({std::move(name), kind, lb, ub});
    return col;
  }

  void add_row(std::string name, std::vector<Term> terms, Sense sense, double rhs) {
    for (const auto& t : terms)
      if (t.col < 0 || t.col >= num_vars()) throw ModelError("row " + name + " references unknown column");
    rows_.push_back({std::move(name), std::move(terms), sense, rhs});
  }

  void set_objective(std::vector<Term> terms) { objective_ = std::move(terms); }

  int column(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
  }

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<Term>& objective() const { return objective_; }
  Variable& variable(int col) { return vars_.at(col); }
  const Variable& variable(int col) const { return vars_.at(col); }

  double objective_value(std::span<const double> x) const {
    double v = 0.0;
    for (const auto& t : objective_) v += t.coef * x[t.col];
    return v;
  }

 private:
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  std::vector<Term> objective_;
  std::unordered_map<std::string, int> index_;
};

inline ModelStats model_stats(const MatrixModel& m) {
  ModelStats s;
  s.n_vars = m.num_vars();
  s.n_cons = m.num_rows();
  for (const auto& r : m.rows()) s.n_nonzeros += static_cast<long>(r.terms.size());
  for (const auto& v : m.variables()) s.n_binary += v.kind == VarKind::Binary;
  return s;
}

inline double row_activity(const Row& r, std::span<const double> x) {
  double a = 0.0;
  for (const auto& t : r.terms) a += t.coef * x[t.col];
  return a;
}

/// Amount by which the row is violated at x (0 when satisfied).
inline double row_violation(const Row& r, std::span<const double> x) {
  const double a = row_activity(r, x);
  switch (r.sense) {
    case Sense::Le: return std::max(0.0, a - r.rhs);
    case Sense::Ge: return std::max(0.0, r.rhs - a);
    case Sense::Eq: return std::abs(a - r.rhs);
  }
  return 0.0;
}

struct PointViolation {
  std::string name;   // row or variable name
  double amount = 0.0;
};

/// Rows, bounds and integrality violated by x beyond tol.
inline std::vector<PointViolation> check_point(const MatrixModel& m, std::span<const double> x, double tol = 1e-6) {
  if (static_cast<int>(x.size()) != m.num_vars()) throw ModelError("point has wrong dimension");
  std::vector<PointViolation> out;
  for (int c = 0; c < m.num_vars(); ++c) {
    const auto& v = m.variable(c);
    if (x[c] < v.lb - tol) out.push_back({v.name, v.lb - x[c]});
    if (x[c] > v.ub + tol) out.push_back({v.name, x[c] - v.ub});
    if (v.kind == VarKind::Binary && std::abs(x[c] - std::round(x[c])) > tol)
      out.push_back({v.name, std::abs(x[c] - std::round(x[c]))});
  }
  for (const auto& r : m.rows()) {
    const double viol = row_violation(r, x);
    if (viol > tol) out.push_back({r.name, viol});
  }
  return out;
}

}  // namespace fmp
