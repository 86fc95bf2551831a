#include "gridmarket/lp.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace gridmarket::lp {

namespace {

constexpr double kTol = 1e-9;

struct Tableau {
  std::size_t rows = 0;
  std::size_t cols = 0;  // includes the rhs column
  std::vector<double> a;
  std::vector<std::size_t> basis;  // basic column per row
  std::vector<double> obj;         // reduced-cost row, obj[cols-1] = -value

  double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c < cols; ++c) at(pr, c) /= p;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < cols; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    const double f = obj[pc];
    if (f != 0.0) {
      for (std::size_t c = 0; c < cols; ++c) obj[c] -= f * at(pr, c);
      obj[pc] = 0.0;
    }
    basis[pr] = pc;
  }

  // Rebuilds the reduced-cost row for the given cost vector (zero-padded
  // beyond its length).
  void set_objective(const std::vector<double>& cost) {
    obj.assign(cols, 0.0);
    for (std::size_t c = 0; c < cost.size(); ++c) obj[c] = cost[c];
    for (std::size_t r = 0; r < rows; ++r) {
      const double cb = basis[r] < cost.size() ? cost[basis[r]] : 0.0;
      if (cb == 0.0) continue;
      for (std::size_t c = 0; c < cols; ++c) obj[c] -= cb * at(r, c);
    }
  }
};

enum class PivotResult { optimal, unbounded, iteration_limit };

// Runs the simplex loop on the tableau. Dantzig pricing with a switch to
// Bland's rule after a burn-in, which rules out cycling.
PivotResult run_simplex(Tableau& t, std::size_t entering_limit,
                        int max_iterations) {
  const std::size_t rhs = t.cols - 1;
  const int bland_after = 2 * static_cast<int>(t.rows + t.cols);
  for (int iter = 0; iter < max_iterations; ++iter) {
    // entering column
    std::size_t pc = rhs;
    if (iter < bland_after) {
      double best = -kTol;
      for (std::size_t c = 0; c < entering_limit; ++c) {
        if (t.obj[c] < best) {
          best = t.obj[c];
          pc = c;
        }
      }
    } else {
      for (std::size_t c = 0; c < entering_limit; ++c) {
        if (t.obj[c] < -kTol) {
          pc = c;
          break;
        }
      }
    }
    if (pc == rhs) return PivotResult::optimal;

    // ratio test; ties broken toward the smallest basis column
    std::size_t pr = t.rows;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < t.rows; ++r) {
      const double arc = t.at(r, pc);
      if (arc <= kTol) continue;
      const double ratio = t.at(r, rhs) / arc;
      if (ratio < best_ratio - kTol ||
          (ratio < best_ratio + kTol &&
           (pr == t.rows || t.basis[r] < t.basis[pr]))) {
        best_ratio = ratio;
        pr = r;
      }
    }
    if (pr == t.rows) return PivotResult::unbounded;
    t.pivot(pr, pc);
  }
  return PivotResult::iteration_limit;
}

}  // namespace

Solution minimize(const std::vector<double>& cost,
                  const std::vector<Constraint>& constraints,
                  int max_iterations) {
  const std::size_t n = cost.size();
  const std::size_t m = constraints.size();
  for (const Constraint& c : constraints) {
    if (c.coeffs.size() != n) {
      throw std::invalid_argument("lp: constraint width does not match cost");
    }
  }

  // Column layout: structural | slack/surplus | artificial | rhs.
  std::size_t n_slack = 0, n_art = 0;
  std::vector<double> rhs_sign(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    Relation rel = constraints[i].rel;
    if (constraints[i].rhs < 0.0) {  // normalize to rhs >= 0
      rhs_sign[i] = -1.0;
      rel = rel == Relation::le ? Relation::ge
            : rel == Relation::ge ? Relation::le
                                  : Relation::eq;
    }
    if (rel != Relation::eq) ++n_slack;
    if (rel != Relation::le) ++n_art;  // ge and eq need an artificial
  }

  Tableau t;
  t.rows = m;
  t.cols = n + n_slack + n_art + 1;
  t.a.assign(t.rows * t.cols, 0.0);
  t.basis.assign(m, 0);

  const std::size_t art_begin = n + n_slack;
  const std::size_t rhs_col = t.cols - 1;
  std::size_t slack_next = n, art_next = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    const Constraint& c = constraints[i];
    const double s = rhs_sign[i];
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = s * c.coeffs[j];
    t.at(i, rhs_col) = s * c.rhs;
    Relation rel = c.rel;
    if (s < 0.0) {
      rel = rel == Relation::le ? Relation::ge
            : rel == Relation::ge ? Relation::le
                                  : Relation::eq;
    }
    switch (rel) {
      case Relation::le:
        t.at(i, slack_next) = 1.0;
        t.basis[i] = slack_next++;
        break;
      case Relation::ge:
        t.at(i, slack_next) = -1.0;
        ++slack_next;
        t.at(i, art_next) = 1.0;
        t.basis[i] = art_next++;
        break;
      case Relation::eq:
        t.at(i, art_next) = 1.0;
        t.basis[i] = art_next++;
        break;
    }
  }

  Solution sol;

  // Phase 1: minimize the sum of artificials.
  if (n_art > 0) {
    std::vector<double> phase1(art_begin + n_art, 0.0);
    for (std::size_t c = art_begin; c < art_begin + n_art; ++c) phase1[c] = 1.0;
    t.set_objective(phase1);
    const PivotResult r = run_simplex(t, art_begin, max_iterations);
    if (r == PivotResult::iteration_limit) {
      sol.status = Status::iteration_limit;
      return sol;
    }
    // r == unbounded cannot happen: the phase-1 objective is bounded by 0.
    if (-t.obj[rhs_col] > 1e-7) {
      sol.status = Status::infeasible;
      return sol;
    }
    // Pivot any artificial still in the basis out on a usable column;
    // rows with no such column are redundant and stay put at zero.
    for (std::size_t r2 = 0; r2 < t.rows; ++r2) {
      if (t.basis[r2] < art_begin) continue;
      for (std::size_t c = 0; c < art_begin; ++c) {
        if (std::fabs(t.at(r2, c)) > kTol) {
          t.pivot(r2, c);
          break;
        }
      }
    }
  }

  // Phase 2: the real objective; artificial columns never re-enter.
  t.set_objective(cost);
  switch (run_simplex(t, art_begin, max_iterations)) {
    case PivotResult::optimal:
      sol.status = Status::optimal;
      break;
    case PivotResult::unbounded:
      sol.status = Status::unbounded;
      return sol;
    case PivotResult::iteration_limit:
      sol.status = Status::iteration_limit;
      return sol;
  }

  sol.x.assign(n, 0.0);
  for (std::size_t r = 0; r < t.rows; ++r) {
    if (t.basis[r] < n) sol.x[t.basis[r]] = t.at(r, rhs_col);
  }
  for (double& v : sol.x) {
    if (v < 0.0 && v > -1e-9) v = 0.0;  // scrub ratio-test noise
  }
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += cost[j] * sol.x[j];
  return sol;
}

}  // namespace gridmarket::lp
