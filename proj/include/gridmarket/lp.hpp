#pragma once
// Small dense linear-program solver: two-phase primal simplex on an
// explicit tableau. Sized for day-ahead dispatch problems (hundreds of
// variables), not for anything big.

#include <vector>

namespace gridmarket::lp {

enum class Relation { le, ge, eq };

struct Constraint {
  std::vector<double> coeffs;  // one per structural variable
  Relation rel = Relation::le;
  double rhs = 0.0;
};

enum class Status { optimal, infeasible, unbounded, iteration_limit };

struct Solution {
  Status status = Status::iteration_limit;
  std::vector<double> x;    // structural variables, all >= 0
  double objective = 0.0;   // cost . x
};

// Minimizes cost . x subject to the constraints and x >= 0.
Solution minimize(const std::vector<double>& cost,
                  const std::vector<Constraint>& constraints,
                  int max_iterations = 20000);

}  // namespace gridmarket::lp
