#pragma once
// Independent dispatch-schedule checker used by the unit and acceptance
// suites: re-derives every constraint from the inputs instead of trusting
// the solver's own bookkeeping.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "gridmarket/hems.hpp"
#include "gridmarket/util.hpp"

namespace gridmarket::testing {

// Returns human-readable violations; empty means the schedule is feasible,
// correctly priced, and consistent with the battery model to within tol.
inline std::vector<std::string> check_schedule(
    const DispatchSchedule& s, const BatterySpec& b,
    const std::array<double, kPeriodsPerDay>& load_kwh,
    const std::array<double, kPeriodsPerDay>& pv_kwh,
    const std::array<double, kPeriodsPerDay>& tou_cents, double fit_cents,
    double tol = 1e-9, bool terminal_soc_at_least_init = false) {
  std::vector<std::string> bad;
  auto flag = [&](const char* fmt, int t, double got) {
    bad.push_back(strformat(fmt, t, got));
  };

  if (std::abs(s.soc_kwh[0] - b.soc_init_kwh) > tol) {
    bad.push_back(strformat("soc[0]=%g differs from soc_init=%g",
                            s.soc_kwh[0], b.soc_init_kwh));
  }
  double cost = 0.0;
  for (int t = 0; t < kPeriodsPerDay; ++t) {
    const double c = s.charge_kwh[t], d = s.discharge_kwh[t];
    const double imp = s.grid_import_kwh[t], exp = s.grid_export_kwh[t];
    if (c < -tol) flag("charge[%d]=%g negative", t, c);
    if (d < -tol) flag("discharge[%d]=%g negative", t, d);
    if (imp < -tol) flag("import[%d]=%g negative", t, imp);
    if (exp < -tol) flag("export[%d]=%g negative", t, exp);
    if (c > b.max_charge_kw + tol) flag("charge[%d]=%g above power cap", t, c);
    if (d > b.max_discharge_kw + tol) {
      flag("discharge[%d]=%g above power cap", t, d);
    }
    const double balance = load_kwh[t] + c + exp - pv_kwh[t] - d - imp;
    if (std::abs(balance) > tol) flag("balance[%d] off by %g", t, balance);
    const double next =
        s.soc_kwh[t] + b.efficiency_charge * c - d / b.efficiency_discharge;
    if (std::abs(next - s.soc_kwh[t + 1]) > tol) {
      flag("soc recursion broken at t=%d (err %g)", t, next - s.soc_kwh[t + 1]);
    }
    cost += tou_cents[t] * imp - fit_cents * exp;
  }
  for (int t = 0; t <= kPeriodsPerDay; ++t) {
    if (s.soc_kwh[t] < b.soc_min_kwh - tol) {
      flag("soc[%d]=%g below soc_min", t, s.soc_kwh[t]);
    }
    if (s.soc_kwh[t] > b.soc_max_kwh + tol) {
      flag("soc[%d]=%g above soc_max", t, s.soc_kwh[t]);
    }
  }
  if (terminal_soc_at_least_init &&
      s.soc_kwh[kPeriodsPerDay] < b.soc_init_kwh - tol) {
    bad.push_back(strformat("terminal soc %g below initial %g",
                            s.soc_kwh[kPeriodsPerDay], b.soc_init_kwh));
  }
  const double cost_tol = std::max(1e-6, 1e-9 * std::abs(cost));
  if (std::abs(cost - s.cost_cents) > cost_tol) {
    bad.push_back(strformat("cost mismatch: schedule says %.9f, recomputed %.9f",
                            s.cost_cents, cost));
  }
  return bad;
}

}  // namespace gridmarket::testing
