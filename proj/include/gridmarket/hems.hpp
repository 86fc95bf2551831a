#pragma once
// Household battery scheduling: a 24-period linear program that minimizes
// the retail bill (ToU import cost minus FiT export revenue) under battery
// energy and power limits. Trading income is deliberately not part of the
// objective.

#include <array>
#include <stdexcept>

namespace gridmarket {

constexpr int kPeriodsPerDay = 24;

struct BatterySpec {
  double capacity_kwh = 0.0;
  double max_charge_kw = 5.0;
  double max_discharge_kw = 5.0;
  double efficiency_charge = 0.95;
  double efficiency_discharge = 0.95;
  double soc_init_kwh = 0.0;
  double soc_min_kwh = 0.0;
  double soc_max_kwh = 0.0;

  // Default sizing used for the simulated households: half-full at start,
  // usable range the full capacity.
  static BatterySpec from_capacity(double capacity_kwh);
  void validate() const;
};

struct DispatchSchedule {
  std::array<double, kPeriodsPerDay> charge_kwh{};
  std::array<double, kPeriodsPerDay> discharge_kwh{};
  std::array<double, kPeriodsPerDay> grid_import_kwh{};
  std::array<double, kPeriodsPerDay> grid_export_kwh{};
  // soc_kwh[0] is the initial state; soc_kwh[t+1] the state after period t.
  std::array<double, kPeriodsPerDay + 1> soc_kwh{};
  double cost_cents = 0.0;
};

struct HemsOptions {
  bool terminal_soc_at_least_init = false;
};

// Retail cost of serving the forecasts with no battery at all; the
// schedule optimum can never exceed it.
double retail_baseline_cost_cents(const std::array<double, kPeriodsPerDay>& load_kwh,
                                  const std::array<double, kPeriodsPerDay>& pv_kwh,
                                  const std::array<double, kPeriodsPerDay>& tou_cents,
                                  double fit_cents);

// Solves the dispatch LP. Requires fit < min(tou) and non-negative
// forecasts; throws std::invalid_argument otherwise (the all-grid schedule
// is always feasible once the preconditions hold).
DispatchSchedule solve_schedule(const BatterySpec& battery,
                                const std::array<double, kPeriodsPerDay>& load_kwh,
                                const std::array<double, kPeriodsPerDay>& pv_kwh,
                                const std::array<double, kPeriodsPerDay>& tou_cents,
                                double fit_cents,
                                const HemsOptions& options = {});

// Signed tradable energy per period: positive = surplus offered for sale
// (grid export), negative = shortfall to procure (grid import). At an LP
// optimum at most one of the two is nonzero in any period.
std::array<double, kPeriodsPerDay> surplus_deficit(const DispatchSchedule& schedule);

}  // namespace gridmarket
