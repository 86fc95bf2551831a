#include "gridmarket/hems.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gridmarket/lp.hpp"
#include "gridmarket/util.hpp"

namespace gridmarket {

BatterySpec BatterySpec::from_capacity(double capacity_kwh) {
  BatterySpec spec;
  spec.capacity_kwh = capacity_kwh;
  spec.soc_max_kwh = capacity_kwh;
  spec.soc_min_kwh = 0.0;
  spec.soc_init_kwh = 0.5 * capacity_kwh;
  return spec;
}

void BatterySpec::validate() const {
  const bool ordered = 0.0 <= soc_min_kwh && soc_min_kwh <= soc_init_kwh &&
                       soc_init_kwh <= soc_max_kwh && soc_max_kwh <= capacity_kwh;
  if (!ordered) {
    throw std::invalid_argument(
        "battery: need 0 <= soc_min <= soc_init <= soc_max <= capacity");
  }
  if (efficiency_charge <= 0.0 || efficiency_charge > 1.0 ||
      efficiency_discharge <= 0.0 || efficiency_discharge > 1.0) {
    throw std::invalid_argument("battery: efficiencies must be in (0, 1]");
  }
  if (max_charge_kw < 0.0 || max_discharge_kw < 0.0) {
    throw std::invalid_argument("battery: power limits must be non-negative");
  }
}

double retail_baseline_cost_cents(const std::array<double, kPeriodsPerDay>& load_kwh,
                                  const std::array<double, kPeriodsPerDay>& pv_kwh,
                                  const std::array<double, kPeriodsPerDay>& tou_cents,
                                  double fit_cents) {
  double cost = 0.0;
  for (int t = 0; t < kPeriodsPerDay; ++t) {
    const double net = load_kwh[t] - pv_kwh[t];
    if (net > 0.0) {
      cost += tou_cents[t] * net;
    } else {
      cost -= fit_cents * -net;
    }
  }
  return cost;
}

namespace {

void check_inputs(const BatterySpec& battery,
                  const std::array<double, kPeriodsPerDay>& load_kwh,
                  const std::array<double, kPeriodsPerDay>& pv_kwh,
                  const std::array<double, kPeriodsPerDay>& tou_cents,
                  double fit_cents) {
  battery.validate();
  for (int t = 0; t < kPeriodsPerDay; ++t) {
    if (load_kwh[t] < 0.0 || pv_kwh[t] < 0.0) {
      throw std::invalid_argument(
          strformat("hems: negative forecast in period %d", t));
    }
    if (fit_cents >= tou_cents[t]) {
      throw std::invalid_argument(strformat(
          "hems: FiT (%.4f c) must stay below the ToU rate (%.4f c) in "
          "period %d",
          fit_cents, tou_cents[t], t));
    }
  }
}

}  // namespace

DispatchSchedule solve_schedule(const BatterySpec& battery,
                                const std::array<double, kPeriodsPerDay>& load_kwh,
                                const std::array<double, kPeriodsPerDay>& pv_kwh,
                                const std::array<double, kPeriodsPerDay>& tou_cents,
                                double fit_cents,
                                const HemsOptions& options) {
  check_inputs(battery, load_kwh, pv_kwh, tou_cents, fit_cents);

  // Variables per period: charge, discharge, import, export (all kWh >= 0).
  constexpr int kVarsPerPeriod = 4;
  const int n = kPeriodsPerDay * kVarsPerPeriod;
  const auto charge_ix = [](int t) { return kVarsPerPeriod * t + 0; };
  const auto discharge_ix = [](int t) { return kVarsPerPeriod * t + 1; };
  const auto import_ix = [](int t) { return kVarsPerPeriod * t + 2; };
  const auto export_ix = [](int t) { return kVarsPerPeriod * t + 3; };

  std::vector<double> cost(n, 0.0);
  for (int t = 0; t < kPeriodsPerDay; ++t) {
    cost[import_ix(t)] = tou_cents[t];
    cost[export_ix(t)] = -fit_cents;
  }

  std::vector<lp::Constraint> rows;
  rows.reserve(5 * kPeriodsPerDay + 1);

  // Energy balance: charge + export - discharge - import = pv - load.
  for (int t = 0; t < kPeriodsPerDay; ++t) {
    lp::Constraint c;
    c.coeffs.assign(n, 0.0);
    c.coeffs[charge_ix(t)] = 1.0;
    c.coeffs[export_ix(t)] = 1.0;
    c.coeffs[discharge_ix(t)] = -1.0;
    c.coeffs[import_ix(t)] = -1.0;
    c.rel = lp::Relation::eq;
    c.rhs = pv_kwh[t] - load_kwh[t];
    rows.push_back(std::move(c));
  }

  // State of charge stays inside [soc_min, soc_max] after every period,
  // expressed on cumulative sums so SOC needs no variables of its own.
  const double eta_c = battery.efficiency_charge;
  const double eta_d = battery.efficiency_discharge;
  for (int t = 0; t < kPeriodsPerDay; ++t) {
    lp::Constraint hi, lo;
    hi.coeffs.assign(n, 0.0);
    lo.coeffs.assign(n, 0.0);
    for (int k = 0; k <= t; ++k) {
      hi.coeffs[charge_ix(k)] = eta_c;
      hi.coeffs[discharge_ix(k)] = -1.0 / eta_d;
      lo.coeffs[charge_ix(k)] = eta_c;
      lo.coeffs[discharge_ix(k)] = -1.0 / eta_d;
    }
    hi.rel = lp::Relation::le;
    hi.rhs = battery.soc_max_kwh - battery.soc_init_kwh;
    lo.rel = lp::Relation::ge;
    lo.rhs = battery.soc_min_kwh - battery.soc_init_kwh;
    rows.push_back(std::move(hi));
    rows.push_back(std::move(lo));
  }

  // Hourly periods: power limits map one-to-one onto kWh caps.
  for (int t = 0; t < kPeriodsPerDay; ++t) {
    lp::Constraint cc, dc;
    cc.coeffs.assign(n, 0.0);
    cc.coeffs[charge_ix(t)] = 1.0;
    cc.rel = lp::Relation::le;
    cc.rhs = battery.max_charge_kw;
    dc.coeffs.assign(n, 0.0);
    dc.coeffs[discharge_ix(t)] = 1.0;
    dc.rel = lp::Relation::le;
    dc.rhs = battery.max_discharge_kw;
    rows.push_back(std::move(cc));
    rows.push_back(std::move(dc));
  }

  if (options.terminal_soc_at_least_init) {
    lp::Constraint c;
    c.coeffs.assign(n, 0.0);
    for (int k = 0; k < kPeriodsPerDay; ++k) {
      c.coeffs[charge_ix(k)] = eta_c;
      c.coeffs[discharge_ix(k)] = -1.0 / eta_d;
    }
    c.rel = lp::Relation::ge;
    c.rhs = 0.0;
    rows.push_back(std::move(c));
  }

  const lp::Solution sol = lp::minimize(cost, rows);
  if (sol.status != lp::Status::optimal) {
    // With valid inputs the all-grid schedule is feasible, so this signals
    // a precondition violation that slipped through or solver trouble.
    const char* what = sol.status == lp::Status::infeasible ? "infeasible"
                       : sol.status == lp::Status::unbounded ? "unbounded"
                                                             : "iteration limit";
    throw std::runtime_error(strformat("hems: dispatch LP %s", what));
  }

  DispatchSchedule schedule;
  schedule.soc_kwh[0] = battery.soc_init_kwh;
  for (int t = 0; t < kPeriodsPerDay; ++t) {
    schedule.charge_kwh[t] = sol.x[charge_ix(t)];
    schedule.discharge_kwh[t] = sol.x[discharge_ix(t)];
    schedule.grid_import_kwh[t] = sol.x[import_ix(t)];
    schedule.grid_export_kwh[t] = sol.x[export_ix(t)];
    schedule.soc_kwh[t + 1] = schedule.soc_kwh[t] +
                              eta_c * schedule.charge_kwh[t] -
                              schedule.discharge_kwh[t] / eta_d;
  }
  schedule.cost_cents = sol.objective;
  return schedule;
}

std::array<double, kPeriodsPerDay> surplus_deficit(const DispatchSchedule& schedule) {
  std::array<double, kPeriodsPerDay> out{};
  for (int t = 0; t < kPeriodsPerDay; ++t) {
    out[t] = schedule.grid_export_kwh[t] - schedule.grid_import_kwh[t];
  }
  return out;
}

}  // namespace gridmarket
