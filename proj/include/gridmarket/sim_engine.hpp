#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gridmarket/feeder.hpp"
#include "gridmarket/hems.hpp"
#include "gridmarket/order_book.hpp"
#include "gridmarket/profiles.hpp"
#include "gridmarket/scenario.hpp"
#include "gridmarket/settlement.hpp"

namespace gridmarket {

// Book state captured after each market event (the Fig-style price traces).
struct QuoteSnapshot {
  int period = 0;
  int event = 0;  // 1-based within the period
  std::optional<PriceCc> best_bid;
  std::optional<PriceCc> best_ask;
  std::optional<PriceCc> last_trade;  // most recent trade this period
};

struct MismatchOutcome {
  int seller = 0;
  int period = 0;
  EnergyWh traded_wh = 0;
  EnergyWh dispatched_wh = 0;
  Cash adjustment = 0;
};

struct DayResult {
  std::vector<int> households;  // roster order; indexes position_wh
  std::vector<Trade> trades;
  SettlementLedger ledger;
  std::vector<PowerFlowResult> powerflow;                   // one per period
  std::vector<std::pair<int, DispatchSchedule>> schedules;  // HEMS households
  std::vector<QuoteSnapshot> quotes;
  // Signed pre-market position per household and period: positive energy is
  // offered for sale, negative must be bought.
  std::vector<std::array<EnergyWh, kPeriodsPerDay>> position_wh;
  std::vector<MismatchOutcome> mismatches;
};

// Simulates one day: HEMS dispatch, 24 hourly double-auction sessions with
// the configured event budget, retail settlement of residuals, optional
// dispatch mismatch, and a power-flow snapshot per period. Fully
// deterministic for a given (config, profiles).
DayResult run_day(const ScenarioConfig& config,
                  const std::vector<ScaledProfile>& profiles);

// Loads (or synthesizes, when no path is configured) and scales profiles
// before running.
DayResult run_day(const ScenarioConfig& config);

// trades.csv, ledger.csv, quotes.csv, powerflow.csv, schedules.csv,
// summary.txt. Deterministic bytes: same result, same files.
void write_outputs(const DayResult& result, const std::string& out_dir);

}  // namespace gridmarket
