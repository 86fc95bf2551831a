#pragma once

#include <array>
#include <string>
#include <vector>

#include "gridmarket/hems.hpp"
#include "gridmarket/order_book.hpp"
#include "gridmarket/units.hpp"

namespace gridmarket {

struct Tariff {
  std::array<PriceCc, kPeriodsPerDay> tou{};  // c/kWh in price units, per hour
  PriceCc fit = 0;                            // flat feed-in rate

  void validate() const;  // fit < min(tou), all rates > 0
};

// Synthetic retail offer: peak 49.24 c 14:00-20:00, shoulder 20.9 c
// 07:00-14:00 and 20:00-22:00, off-peak 15.1 c overnight; FiT 6.1 c.
Tariff default_tariff();

struct HouseholdPeriodEntry {
  EnergyWh p2p_bought = 0;
  EnergyWh p2p_sold = 0;
  EnergyWh retail_bought = 0;  // shortfall covered at ToU
  EnergyWh fit_sold = 0;       // surplus exported at FiT
  Cash cash_flow = 0;          // signed, household perspective
};

struct SettlementLedger {
  std::vector<int> households;  // ids in reporting order
  std::vector<std::array<HouseholdPeriodEntry, kPeriodsPerDay>> entries;
  std::vector<Cash> buyer_value;   // vs buying the same energy at ToU
  std::vector<Cash> seller_value;  // vs exporting the same energy at FiT
  Cash retailer_cash = 0;          // counterparty of all non-P2P flows

  SettlementLedger() = default;
  explicit SettlementLedger(std::vector<int> household_ids);
  int index_of(int household) const;  // throws on unknown id
  HouseholdPeriodEntry& at(int household, int period);
  const HouseholdPeriodEntry& at(int household, int period) const;
  Cash household_cash(int household) const;
};

// Energy left over after the market: positive = surplus sold at FiT,
// negative = shortfall bought at ToU.
struct Residual {
  int household = 0;
  EnergyWh net_wh = 0;
};

void settle_period(SettlementLedger& ledger, const std::vector<Trade>& trades,
                   const std::vector<Residual>& residuals, const Tariff& tariff,
                   int period);

struct DispatchRecord {
  int seller = 0;
  int period = 0;
  EnergyWh traded_wh = 0;
  EnergyWh dispatched_wh = 0;  // >= 0
};

// Under-delivery buys the shortfall back at ToU, over-delivery settles at
// FiT. Returns the signed cash adjustment applied to the seller.
Cash reconcile_dispatch(SettlementLedger& ledger, const DispatchRecord& record,
                        const Tariff& tariff);

struct ValueSummary {
  Cash buyer_value = 0;
  Cash seller_value = 0;
  Cash total_value = 0;
  std::vector<std::pair<int, Cash>> per_household;  // id, buyer+seller value
  double buyer_share_pct = 0.0;   // 0 when total_value == 0
  double seller_share_pct = 0.0;
};

ValueSummary summarize_value(const SettlementLedger& ledger);

// Fixed-format report: daily value, x365 annual projection (a projection,
// not a forecast), per-household average, and capture shares.
std::string format_summary(const SettlementLedger& ledger);

std::string ledger_csv(const SettlementLedger& ledger);

}  // namespace gridmarket
