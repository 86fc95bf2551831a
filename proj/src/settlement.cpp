#include "gridmarket/settlement.hpp"

#include <algorithm>
#include <stdexcept>

#include "gridmarket/util.hpp"

namespace gridmarket {

void Tariff::validate() const {
  if (fit <= 0) {
    throw std::invalid_argument("tariff: FiT must be positive");
  }
  for (int t = 0; t < kPeriodsPerDay; ++t) {
    if (tou[t] <= 0) {
      throw std::invalid_argument(strformat("tariff: ToU rate for period %d "
                                            "must be positive", t));
    }
    if (fit >= tou[t]) {
      throw std::invalid_argument(strformat(
          "tariff: FiT must stay below every ToU rate (period %d violates)", t));
    }
  }
}

Tariff default_tariff() {
  Tariff tariff;
  const PriceCc off_peak = price_from_cents(15.1);
  const PriceCc shoulder = price_from_cents(20.9);
  const PriceCc peak = price_from_cents(49.24);
  for (int t = 0; t < kPeriodsPerDay; ++t) {
    if (t >= 14 && t < 20) {
      tariff.tou[t] = peak;
    } else if ((t >= 7 && t < 14) || t == 20 || t == 21) {
      tariff.tou[t] = shoulder;
    } else {
      tariff.tou[t] = off_peak;
    }
  }
  tariff.fit = price_from_cents(6.1);
  return tariff;
}

SettlementLedger::SettlementLedger(std::vector<int> household_ids)
    : households(std::move(household_ids)),
      entries(households.size()),
      buyer_value(households.size(), 0),
      seller_value(households.size(), 0) {}

int SettlementLedger::index_of(int household) const {
  const auto it = std::find(households.begin(), households.end(), household);
  if (it == households.end()) {
    throw std::invalid_argument(
        strformat("ledger: unknown household %d", household));
  }
  return static_cast<int>(it - households.begin());
}

HouseholdPeriodEntry& SettlementLedger::at(int household, int period) {
  if (period < 0 || period >= kPeriodsPerDay) {
    throw std::invalid_argument(strformat("ledger: bad period %d", period));
  }
  return entries[index_of(household)][period];
}

const HouseholdPeriodEntry& SettlementLedger::at(int household, int period) const {
  if (period < 0 || period >= kPeriodsPerDay) {
    throw std::invalid_argument(strformat("ledger: bad period %d", period));
  }
  return entries[index_of(household)][period];
}

Cash SettlementLedger::household_cash(int household) const {
  Cash total = 0;
  for (const HouseholdPeriodEntry& e : entries[index_of(household)]) {
    total += e.cash_flow;
  }
  return total;
}

void settle_period(SettlementLedger& ledger, const std::vector<Trade>& trades,
                   const std::vector<Residual>& residuals, const Tariff& tariff,
                   int period) {
  tariff.validate();
  if (period < 0 || period >= kPeriodsPerDay) {
    throw std::invalid_argument(strformat("settle: bad period %d", period));
  }
  const PriceCc tou = tariff.tou[period];

  for (const Trade& trade : trades) {
    if (trade.quantity <= 0) {
      throw std::invalid_argument("settle: trade quantity must be positive");
    }
    if (trade.price < 0) {
      throw std::invalid_argument("settle: negative trade price");
    }
    const Cash cash = cash_value(trade.price, trade.quantity);
    const int b = ledger.index_of(trade.buyer);
    const int s = ledger.index_of(trade.seller);
    HouseholdPeriodEntry& be = ledger.entries[b][period];
    HouseholdPeriodEntry& se = ledger.entries[s][period];
    be.p2p_bought += trade.quantity;
    be.cash_flow -= cash;
    se.p2p_sold += trade.quantity;
    se.cash_flow += cash;
    ledger.buyer_value[b] += cash_value(tou - trade.price, trade.quantity);
    ledger.seller_value[s] += cash_value(trade.price - tariff.fit, trade.quantity);
  }

  std::vector<char> seen(ledger.households.size(), 0);
  for (const Residual& residual : residuals) {
    const int ix = ledger.index_of(residual.household);
    if (seen[ix]) {
      throw std::invalid_argument(strformat(
          "settle: household %d listed twice in residuals", residual.household));
    }
    seen[ix] = 1;
    HouseholdPeriodEntry& e = ledger.entries[ix][period];
    if (residual.net_wh > 0) {
      const Cash cash = cash_value(tariff.fit, residual.net_wh);
      e.fit_sold += residual.net_wh;
      e.cash_flow += cash;
      ledger.retailer_cash -= cash;
    } else if (residual.net_wh < 0) {
      const EnergyWh shortfall = -residual.net_wh;
      const Cash cash = cash_value(tou, shortfall);
      e.retail_bought += shortfall;
      e.cash_flow -= cash;
      ledger.retailer_cash += cash;
    }
  }
}

Cash reconcile_dispatch(SettlementLedger& ledger, const DispatchRecord& record,
                        const Tariff& tariff) {
  if (record.dispatched_wh < 0) {
    throw std::invalid_argument("reconcile: dispatched energy must be >= 0");
  }
  if (record.period < 0 || record.period >= kPeriodsPerDay) {
    throw std::invalid_argument(strformat("reconcile: bad period %d", record.period));
  }
  const EnergyWh mismatch = record.dispatched_wh - record.traded_wh;
  if (mismatch == 0) return 0;

  // Short sellers buy the gap back at retail; surplus settles at FiT.
  const PriceCc rate = mismatch < 0 ? tariff.tou[record.period] : tariff.fit;
  const Cash adjustment = cash_value(rate, mismatch);
  ledger.at(record.seller, record.period).cash_flow += adjustment;
  ledger.retailer_cash -= adjustment;
  return adjustment;
}

ValueSummary summarize_value(const SettlementLedger& ledger) {
  ValueSummary summary;
  for (std::size_t i = 0; i < ledger.households.size(); ++i) {
    summary.buyer_value += ledger.buyer_value[i];
    summary.seller_value += ledger.seller_value[i];
    summary.per_household.push_back(
        {ledger.households[i], ledger.buyer_value[i] + ledger.seller_value[i]});
  }
  summary.total_value = summary.buyer_value + summary.seller_value;
  if (summary.total_value != 0) {
    const double total = static_cast<double>(summary.total_value);
    summary.buyer_share_pct = 100.0 * static_cast<double>(summary.buyer_value) / total;
    summary.seller_share_pct = 100.0 * static_cast<double>(summary.seller_value) / total;
  }
  return summary;
}

std::string format_summary(const SettlementLedger& ledger) {
  const ValueSummary s = summarize_value(ledger);
  const double n = std::max<std::size_t>(ledger.households.size(), 1);
  const double buyers = cash_dollars(s.buyer_value);
  const double sellers = cash_dollars(s.seller_value);
  const double total = cash_dollars(s.total_value);

  std::string out;
  out += "Value captured vs pure-retail baseline\n";
  out += strformat("%-28s %10s %10s %10s\n", "", "Buyers", "Sellers", "Total");
  out += strformat("%-28s %10.2f %10.2f %10.2f\n", "Daily value ($)", buyers,
                   sellers, total);
  out += strformat("%-28s %10.2f %10.2f %10.2f\n",
                   "Annual projection ($, x365)", buyers * 365.0,
                   sellers * 365.0, total * 365.0);
  out += strformat("%-28s %10.2f %10.2f %10.2f\n", "Per household ($/day)",
                   buyers / n, sellers / n, total / n);
  out += strformat("%-28s %10.2f %10.2f %10.2f\n", "Share of value (%)",
                   s.buyer_share_pct, s.seller_share_pct,
                   s.total_value == 0 ? 0.0 : 100.0);
  out += "\nPer-household value ($/day):\n";
  for (const auto& [id, value] : s.per_household) {
    out += strformat("  H%-3d %10.4f\n", id, cash_dollars(value));
  }
  return out;
}

std::string ledger_csv(const SettlementLedger& ledger) {
  std::string out =
      "household,period,p2p_bought_kwh,p2p_sold_kwh,retail_bought_kwh,"
      "fit_sold_kwh,cash_flow_c\n";
  for (std::size_t i = 0; i < ledger.households.size(); ++i) {
    for (int t = 0; t < kPeriodsPerDay; ++t) {
      const HouseholdPeriodEntry& e = ledger.entries[i][t];
      out += strformat("%d,%d,%.3f,%.3f,%.3f,%.3f,%.5f\n", ledger.households[i],
                       t, energy_kwh(e.p2p_bought), energy_kwh(e.p2p_sold),
                       energy_kwh(e.retail_bought), energy_kwh(e.fit_sold),
                       cash_cents(e.cash_flow));
    }
  }
  return out;
}

}  // namespace gridmarket
