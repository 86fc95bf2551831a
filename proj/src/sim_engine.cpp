#include "gridmarket/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "gridmarket/rng.hpp"
#include "gridmarket/util.hpp"
#include "gridmarket/zip_trader.hpp"

namespace gridmarket {

namespace {

const ScaledProfile& profile_for(const std::vector<ScaledProfile>& profiles,
                                 int household) {
  const auto it =
      std::find_if(profiles.begin(), profiles.end(),
                   [&](const ScaledProfile& p) { return p.household == household; });
  if (it == profiles.end()) {
    throw std::invalid_argument(
        strformat("run_day: no profile for household %d", household));
  }
  return *it;
}

}  // namespace

DayResult run_day(const ScenarioConfig& config,
                  const std::vector<ScaledProfile>& profiles) {
  config.validate();
  const int n = static_cast<int>(config.households.size());

  DayResult result;
  for (const HouseholdConfig& h : config.households) {
    result.households.push_back(h.id);
  }
  result.ledger = SettlementLedger(result.households);
  result.position_wh.assign(n, {});

  // Pre-market plan: HEMS households follow their optimized schedule, the
  // rest trade their raw PV-minus-load position.
  std::array<double, kPeriodsPerDay> tou_cents;
  for (int t = 0; t < kPeriodsPerDay; ++t) {
    tou_cents[t] = price_cents(config.tariff.tou[t]);
  }
  const double fit_cents = price_cents(config.tariff.fit);
  for (int i = 0; i < n; ++i) {
    const HouseholdConfig& h = config.households[i];
    const ScaledProfile& profile = profile_for(profiles, h.id);
    if (h.hems) {
      const BatterySpec battery =
          h.battery ? *h.battery : BatterySpec::from_capacity(0.0);
      DispatchSchedule schedule;
      try {
        schedule = solve_schedule(battery, profile.load_kwh, profile.pv_kwh,
                                  tou_cents, fit_cents);
      } catch (const std::exception& err) {
        throw std::runtime_error(strformat(
            "run_day: household %d dispatch failed: %s", h.id, err.what()));
      }
      const auto net = surplus_deficit(schedule);
      for (int t = 0; t < kPeriodsPerDay; ++t) {
        result.position_wh[i][t] = energy_from_kwh(net[t]);
      }
      result.schedules.push_back({h.id, schedule});
    } else {
      for (int t = 0; t < kPeriodsPerDay; ++t) {
        result.position_wh[i][t] =
            energy_from_kwh(profile.pv_kwh[t] - profile.load_kwh[t]);
      }
    }
  }

  std::vector<ZipTrader> traders;
  traders.reserve(n);
  for (const HouseholdConfig& h : config.households) {
    traders.emplace_back(h.id, config.zip,
                         derive_seed(config.seed, seed_tag::kAgent, h.id));
  }
  std::mt19937_64 engine_rng(derive_seed(config.seed, seed_tag::kEngine));
  std::mt19937_64 mismatch_rng(derive_seed(config.seed, seed_tag::kMismatch));

  for (int t = 0; t < kPeriodsPerDay; ++t) {
    std::vector<EnergyWh> residual(n, 0);
    for (int i = 0; i < n; ++i) {
      const EnergyWh position = result.position_wh[i][t];
      const Role role = position > 0   ? Role::seller
                        : position < 0 ? Role::buyer
                                       : Role::inactive;
      traders[i].set_limits(config.tariff.tou[t], config.tariff.fit, role);
      residual[i] = std::abs(position);
    }

    OrderBook book(t);
    std::vector<Trade> period_trades;
    std::optional<PriceCc> last_trade;
    for (int event = 1; event <= config.events_per_period; ++event) {
      std::vector<int> eligible;
      for (int i = 0; i < n; ++i) {
        if (traders[i].role() != Role::inactive && residual[i] > 0) {
          eligible.push_back(i);
        }
      }
      if (eligible.empty()) break;

      const int who = eligible[uniform_index(engine_rng, eligible.size())];
      const auto request = traders[who].make_order(residual[who]);
      const std::vector<Trade> fills = book.submit(
          traders[who].id(), request->side, request->price, request->quantity);

      std::vector<MarketEvent> events;
      if (fills.empty()) {
        events.push_back({request->side, request->price, false});
      } else {
        for (const Trade& fill : fills) {
          residual[result.ledger.index_of(fill.buyer)] -= fill.quantity;
          residual[result.ledger.index_of(fill.seller)] -= fill.quantity;
          period_trades.push_back(fill);
          result.trades.push_back(fill);
          last_trade = fill.price;
          events.push_back({request->side, fill.price, true});
        }
      }
      // Only traders still in the market (unfilled residual) keep adapting;
      // a trader that has traded out this period freezes until re-entry.
      for (const MarketEvent& ev : events) {
        for (int i = 0; i < n; ++i) {
          if (traders[i].role() != Role::inactive && residual[i] > 0) {
            traders[i].observe(ev);
          }
        }
      }
      result.quotes.push_back(
          {t, event, book.best_bid(), book.best_ask(), last_trade});
    }
    book.close_period();

    std::vector<Residual> residuals;
    for (int i = 0; i < n; ++i) {
      const EnergyWh signed_net =
          result.position_wh[i][t] >= 0 ? residual[i] : -residual[i];
      residuals.push_back({config.households[i].id, signed_net});
    }
    settle_period(result.ledger, period_trades, residuals, config.tariff, t);

    // Dispatch error draws happen in roster order so runs stay repeatable.
    std::vector<EnergyWh> dispatch_delta(n, 0);
    if (config.mismatch.enabled) {
      for (int i = 0; i < n; ++i) {
        const EnergyWh traded =
            result.ledger.entries[i][t].p2p_sold;
        if (traded <= 0) continue;
        const double err = std::clamp(
            normal(mismatch_rng, 0.0, config.mismatch.sigma), -0.1, 0.1);
        const EnergyWh dispatched = std::max<EnergyWh>(
            0, std::llround(static_cast<double>(traded) * (1.0 + err)));
        DispatchRecord record{config.households[i].id, t, traded, dispatched};
        const Cash adjustment =
            reconcile_dispatch(result.ledger, record, config.tariff);
        dispatch_delta[i] = dispatched - traded;
        result.mismatches.push_back(
            {record.seller, t, traded, dispatched, adjustment});
      }
    }

    // Hourly periods: settled watt-hours map one-to-one to average watts.
    std::vector<PowerInjection> injections;
    for (int i = 0; i < n; ++i) {
      const HouseholdPeriodEntry& e = result.ledger.entries[i][t];
      const EnergyWh net_wh = (e.p2p_bought + e.retail_bought) -
                              (e.p2p_sold + e.fit_sold) - dispatch_delta[i];
      injections.push_back(
          {config.households[i].id, static_cast<double>(net_wh), 0.0});
    }
    PowerFlowResult flow = solve_powerflow(config.feeder, injections);
    if (!flow.converged) {
      throw std::runtime_error(strformat(
          "run_day: period %d: power flow did not converge within %d "
          "iterations",
          t, flow.iterations));
    }
    result.powerflow.push_back(std::move(flow));
  }
  return result;
}

DayResult run_day(const ScenarioConfig& config) {
  config.validate();
  std::vector<int> ids;
  std::vector<int> pv_less;
  std::vector<std::pair<int, double>> capacities;
  for (const HouseholdConfig& h : config.households) {
    ids.push_back(h.id);
    if (h.pv_kw == 0.0) pv_less.push_back(h.id);
    capacities.push_back({h.id, h.pv_kw});
  }
  const ProfileSet raw =
      config.profiles_path.empty()
          ? generate_synthetic_profiles(config.seed, ids, pv_less)
          : load_profiles_file(config.profiles_path);
  return run_day(config, scale_profiles(raw, capacities));
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << content;
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

std::string optional_price_cell(const std::optional<PriceCc>& price) {
  return price ? strformat("%.2f", price_cents(*price)) : std::string();
}

}  // namespace

void write_outputs(const DayResult& result, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);

  std::string trades = "period,time,buyer,seller,price_c_per_kwh,qty_kwh\n";
  for (const Trade& trade : result.trades) {
    trades += strformat("%d,%llu,%d,%d,%.2f,%.3f\n", trade.period,
                        static_cast<unsigned long long>(trade.time), trade.buyer,
                        trade.seller, price_cents(trade.price),
                        energy_kwh(trade.quantity));
  }
  write_file(dir / "trades.csv", trades);

  write_file(dir / "ledger.csv", ledger_csv(result.ledger));

  std::string quotes = "period,event,best_bid_c,best_ask_c,last_trade_c\n";
  for (const QuoteSnapshot& q : result.quotes) {
    quotes += strformat("%d,%d,%s,%s,%s\n", q.period, q.event,
                        optional_price_cell(q.best_bid).c_str(),
                        optional_price_cell(q.best_ask).c_str(),
                        optional_price_cell(q.last_trade).c_str());
  }
  write_file(dir / "quotes.csv", quotes);

  std::string flow = "period,bus,phase,voltage_v,angle_deg,feeder_loss_w\n";
  for (std::size_t t = 0; t < result.powerflow.size(); ++t) {
    const PowerFlowResult& pf = result.powerflow[t];
    const double loss = pf.converged ? pf.losses_w() : -1.0;
    for (std::size_t bus = 0; bus < pf.bus_voltage.size(); ++bus) {
      for (int p = 0; p < 3; ++p) {
        const auto v = pf.bus_voltage[bus][p];
        flow += strformat("%zu,%zu,%c,%.6f,%.4f,%.3f\n", t, bus,
                          phase_name(static_cast<Phase>(p)), std::abs(v),
                          std::arg(v) * 180.0 / 3.14159265358979323846, loss);
      }
    }
  }
  write_file(dir / "powerflow.csv", flow);

  std::string schedules =
      "household,period,charge_kwh,discharge_kwh,grid_import_kwh,"
      "grid_export_kwh,soc_end_kwh\n";
  for (const auto& [id, schedule] : result.schedules) {
    for (int t = 0; t < kPeriodsPerDay; ++t) {
      schedules += strformat("%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f\n", id, t,
                             schedule.charge_kwh[t], schedule.discharge_kwh[t],
                             schedule.grid_import_kwh[t],
                             schedule.grid_export_kwh[t],
                             schedule.soc_kwh[t + 1]);
    }
  }
  write_file(dir / "schedules.csv", schedules);

  std::string summary = format_summary(result.ledger);
  EnergyWh p2p = 0, retail = 0, fit = 0;
  for (const auto& row : result.ledger.entries) {
    for (const HouseholdPeriodEntry& e : row) {
      p2p += e.p2p_bought;
      retail += e.retail_bought;
      fit += e.fit_sold;
    }
  }
  double losses_wh = 0.0;
  for (const PowerFlowResult& pf : result.powerflow) {
    if (pf.converged) losses_wh += pf.losses_w();
  }
  summary += "\nRun totals\n";
  summary += strformat("  Trades executed      %10zu\n", result.trades.size());
  summary += strformat("  P2P energy (kWh)     %10.3f\n", energy_kwh(p2p));
  summary += strformat("  Retail energy (kWh)  %10.3f\n", energy_kwh(retail));
  summary += strformat("  FiT energy (kWh)     %10.3f\n", energy_kwh(fit));
  summary += strformat("  Feeder losses (Wh)   %10.3f\n", losses_wh);
  if (!result.mismatches.empty()) {
    summary += strformat("  Dispatch mismatches  %10zu\n",
                         result.mismatches.size());
  }
  write_file(dir / "summary.txt", summary);
}

}  // namespace gridmarket
