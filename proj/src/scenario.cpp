#include "gridmarket/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gridmarket/util.hpp"

namespace gridmarket {

void ScenarioConfig::validate() const {
  if (households.empty()) {
    throw std::invalid_argument("config: no households");
  }
  std::set<int> ids;
  for (const HouseholdConfig& h : households) {
    if (!ids.insert(h.id).second) {
      throw std::invalid_argument(
          strformat("config: duplicate household %d", h.id));
    }
    if (h.pv_kw < 0.0) {
      throw std::invalid_argument(
          strformat("config: household %d has negative PV capacity", h.id));
    }
    if (h.battery) h.battery->validate();
    const bool connected = std::any_of(
        feeder.connections.begin(), feeder.connections.end(),
        [&](const ServiceConnection& c) { return c.household == h.id; });
    if (!connected) {
      throw std::invalid_argument(strformat(
          "config: household %d has no feeder service connection", h.id));
    }
  }
  if (events_per_period < 1) {
    throw std::invalid_argument("config: events_per_period must be >= 1");
  }
  if (mismatch.sigma < 0.0) {
    throw std::invalid_argument("config: mismatch sigma must be >= 0");
  }
  tariff.validate();
  feeder.validate();
}

ScenarioConfig default_config() {
  ScenarioConfig config;
  config.tariff = default_tariff();
  config.feeder = default_feeder();
  config.households = {
      {1, BatterySpec::from_capacity(7.5), 3.0, true},
      {2, BatterySpec::from_capacity(7.5), 5.0, true},
      {3, std::nullopt, 5.0, false},
      {4, std::nullopt, 0.0, false},
      {5, BatterySpec::from_capacity(7.5), 5.0, true},
  };
  // H1's battery converter is smaller than the 5 kW default.
  config.households[0].battery->max_charge_kw = 3.0;
  config.households[0].battery->max_discharge_kw = 3.0;
  return config;
}

namespace {

bool parse_bool(const std::string& value, const std::string& context) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") {
    return true;
  }
  if (value == "false" || value == "0" || value == "no" || value == "off") {
    return false;
  }
  throw std::invalid_argument(context + ": expected a boolean, got '" + value + "'");
}

double parse_double(const std::string& value, const std::string& context) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) {
    throw std::invalid_argument(context + ": expected a number, got '" + value + "'");
  }
  return out;
}

std::int64_t parse_int(const std::string& value, const std::string& context) {
  const double d = parse_double(value, context);
  const auto i = static_cast<std::int64_t>(d);
  if (static_cast<double>(i) != d) {
    throw std::invalid_argument(context + ": expected an integer, got '" + value + "'");
  }
  return i;
}

BatterySpec& ensure_battery(HouseholdConfig& h) {
  if (!h.battery) h.battery = BatterySpec::from_capacity(0.0);
  return *h.battery;
}

}  // namespace

namespace {

ScenarioConfig load_config_impl(std::istream& in, const std::string& source_name,
                                const std::filesystem::path& base_dir) {
  ScenarioConfig config = default_config();
  std::map<int, HouseholdConfig> roster;
  std::vector<int> roster_order;
  bool roster_declared = false;
  std::string feeder_path;

  const auto resolve = [&base_dir](const std::string& p) {
    if (std::filesystem::path(p).is_relative() && !base_dir.empty()) {
      return (base_dir / p).string();
    }
    return p;
  };

  // Tariff band edits are collected and applied over the default schedule.
  double peak_c = -1.0, shoulder_c = -1.0, offpeak_c = -1.0;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    const std::string context = strformat("%s:%d", source_name.c_str(), line_no);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(context + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument(context + ": empty key or value");
    }

    if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(parse_int(value, context));
    } else if (key == "events_per_period") {
      config.events_per_period = static_cast<int>(parse_int(value, context));
    } else if (key == "profiles") {
      config.profiles_path = resolve(value);
    } else if (key == "feeder") {
      feeder_path = resolve(value);
    } else if (key == "tariff.fit_c") {
      config.tariff.fit = price_from_cents(parse_double(value, context));
    } else if (key == "tariff.peak_c") {
      peak_c = parse_double(value, context);
    } else if (key == "tariff.shoulder_c") {
      shoulder_c = parse_double(value, context);
    } else if (key == "tariff.offpeak_c") {
      offpeak_c = parse_double(value, context);
    } else if (key.rfind("tariff.tou_", 0) == 0) {
      const int t = static_cast<int>(parse_int(key.substr(11), context));
      if (t < 0 || t >= kPeriodsPerDay) {
        throw std::invalid_argument(context + ": tariff period out of range");
      }
      config.tariff.tou[t] = price_from_cents(parse_double(value, context));
    } else if (key == "zip.beta") {
      config.zip.beta = parse_double(value, context);
    } else if (key == "zip.gamma") {
      config.zip.gamma = parse_double(value, context);
    } else if (key == "zip.buyer_margin_lo") {
      config.zip.buyer_margin_lo = parse_double(value, context);
    } else if (key == "zip.buyer_margin_hi") {
      config.zip.buyer_margin_hi = parse_double(value, context);
    } else if (key == "zip.seller_margin_lo") {
      config.zip.seller_margin_lo = parse_double(value, context);
    } else if (key == "zip.seller_margin_hi") {
      config.zip.seller_margin_hi = parse_double(value, context);
    } else if (key == "mismatch.enabled") {
      config.mismatch.enabled = parse_bool(value, context);
    } else if (key == "mismatch.sigma") {
      config.mismatch.sigma = parse_double(value, context);
    } else if (key == "households") {
      roster_declared = true;
      for (const std::string& token : split(value, ',')) {
        const int id = static_cast<int>(parse_int(trim(token), context));
        if (!roster.count(id)) {
          roster[id].id = id;
          roster_order.push_back(id);
        }
      }
    } else if (key.rfind("household.", 0) == 0) {
      const auto rest = key.substr(10);
      const auto dot = rest.find('.');
      if (dot == std::string::npos) {
        throw std::invalid_argument(context + ": expected household.<id>.<field>");
      }
      const int id = static_cast<int>(parse_int(rest.substr(0, dot), context));
      const std::string field = rest.substr(dot + 1);
      if (!roster.count(id)) {
        roster[id].id = id;
        roster_order.push_back(id);
      }
      HouseholdConfig& h = roster[id];
      if (field == "pv_kw") {
        h.pv_kw = parse_double(value, context);
      } else if (field == "hems") {
        h.hems = parse_bool(value, context);
      } else if (field == "battery_kwh") {
        const double capacity = parse_double(value, context);
        if (capacity == 0.0) {
          h.battery.reset();
        } else {
          BatterySpec fresh = BatterySpec::from_capacity(capacity);
          if (h.battery) {
            fresh.max_charge_kw = h.battery->max_charge_kw;
            fresh.max_discharge_kw = h.battery->max_discharge_kw;
            fresh.efficiency_charge = h.battery->efficiency_charge;
            fresh.efficiency_discharge = h.battery->efficiency_discharge;
          }
          h.battery = fresh;
        }
      } else if (field == "battery_charge_kw") {
        ensure_battery(h).max_charge_kw = parse_double(value, context);
      } else if (field == "battery_discharge_kw") {
        ensure_battery(h).max_discharge_kw = parse_double(value, context);
      } else if (field == "battery_eta_charge") {
        ensure_battery(h).efficiency_charge = parse_double(value, context);
      } else if (field == "battery_eta_discharge") {
        ensure_battery(h).efficiency_discharge = parse_double(value, context);
      } else if (field == "battery_soc_init_kwh") {
        ensure_battery(h).soc_init_kwh = parse_double(value, context);
      } else {
        throw std::invalid_argument(context + ": unknown household field '" +
                                    field + "'");
      }
    } else {
      throw std::invalid_argument(context + ": unknown key '" + key + "'");
    }
  }

  if (peak_c > 0.0 || shoulder_c > 0.0 || offpeak_c > 0.0) {
    const Tariff bands = default_tariff();
    for (int t = 0; t < kPeriodsPerDay; ++t) {
      if (bands.tou[t] == price_from_cents(49.24) && peak_c > 0.0) {
        config.tariff.tou[t] = price_from_cents(peak_c);
      } else if (bands.tou[t] == price_from_cents(20.9) && shoulder_c > 0.0) {
        config.tariff.tou[t] = price_from_cents(shoulder_c);
      } else if (bands.tou[t] == price_from_cents(15.1) && offpeak_c > 0.0) {
        config.tariff.tou[t] = price_from_cents(offpeak_c);
      }
    }
  }
  if (!feeder_path.empty()) {
    config.feeder = load_feeder_file(feeder_path);
  }
  if (roster_declared || !roster.empty()) {
    config.households.clear();
    for (int id : roster_order) config.households.push_back(roster[id]);
  }
  config.validate();
  return config;
}

}  // namespace

ScenarioConfig load_config(std::istream& in, const std::string& source_name) {
  return load_config_impl(in, source_name, {});
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file: " + path);
  }
  // Relative data paths resolve against the config file's directory.
  return load_config_impl(in, path, std::filesystem::path(path).parent_path());
}

}  // namespace gridmarket
