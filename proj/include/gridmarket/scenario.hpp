#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gridmarket/feeder.hpp"
#include "gridmarket/hems.hpp"
#include "gridmarket/settlement.hpp"
#include "gridmarket/zip_trader.hpp"

namespace gridmarket {

struct HouseholdConfig {
  int id = 0;
  std::optional<BatterySpec> battery;
  double pv_kw = 0.0;
  bool hems = false;
};

struct MismatchConfig {
  bool enabled = false;
  double sigma = 0.02;  // relative dispatch error, truncated at +/-10%
};

struct ScenarioConfig {
  std::vector<HouseholdConfig> households;
  Tariff tariff;
  FeederModel feeder;
  int events_per_period = 200;
  ZipParams zip;
  std::uint64_t seed = 1;
  MismatchConfig mismatch;
  std::string profiles_path;  // empty: synthesize from the scenario seed

  void validate() const;
};

// Five-household reference roster on the built-in feeder: H1 7.5 kWh / 3 kW
// / HEMS, H2 7.5 / 5 / HEMS, H3 - / 5 / no, H4 - / - / no, H5 7.5 / 5 / HEMS.
ScenarioConfig default_config();

// key = value format, # comments. See README for the key list.
ScenarioConfig load_config(std::istream& in, const std::string& source_name);
ScenarioConfig load_config_file(const std::string& path);

}  // namespace gridmarket
