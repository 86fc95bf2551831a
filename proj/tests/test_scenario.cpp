#include "gridmarket/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "gridmarket/units.hpp"

using namespace gridmarket;

namespace {

ScenarioConfig parse(const std::string& text) {
  std::istringstream in(text);
  return load_config(in, "scenario.cfg");
}

void expect_config_error(const std::string& text, const std::string& needle) {
  std::istringstream in(text);
  try {
    load_config(in, "scenario.cfg");
    FAIL("expected config failure for: ", needle);
  } catch (const std::exception& e) {
    const std::string msg = e.what();
    INFO("message: ", msg);
    CHECK(msg.find(needle) != std::string::npos);
  }
}

const HouseholdConfig& by_id(const ScenarioConfig& c, int id) {
  for (const HouseholdConfig& h : c.households) {
    if (h.id == id) return h;
  }
  REQUIRE(false);
  return c.households.front();
}

}  // namespace

TEST_CASE("default scenario matches the reference roster") {
  const ScenarioConfig c = default_config();
  CHECK_NOTHROW(c.validate());
  REQUIRE(c.households.size() == 5);

  const HouseholdConfig& h1 = by_id(c, 1);
  REQUIRE(h1.battery.has_value());
  CHECK(h1.battery->capacity_kwh == doctest::Approx(7.5));
  CHECK(h1.battery->max_charge_kw == doctest::Approx(3.0));
  CHECK(h1.battery->max_discharge_kw == doctest::Approx(3.0));
  CHECK(h1.battery->soc_init_kwh == doctest::Approx(3.75));
  CHECK(h1.pv_kw == doctest::Approx(3.0));
  CHECK(h1.hems);

  const HouseholdConfig& h2 = by_id(c, 2);
  REQUIRE(h2.battery.has_value());
  CHECK(h2.battery->capacity_kwh == doctest::Approx(7.5));
  CHECK(h2.battery->max_charge_kw == doctest::Approx(5.0));
  CHECK(h2.pv_kw == doctest::Approx(5.0));
  CHECK(h2.hems);

  const HouseholdConfig& h3 = by_id(c, 3);
  CHECK(!h3.battery.has_value());
  CHECK(h3.pv_kw == doctest::Approx(5.0));
  CHECK(!h3.hems);

  const HouseholdConfig& h4 = by_id(c, 4);
  CHECK(!h4.battery.has_value());
  CHECK(h4.pv_kw == 0.0);
  CHECK(!h4.hems);

  const HouseholdConfig& h5 = by_id(c, 5);
  REQUIRE(h5.battery.has_value());
  CHECK(h5.battery->capacity_kwh == doctest::Approx(7.5));
  CHECK(h5.battery->max_discharge_kw == doctest::Approx(5.0));
  CHECK(h5.pv_kw == doctest::Approx(5.0));
  CHECK(h5.hems);

  const Tariff t = default_tariff();
  CHECK(c.tariff.fit == t.fit);
  for (int p = 0; p < kPeriodsPerDay; ++p) CHECK(c.tariff.tou[p] == t.tou[p]);
  CHECK(c.feeder.bus_count == default_feeder().bus_count);
  CHECK(c.feeder.connections.size() == 5);

  CHECK(c.events_per_period == 200);
  CHECK(c.seed == 1);
  CHECK(!c.mismatch.enabled);
  CHECK(c.mismatch.sigma == doctest::Approx(0.02));
  CHECK(c.profiles_path.empty());
}

TEST_CASE("scalar keys override the defaults") {
  const ScenarioConfig c = parse(
      "# comment line\n"
      "seed = 42\n"
      "\n"
      "events_per_period = 60   # trailing comment\n"
      "zip.beta = 0.5\n"
      "zip.gamma = 0.10\n"
      "zip.buyer_margin_lo = -0.4\n"
      "zip.buyer_margin_hi = -0.1\n"
      "zip.seller_margin_lo = 0.02\n"
      "zip.seller_margin_hi = 0.2\n"
      "mismatch.enabled = true\n"
      "mismatch.sigma = 0.05\n"
      "profiles = day.csv\n");
  CHECK(c.seed == 42);
  CHECK(c.events_per_period == 60);
  CHECK(c.zip.beta == doctest::Approx(0.5));
  CHECK(c.zip.gamma == doctest::Approx(0.10));
  CHECK(c.zip.buyer_margin_lo == doctest::Approx(-0.4));
  CHECK(c.zip.buyer_margin_hi == doctest::Approx(-0.1));
  CHECK(c.zip.seller_margin_lo == doctest::Approx(0.02));
  CHECK(c.zip.seller_margin_hi == doctest::Approx(0.2));
  CHECK(c.mismatch.enabled);
  CHECK(c.mismatch.sigma == doctest::Approx(0.05));
  // No base directory for stream input: the path is kept verbatim.
  CHECK(c.profiles_path == "day.csv");
  // Untouched settings keep their defaults.
  CHECK(c.households.size() == 5);
  CHECK(c.tariff.fit == price_from_cents(6.1));
}

TEST_CASE("tariff band edits rewrite the matching periods") {
  const ScenarioConfig c = parse(
      "tariff.fit_c = 5.0\n"
      "tariff.peak_c = 40\n"
      "tariff.shoulder_c = 18\n"
      "tariff.offpeak_c = 12\n");
  CHECK(c.tariff.fit == price_from_cents(5.0));
  CHECK(c.tariff.tou[2] == price_from_cents(12));    // off-peak
  CHECK(c.tariff.tou[10] == price_from_cents(18));   // shoulder
  CHECK(c.tariff.tou[15] == price_from_cents(40));   // peak
  CHECK(c.tariff.tou[21] == price_from_cents(18));   // evening shoulder
  CHECK(c.tariff.tou[23] == price_from_cents(12));

  SUBCASE("a single band edit leaves the other bands alone") {
    const ScenarioConfig p = parse("tariff.peak_c = 60\n");
    CHECK(p.tariff.tou[15] == price_from_cents(60));
    CHECK(p.tariff.tou[10] == price_from_cents(20.9));
    CHECK(p.tariff.tou[2] == price_from_cents(15.1));
  }
}

TEST_CASE("per-period tariff overrides") {
  const ScenarioConfig c = parse(
      "tariff.tou_3 = 9.9\n"
      "tariff.tou_23 = 33.3\n");
  CHECK(c.tariff.tou[3] == price_from_cents(9.9));
  CHECK(c.tariff.tou[23] == price_from_cents(33.3));
  CHECK(c.tariff.tou[2] == price_from_cents(15.1));  // untouched
  expect_config_error("tariff.tou_24 = 10\n", "period out of range");
  expect_config_error("tariff.tou_-1 = 10\n", "period out of range");
}

TEST_CASE("household keys rebuild the roster") {
  const ScenarioConfig c = parse(
      "households = 1, 2\n"
      "household.1.pv_kw = 4.0\n"
      "household.1.hems = yes\n"
      "household.1.battery_kwh = 10\n"
      "household.1.battery_charge_kw = 2.5\n"
      "household.2.pv_kw = 0\n");
  REQUIRE(c.households.size() == 2);

  const HouseholdConfig& h1 = by_id(c, 1);
  CHECK(h1.pv_kw == doctest::Approx(4.0));
  CHECK(h1.hems);
  REQUIRE(h1.battery.has_value());
  CHECK(h1.battery->capacity_kwh == doctest::Approx(10.0));
  CHECK(h1.battery->soc_max_kwh == doctest::Approx(10.0));
  CHECK(h1.battery->soc_init_kwh == doctest::Approx(5.0));
  CHECK(h1.battery->max_charge_kw == doctest::Approx(2.5));
  CHECK(h1.battery->max_discharge_kw == doctest::Approx(5.0));

  const HouseholdConfig& h2 = by_id(c, 2);
  CHECK(h2.pv_kw == 0.0);
  CHECK(!h2.hems);
  CHECK(!h2.battery.has_value());
}

TEST_CASE("roster declaration preserves order and defaults") {
  const ScenarioConfig c = parse("households = 3, 1, 5\n");
  REQUIRE(c.households.size() == 3);
  CHECK(c.households[0].id == 3);
  CHECK(c.households[1].id == 1);
  CHECK(c.households[2].id == 5);
  for (const HouseholdConfig& h : c.households) {
    CHECK(h.pv_kw == 0.0);
    CHECK(!h.battery.has_value());
    CHECK(!h.hems);
  }
}

TEST_CASE("battery field edit ordering") {
  SUBCASE("capacity zero removes the battery") {
    const ScenarioConfig c = parse(
        "households = 1\n"
        "household.1.battery_kwh = 5\n"
        "household.1.battery_kwh = 0\n");
    CHECK(!by_id(c, 1).battery.has_value());
  }
  SUBCASE("converter and efficiency overrides survive a capacity change") {
    const ScenarioConfig c = parse(
        "households = 1\n"
        "household.1.battery_charge_kw = 2\n"
        "household.1.battery_eta_charge = 0.9\n"
        "household.1.battery_kwh = 8\n");
    const BatterySpec& b = *by_id(c, 1).battery;
    CHECK(b.capacity_kwh == doctest::Approx(8.0));
    CHECK(b.max_charge_kw == doctest::Approx(2.0));
    CHECK(b.efficiency_charge == doctest::Approx(0.9));
    CHECK(b.soc_init_kwh == doctest::Approx(4.0));  // refreshed from capacity
  }
  SUBCASE("initial charge override") {
    const ScenarioConfig c = parse(
        "households = 1\n"
        "household.1.battery_kwh = 8\n"
        "household.1.battery_soc_init_kwh = 1.5\n");
    CHECK(by_id(c, 1).battery->soc_init_kwh == doctest::Approx(1.5));
  }
}

TEST_CASE("malformed config lines report file and line") {
  expect_config_error("seed 42\n", "scenario.cfg:1");
  expect_config_error("seed 42\n", "expected key = value");
  expect_config_error("seed =\n", "empty key or value");
  expect_config_error("seed = twelve\n", "expected a number");
  expect_config_error("seed = 1.5\n", "expected an integer");
  expect_config_error("zip.beta = fast\n", "expected a number");
  expect_config_error("mismatch.enabled = maybe\n", "expected a boolean");
  expect_config_error("turbo = 1\n", "unknown key 'turbo'");
  expect_config_error("household.1.solar = 3\n", "unknown household field 'solar'");
  expect_config_error("household.1 = 3\n", "expected household.<id>.<field>");
  expect_config_error("seed = 1\nevents_per_period = zero\n", "scenario.cfg:2");
}

TEST_CASE("validation failures surface through load_config") {
  // Household 9 exists in the roster but has no feeder service connection.
  expect_config_error("households = 1, 9\n", "no feeder service connection");
  expect_config_error("household.1.pv_kw = -1\n", "negative PV");
  expect_config_error("events_per_period = 0\n", "events_per_period");
  expect_config_error("mismatch.sigma = -0.1\n", "sigma");
  expect_config_error("tariff.fit_c = 25\n", "FiT must stay below");
  expect_config_error(
      "households = 1\nhousehold.1.battery_kwh = 8\n"
      "household.1.battery_soc_init_kwh = 9\n",
      "soc_init");

  SUBCASE("direct validate failures") {
    ScenarioConfig dup = default_config();
    dup.households[1].id = 1;
    CHECK_THROWS_AS(dup.validate(), std::invalid_argument);
    ScenarioConfig empty = default_config();
    empty.households.clear();
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
  }
}

TEST_CASE("config files resolve data paths against their directory") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "gridmarket_cfg_test";
  fs::create_directories(dir);

  {
    std::ofstream f(dir / "street.feeder");
    f << "buses 3\nline 0 1 0.05 0.04\nline 1 2 0.05 0.04\n"
      << "connect 1 1 a\nconnect 2 2 b\n";
  }
  {
    std::ofstream f(dir / "run.cfg");
    f << "feeder = street.feeder\n"
      << "profiles = day.csv\n"
      << "households = 1, 2\n"
      << "household.1.pv_kw = 2\n";
  }

  const ScenarioConfig c = load_config_file((dir / "run.cfg").string());
  CHECK(c.feeder.bus_count == 3);
  CHECK(c.feeder.connections.size() == 2);
  CHECK(c.profiles_path == (fs::path(dir) / "day.csv").string());
  CHECK(c.households.size() == 2);

  CHECK_THROWS_WITH_AS(load_config_file((dir / "absent.cfg").string()),
                       doctest::Contains("cannot open config file"),
                       std::invalid_argument);
  fs::remove_all(dir);
}
