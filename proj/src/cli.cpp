#include "gridmarket/cli.hpp"

#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "gridmarket/metering.hpp"
#include "gridmarket/profiles.hpp"
#include "gridmarket/scenario.hpp"
#include "gridmarket/sim_engine.hpp"
#include "gridmarket/util.hpp"

namespace gridmarket {

namespace {

// Sample CSV: "sample_rate,<hz>" header, then "v,i", then one row per sample.
std::pair<SampledWaveform, SampledWaveform> read_waveform_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open waveform file: " + path);
  }
  std::string line;
  int row = 0;

  const auto fail = [&](const std::string& why) {
    throw std::invalid_argument(
        strformat("%s:%d: %s", path.c_str(), row, why.c_str()));
  };
  const auto next_line = [&]() {
    if (!std::getline(in, line)) fail("unexpected end of file");
    ++row;
  };

  next_line();
  auto cells = split(trim(line), ',');
  if (cells.size() != 2 || cells[0] != "sample_rate") {
    fail("expected header 'sample_rate,<hz>'");
  }
  double rate = 0.0;
  try {
    rate = std::stod(cells[1]);
  } catch (const std::exception&) {
    fail("sample rate is not a number");
  }

  next_line();
  if (trim(line) != "v,i") fail("expected column header 'v,i'");

  SampledWaveform v, i;
  v.sample_rate = i.sample_rate = rate;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    cells = split(line, ',');
    if (cells.size() != 2) fail("expected two columns");
    try {
      v.samples.push_back(std::stod(cells[0]));
      i.samples.push_back(std::stod(cells[1]));
    } catch (const std::exception&) {
      fail("non-numeric sample");
    }
  }
  if (v.samples.empty()) fail("no sample rows");
  return {std::move(v), std::move(i)};
}

int cmd_run(const std::string& config_path, bool seed_given, std::uint64_t seed,
            const std::string& out_dir) {
  ScenarioConfig config =
      config_path.empty() ? default_config() : load_config_file(config_path);
  if (seed_given) config.seed = seed;
  logging::info(strformat("running day with seed %llu",
                          static_cast<unsigned long long>(config.seed)));
  const DayResult day = run_day(config);
  write_outputs(day, out_dir);
  std::fputs(format_summary(day.ledger).c_str(), stdout);
  std::printf("\nOutputs written to %s\n", out_dir.c_str());
  return 0;
}

int cmd_meter(const std::string& path) {
  const auto [v, i] = read_waveform_csv(path);
  const MeterComparison cmp = compare_methods(v, i);
  std::printf("samples               %zu at %.0f Hz\n", v.samples.size(),
              v.sample_rate);
  std::printf("rms                   v = %.4f V, i = %.4f A\n", v.rms(), i.rms());
  std::printf("integration           P = %.4f W, Q = %.4f var\n",
              cmp.integration.p, cmp.integration.q);
  std::printf("fundamental (phasor)  P = %.4f W, Q = %.4f var\n",
              cmp.fundamental.p, cmp.fundamental.q);
  if (cmp.deviation_is_watts) {
    std::printf("deviation             %.6f W (absolute; |P| < 1 W)\n",
                cmp.deviation);
  } else {
    std::printf("deviation             %.4f %%\n", 100.0 * cmp.deviation);
  }
  return 0;
}

int cmd_powerflow(const std::string& feeder_path,
                  const std::vector<std::string>& inject_args) {
  const FeederModel model =
      feeder_path.empty() ? default_feeder() : load_feeder_file(feeder_path);
  std::vector<PowerInjection> injections;
  for (const std::string& arg : inject_args) {
    // household=watts or household=watts:vars
    const auto eq = arg.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--inject expects H=WATTS[:VARS], got '" +
                                  arg + "'");
    }
    PowerInjection inj;
    try {
      inj.household = std::stoi(arg.substr(0, eq));
      const std::string rest = arg.substr(eq + 1);
      const auto colon = rest.find(':');
      inj.real_w = std::stod(rest.substr(0, colon));
      if (colon != std::string::npos) {
        inj.reactive_var = std::stod(rest.substr(colon + 1));
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("--inject expects H=WATTS[:VARS], got '" +
                                  arg + "'");
    }
    injections.push_back(inj);
  }

  const PowerFlowResult result = solve_powerflow(model, injections);
  if (!result.converged) {
    std::fprintf(stderr, "error: power flow did not converge in %d iterations\n",
                 result.iterations);
    return 1;
  }
  std::printf("converged in %d iterations\n", result.iterations);
  std::printf("%4s %8s %12s %10s\n", "bus", "phase", "|V| (V)", "angle");
  for (int bus = 0; bus < model.bus_count; ++bus) {
    for (int p = 0; p < 3; ++p) {
      const auto v = result.bus_voltage[bus][p];
      std::printf("%4d %8c %12.6f %9.4f°\n", bus,
                  phase_name(static_cast<Phase>(p)), std::abs(v),
                  std::arg(v) * 180.0 / 3.14159265358979323846);
    }
  }
  std::printf("total losses: %.6f W\n", result.losses_w());
  return 0;
}

int cmd_gen_profiles(std::uint64_t seed, const std::string& out_path,
                     const std::string& household_list,
                     const std::string& config_path) {
  std::vector<int> ids;
  std::vector<int> pv_less;
  if (!household_list.empty()) {
    for (const std::string& token : split(household_list, ',')) {
      ids.push_back(std::stoi(trim(token)));
    }
  } else {
    // Roster (and which households lack panels) from the config.
    const ScenarioConfig config =
        config_path.empty() ? default_config() : load_config_file(config_path);
    for (const HouseholdConfig& h : config.households) {
      ids.push_back(h.id);
      if (h.pv_kw == 0.0) pv_less.push_back(h.id);
    }
  }
  const ProfileSet profiles = generate_synthetic_profiles(seed, ids, pv_less);
  const std::string csv = profiles_csv(profiles);
  if (out_path == "-") {
    std::fputs(csv.c_str(), stdout);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      throw std::invalid_argument("cannot write " + out_path);
    }
    out << csv;
    if (!out) throw std::runtime_error("write failed: " + out_path);
    std::printf("wrote %zu household profiles to %s\n", ids.size(),
                out_path.c_str());
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"gridmarket: deterministic P2P electricity market simulator"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("--verbose", verbose, "log progress to stderr");

  auto* run = app.add_subcommand("run", "simulate one trading day");
  run->fallthrough();
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  run->add_option("--config", config_path, "scenario config file")
      ->check(CLI::ExistingFile);
  auto* seed_opt = run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--out", out_dir, "output directory");

  auto* meter = app.add_subcommand("meter", "compare P/Q metering methods");
  meter->fallthrough();
  std::string waveform_path;
  meter->add_option("file", waveform_path, "waveform sample CSV")
      ->required()
      ->check(CLI::ExistingFile);

  auto* powerflow = app.add_subcommand("powerflow", "solve one feeder snapshot");
  powerflow->fallthrough();
  std::string feeder_path;
  std::vector<std::string> inject_args;
  powerflow->add_option("feeder", feeder_path, "feeder description file")
      ->check(CLI::ExistingFile);
  powerflow->add_option("--inject", inject_args,
                        "household injection H=WATTS[:VARS]; repeatable");

  auto* gen = app.add_subcommand("gen-profiles", "write synthetic profiles");
  gen->fallthrough();
  std::uint64_t gen_seed = 1;
  std::string gen_out = "profiles.csv";
  std::string gen_households;
  std::string gen_config;
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output file ('-' for stdout)");
  gen->add_option("--households", gen_households,
                  "comma-separated ids, all PV-equipped (default: config roster)");
  gen->add_option("--config", gen_config, "take the roster from this config")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (verbose) logging::level() = std::max(logging::level(), 1);

  try {
    if (run->parsed()) {
      return cmd_run(config_path, seed_opt->count() > 0, seed, out_dir);
    }
    if (meter->parsed()) return cmd_meter(waveform_path);
    if (powerflow->parsed()) return cmd_powerflow(feeder_path, inject_args);
    if (gen->parsed()) {
      return cmd_gen_profiles(gen_seed, gen_out, gen_households, gen_config);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace gridmarket
