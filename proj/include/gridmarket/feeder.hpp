#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace gridmarket {

enum class Phase { a, b, c };

char phase_name(Phase phase);
Phase phase_from_name(char name);

struct LineSpec {
  int from_bus = 0;
  int to_bus = 0;
  double resistance_ohm = 0.0;
  double reactance_ohm = 0.0;
};

struct ServiceConnection {
  int household = 0;
  int bus = 0;
  Phase phase = Phase::a;
};

// Radial LV feeder: bus 0 is the stiff source, every other bus hangs off
// exactly one line, households tap single-phase service connections.
struct FeederModel {
  double nominal_voltage = 230.0;
  int bus_count = 0;
  std::vector<LineSpec> lines;
  std::vector<ServiceConnection> connections;

  void validate() const;  // throws std::invalid_argument when not a tree
};

// Built-in network: five houses daisy-chained on one street segment.
FeederModel default_feeder();

FeederModel load_feeder(std::istream& in, const std::string& source_name);
FeederModel load_feeder_file(const std::string& path);

// Positive real power means the household draws from the grid; negative
// means it is injecting (exporting).
struct PowerInjection {
  int household = 0;
  double real_w = 0.0;
  double reactive_var = 0.0;
};

struct PowerFlowResult {
  bool converged = false;
  int iterations = 0;
  // Indexed [bus][phase].
  std::vector<std::array<std::complex<double>, 3>> bus_voltage;
  // Indexed [line][phase]; flow measured from the source side toward the
  // far end of each line.
  std::vector<std::array<std::complex<double>, 3>> line_current;
  std::vector<double> line_loss_w;                 // per line, all phases
  std::array<std::complex<double>, 3> source_power_va{};

  double losses_w() const;  // throws std::runtime_error when not converged
  double voltage_magnitude(int bus, Phase phase) const;
};

PowerFlowResult solve_powerflow(const FeederModel& model,
                                const std::vector<PowerInjection>& injections,
                                double tolerance_v = 1e-6,
                                int max_iterations = 100);

}  // namespace gridmarket
