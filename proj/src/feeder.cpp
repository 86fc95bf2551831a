#include "gridmarket/feeder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gridmarket/util.hpp"

namespace gridmarket {

char phase_name(Phase phase) {
  switch (phase) {
    case Phase::a: return 'a';
    case Phase::b: return 'b';
    case Phase::c: return 'c';
  }
  return '?';
}

Phase phase_from_name(char name) {
  switch (name) {
    case 'a': case 'A': return Phase::a;
    case 'b': case 'B': return Phase::b;
    case 'c': case 'C': return Phase::c;
  }
  throw std::invalid_argument(strformat("unknown phase '%c'", name));
}

void FeederModel::validate() const {
  if (nominal_voltage <= 0.0) {
    throw std::invalid_argument("feeder: nominal voltage must be positive");
  }
  if (bus_count < 1) {
    throw std::invalid_argument("feeder: need at least the source bus");
  }
  if (static_cast<int>(lines.size()) != bus_count - 1) {
    throw std::invalid_argument(
        strformat("feeder: %d buses need %d lines for a radial layout, got %zu",
                  bus_count, bus_count - 1, lines.size()));
  }
  for (const LineSpec& line : lines) {
    if (line.from_bus < 0 || line.from_bus >= bus_count || line.to_bus < 0 ||
        line.to_bus >= bus_count) {
      throw std::invalid_argument(
          strformat("feeder: line %d-%d references a missing bus",
                    line.from_bus, line.to_bus));
    }
    if (line.from_bus == line.to_bus) {
      throw std::invalid_argument(
          strformat("feeder: line at bus %d loops onto itself", line.from_bus));
    }
    if (line.resistance_ohm < 0.0) {
      throw std::invalid_argument("feeder: negative line resistance");
    }
  }

  // Tree check: right edge count plus full reachability from the source.
  std::vector<std::vector<int>> adjacent(bus_count);
  for (const LineSpec& line : lines) {
    adjacent[line.from_bus].push_back(line.to_bus);
    adjacent[line.to_bus].push_back(line.from_bus);
  }
  std::vector<char> seen(bus_count, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int bus = frontier.front();
    frontier.pop();
    for (int next : adjacent[bus]) {
      if (!seen[next]) {
        seen[next] = 1;
        ++reached;
        frontier.push(next);
      }
    }
  }
  if (reached != bus_count) {
    throw std::invalid_argument(
        strformat("feeder: %d of %d buses unreachable from the source",
                  bus_count - reached, bus_count));
  }

  std::set<int> households;
  for (const ServiceConnection& conn : connections) {
    if (conn.bus <= 0 || conn.bus >= bus_count) {
      throw std::invalid_argument(
          strformat("feeder: household %d connects to invalid bus %d",
                    conn.household, conn.bus));
    }
    if (!households.insert(conn.household).second) {
      throw std::invalid_argument(
          strformat("feeder: household %d connected twice", conn.household));
    }
  }
}

FeederModel default_feeder() {
  FeederModel model;
  model.nominal_voltage = 230.0;
  model.bus_count = 6;
  model.lines = {
      {0, 1, 0.0239, 0.0218},  // 75 m service main
      {1, 2, 0.0128, 0.0116},  // 40 m hops down the street
      {2, 3, 0.0128, 0.0116},
      {3, 4, 0.0128, 0.0116},
      {4, 5, 0.0128, 0.0116},
  };
  model.connections = {
      {1, 1, Phase::a}, {2, 2, Phase::b}, {3, 3, Phase::c},
      {4, 4, Phase::a}, {5, 5, Phase::b},
  };
  return model;
}

FeederModel load_feeder(std::istream& in, const std::string& source_name) {
  FeederModel model;
  model.nominal_voltage = 230.0;
  std::string raw;
  int line_no = 0;
  bool saw_buses = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream tokens(raw);
    std::string keyword;
    if (!(tokens >> keyword)) continue;

    const auto fail = [&](const std::string& why) {
      throw std::invalid_argument(
          strformat("%s:%d: %s", source_name.c_str(), line_no, why.c_str()));
    };

    if (keyword == "nominal_voltage") {
      if (!(tokens >> model.nominal_voltage)) fail("expected a voltage");
    } else if (keyword == "buses") {
      if (!(tokens >> model.bus_count)) fail("expected a bus count");
      saw_buses = true;
    } else if (keyword == "line") {
      LineSpec line;
      if (!(tokens >> line.from_bus >> line.to_bus >> line.resistance_ohm >>
            line.reactance_ohm)) {
        fail("expected: line <from> <to> <r_ohm> <x_ohm>");
      }
      model.lines.push_back(line);
    } else if (keyword == "connect") {
      ServiceConnection conn;
      std::string phase;
      if (!(tokens >> conn.household >> conn.bus >> phase) || phase.size() != 1) {
        fail("expected: connect <household> <bus> <phase a|b|c>");
      }
      try {
        conn.phase = phase_from_name(phase[0]);
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
      model.connections.push_back(conn);
    } else {
      fail("unknown keyword '" + keyword + "'");
    }
  }
  if (!saw_buses) {
    throw std::invalid_argument(source_name + ": missing 'buses' directive");
  }
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(source_name + ": " + e.what());
  }
  return model;
}

FeederModel load_feeder_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open feeder file: " + path);
  }
  return load_feeder(in, path);
}

double PowerFlowResult::losses_w() const {
  if (!converged) {
    throw std::runtime_error("powerflow did not converge; losses undefined");
  }
  double total = 0.0;
  for (double w : line_loss_w) total += w;
  return total;
}

double PowerFlowResult::voltage_magnitude(int bus, Phase phase) const {
  return std::abs(bus_voltage.at(bus)[static_cast<int>(phase)]);
}

PowerFlowResult solve_powerflow(const FeederModel& model,
                                const std::vector<PowerInjection>& injections,
                                double tolerance_v, int max_iterations) {
  model.validate();
  if (tolerance_v <= 0.0 || max_iterations < 1) {
    throw std::invalid_argument("powerflow: bad tolerance or iteration limit");
  }

  const int buses = model.bus_count;
  const int n_lines = static_cast<int>(model.lines.size());

  // Orient every line away from the source and record sweep order.
  std::vector<std::vector<std::pair<int, int>>> adjacent(buses);  // (bus, line)
  for (int l = 0; l < n_lines; ++l) {
    adjacent[model.lines[l].from_bus].push_back({model.lines[l].to_bus, l});
    adjacent[model.lines[l].to_bus].push_back({model.lines[l].from_bus, l});
  }
  struct OrientedLine {
    int index;   // position in model.lines
    int parent;  // source-side bus
    int child;   // far-side bus
  };
  std::vector<OrientedLine> order;  // parents always precede children
  order.reserve(n_lines);
  {
    std::vector<char> seen(buses, 0);
    std::queue<int> frontier;
    frontier.push(0);
    seen[0] = 1;
    while (!frontier.empty()) {
      const int bus = frontier.front();
      frontier.pop();
      for (auto [next, l] : adjacent[bus]) {
        if (seen[next]) continue;
        seen[next] = 1;
        order.push_back({l, bus, next});
        frontier.push(next);
      }
    }
  }

  // Aggregate household demand per bus and phase (consumption positive).
  using cdouble = std::complex<double>;
  std::vector<std::array<cdouble, 3>> demand(buses, {cdouble{}, cdouble{}, cdouble{}});
  for (const PowerInjection& inj : injections) {
    auto it = std::find_if(model.connections.begin(), model.connections.end(),
                           [&](const ServiceConnection& c) {
                             return c.household == inj.household;
                           });
    if (it == model.connections.end()) {
      throw std::invalid_argument(
          strformat("powerflow: household %d has no service connection",
                    inj.household));
    }
    demand[it->bus][static_cast<int>(it->phase)] +=
        cdouble(inj.real_w, inj.reactive_var);
  }

  std::array<cdouble, 3> source_v;
  const double third = 2.0 * std::numbers::pi / 3.0;
  source_v[0] = std::polar(model.nominal_voltage, 0.0);
  source_v[1] = std::polar(model.nominal_voltage, -third);
  source_v[2] = std::polar(model.nominal_voltage, third);

  PowerFlowResult result;
  result.bus_voltage.assign(buses, source_v);
  result.line_current.assign(n_lines, {cdouble{}, cdouble{}, cdouble{}});
  result.line_loss_w.assign(n_lines, 0.0);

  std::vector<std::array<cdouble, 3>> accumulated(buses);
  for (int iter = 1; iter <= max_iterations; ++iter) {
    // Backward sweep: load currents roll up toward the source.
    for (int b = 0; b < buses; ++b) {
      for (int p = 0; p < 3; ++p) {
        const cdouble s = demand[b][p];
        accumulated[b][p] =
            s == cdouble{} ? cdouble{} : std::conj(s / result.bus_voltage[b][p]);
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      for (int p = 0; p < 3; ++p) {
        result.line_current[it->index][p] = accumulated[it->child][p];
        accumulated[it->parent][p] += accumulated[it->child][p];
      }
    }

    // Forward sweep: drop voltages down the tree.
    double worst_change = 0.0;
    for (const OrientedLine& line : order) {
      const LineSpec& spec = model.lines[line.index];
      const cdouble z(spec.resistance_ohm, spec.reactance_ohm);
      for (int p = 0; p < 3; ++p) {
        const cdouble v =
            result.bus_voltage[line.parent][p] - z * result.line_current[line.index][p];
        worst_change =
            std::max(worst_change, std::abs(v - result.bus_voltage[line.child][p]));
        result.bus_voltage[line.child][p] = v;
      }
    }

    result.iterations = iter;
    if (worst_change < tolerance_v) {
      result.converged = true;
      break;
    }
  }

  for (int l = 0; l < n_lines; ++l) {
    double loss = 0.0;
    for (int p = 0; p < 3; ++p) {
      loss += std::norm(result.line_current[l][p]) * model.lines[l].resistance_ohm;
    }
    result.line_loss_w[l] = loss;
  }
  for (int p = 0; p < 3; ++p) {
    result.source_power_va[p] = source_v[p] * std::conj(accumulated[0][p]);
  }
  return result;
}

}  // namespace gridmarket
