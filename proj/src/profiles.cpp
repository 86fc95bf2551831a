#include "gridmarket/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <stdexcept>

#include "gridmarket/rng.hpp"
#include "gridmarket/util.hpp"

namespace gridmarket {

namespace {

constexpr const char* kHeader = "household,period,load_kwh,pv_kwh_per_kw";

double parse_cell(const std::string& cell, const std::string& source, int row,
                  const char* column) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != cell.size() || cell.empty()) {
    throw std::invalid_argument(
        strformat("%s:%d: column %s: '%s' is not a number", source.c_str(), row,
                  column, cell.c_str()));
  }
  return value;
}

// Keep generated values lossless across a write/parse cycle.
double round6(double v) { return std::llround(v * 1e6) / 1e6; }

}  // namespace

ProfileSet parse_profiles(std::istream& in, const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kHeader) {
    throw std::invalid_argument(source_name + ": expected header '" +
                                kHeader + "'");
  }

  std::map<int, HouseholdProfile> by_household;
  std::map<int, std::array<char, kPeriodsPerDay>> seen;
  std::vector<int> order;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() != 4) {
      throw std::invalid_argument(strformat("%s:%d: expected 4 columns, got %zu",
                                            source_name.c_str(), row,
                                            cells.size()));
    }
    const double id_raw = parse_cell(cells[0], source_name, row, "household");
    const double period_raw = parse_cell(cells[1], source_name, row, "period");
    const double load = parse_cell(cells[2], source_name, row, "load_kwh");
    const double pv = parse_cell(cells[3], source_name, row, "pv_kwh_per_kw");
    const int id = static_cast<int>(id_raw);
    const int period = static_cast<int>(period_raw);
    if (id_raw != id || period_raw != period) {
      throw std::invalid_argument(strformat(
          "%s:%d: household and period must be integers", source_name.c_str(), row));
    }
    if (period < 0 || period >= kPeriodsPerDay) {
      throw std::invalid_argument(strformat("%s:%d: period %d out of range 0-23",
                                            source_name.c_str(), row, period));
    }
    if (load < 0.0 || pv < 0.0) {
      throw std::invalid_argument(strformat("%s:%d: negative energy value",
                                            source_name.c_str(), row));
    }
    if (!by_household.count(id)) {
      by_household[id].household = id;
      seen[id] = {};
      order.push_back(id);
    }
    if (seen[id][period]) {
      throw std::invalid_argument(
          strformat("%s:%d: duplicate row for household %d period %d",
                    source_name.c_str(), row, id, period));
    }
    seen[id][period] = 1;
    by_household[id].load_kwh[period] = load;
    by_household[id].pv_kwh_per_kw[period] = pv;
  }

  if (order.empty()) {
    throw std::invalid_argument(source_name + ": no profile rows");
  }
  for (int id : order) {
    for (int t = 0; t < kPeriodsPerDay; ++t) {
      if (!seen[id][t]) {
        throw std::invalid_argument(
            strformat("%s: household %d is missing period %d",
                      source_name.c_str(), id, t));
      }
    }
  }

  ProfileSet out;
  out.reserve(order.size());
  for (int id : order) out.push_back(by_household[id]);
  return out;
}

ProfileSet load_profiles_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open profile file: " + path);
  }
  return parse_profiles(in, path);
}

std::string profiles_csv(const ProfileSet& profiles) {
  std::string out = std::string(kHeader) + "\n";
  for (const HouseholdProfile& p : profiles) {
    for (int t = 0; t < kPeriodsPerDay; ++t) {
      out += strformat("%d,%d,%.6f,%.6f\n", p.household, t, p.load_kwh[t],
                       p.pv_kwh_per_kw[t]);
    }
  }
  return out;
}

std::vector<ScaledProfile> scale_profiles(
    const ProfileSet& profiles,
    const std::vector<std::pair<int, double>>& pv_kw) {
  std::vector<ScaledProfile> out;
  out.reserve(pv_kw.size());
  for (const auto& [id, capacity] : pv_kw) {
    if (capacity < 0.0) {
      throw std::invalid_argument(
          strformat("household %d: negative PV capacity", id));
    }
    const auto it =
        std::find_if(profiles.begin(), profiles.end(),
                     [&](const HouseholdProfile& p) { return p.household == id; });
    if (it == profiles.end()) {
      throw std::invalid_argument(
          strformat("no profile rows for household %d", id));
    }
    ScaledProfile scaled;
    scaled.household = id;
    scaled.load_kwh = it->load_kwh;
    for (int t = 0; t < kPeriodsPerDay; ++t) {
      if (capacity == 0.0 && it->pv_kwh_per_kw[t] != 0.0) {
        throw std::invalid_argument(strformat(
            "household %d has no PV capacity but a nonzero PV profile in "
            "period %d",
            id, t));
      }
      scaled.pv_kwh[t] = capacity * it->pv_kwh_per_kw[t];
    }
    out.push_back(scaled);
  }
  return out;
}

ProfileSet generate_synthetic_profiles(std::uint64_t seed,
                                       const std::vector<int>& households,
                                       const std::vector<int>& pv_less) {
  ProfileSet out;
  out.reserve(households.size());
  for (int id : households) {
    const bool has_pv =
        std::find(pv_less.begin(), pv_less.end(), id) == pv_less.end();
    std::mt19937_64 rng(derive_seed(seed, seed_tag::kProfiles, id));
    HouseholdProfile p;
    p.household = id;

    // Half-sine PV envelope over 06:00-18:00, derated so a 1 kW panel
    // yields about 5 kWh/day, with mild hour-to-hour weather.
    for (int t = 6; t < 18; ++t) {
      const double envelope =
          std::sin(std::numbers::pi * (t + 0.5 - 6.0) / 12.0);
      const double value = 0.65 * envelope * uniform_real(rng, 0.9, 1.1);
      p.pv_kwh_per_kw[t] = has_pv ? round6(value) : 0.0;
    }

    // Morning/evening double peak over a small base, scaled to a daily
    // total in roughly the 9-18 kWh band.
    std::array<double, kPeriodsPerDay> shape{};
    double shape_sum = 0.0;
    for (int t = 0; t < kPeriodsPerDay; ++t) {
      const double morning = 0.8 * std::exp(-0.5 * std::pow((t - 7.5) / 1.5, 2));
      const double evening = 1.0 * std::exp(-0.5 * std::pow((t - 19.0) / 2.5, 2));
      shape[t] = 0.2 + morning + evening;
      shape_sum += shape[t];
    }
    const double daily_total = uniform_real(rng, 9.0, 18.0);
    for (int t = 0; t < kPeriodsPerDay; ++t) {
      p.load_kwh[t] = round6(daily_total * shape[t] / shape_sum *
                             uniform_real(rng, 0.9, 1.1));
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace gridmarket
