#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gridmarket/hems.hpp"

namespace gridmarket {

// One household-day as stored on disk: the PV column is a 1 kW reference
// shape, scaled by each household's installed capacity at load time.
struct HouseholdProfile {
  int household = 0;
  std::array<double, kPeriodsPerDay> load_kwh{};
  std::array<double, kPeriodsPerDay> pv_kwh_per_kw{};
};

using ProfileSet = std::vector<HouseholdProfile>;

ProfileSet parse_profiles(std::istream& in, const std::string& source_name);
ProfileSet load_profiles_file(const std::string& path);
std::string profiles_csv(const ProfileSet& profiles);

// load/pv in kWh for the household's actual installation. Scaling a
// nonzero reference by zero capacity is fine; a household with no PV
// configured but nonzero reference PV is rejected only by the caller who
// knows which is which (see scale_profiles).
struct ScaledProfile {
  int household = 0;
  std::array<double, kPeriodsPerDay> load_kwh{};
  std::array<double, kPeriodsPerDay> pv_kwh{};
};

// pv_kw: household id -> installed capacity. Every listed household must
// appear in the set; a household with zero capacity must carry an all-zero
// reference PV column (a silent drop would hide bad data).
std::vector<ScaledProfile> scale_profiles(
    const ProfileSet& profiles, const std::vector<std::pair<int, double>>& pv_kw);

// Deterministic stand-in data: PV is a derated half-sine over 06:00-18:00,
// load a morning/evening double peak totalling 8-20 kWh/day. Households in
// pv_less get an all-zero PV column (no panels installed); their load draws
// are unaffected by membership in that list.
ProfileSet generate_synthetic_profiles(std::uint64_t seed,
                                       const std::vector<int>& households,
                                       const std::vector<int>& pv_less = {});

}  // namespace gridmarket
