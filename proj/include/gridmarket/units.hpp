#pragma once
// Integer money and energy units shared by the market, settlement and
// reporting code. Prices are hundredths of a cent per kWh and quantities are
// watt-hours, so every cash amount is an exact 64-bit integer product and
// settlement never drifts.

#include <cmath>
#include <cstdint>

namespace gridmarket {

using PriceCc = std::int64_t;   // hundredths of a cent per kWh (6.1 c/kWh = 610)
using EnergyWh = std::int64_t;  // watt-hours (1 kWh = 1000)
using Cash = std::int64_t;      // PriceCc * EnergyWh, i.e. units of 1e-5 cents

constexpr double kPriceUnitsPerCent = 100.0;
constexpr double kWhPerKilowattHour = 1000.0;
constexpr double kCashUnitsPerCent = 1e5;
constexpr double kCashUnitsPerDollar = 1e7;

inline PriceCc price_from_cents(double cents) {
  return std::llround(cents * kPriceUnitsPerCent);
}

inline double price_cents(PriceCc price) {
  return static_cast<double>(price) / kPriceUnitsPerCent;
}

inline EnergyWh energy_from_kwh(double kwh) {
  return std::llround(kwh * kWhPerKilowattHour);
}

inline double energy_kwh(EnergyWh wh) {
  return static_cast<double>(wh) / kWhPerKilowattHour;
}

inline Cash cash_value(PriceCc price, EnergyWh quantity) {
  return price * quantity;
}

inline double cash_cents(Cash c) {
  return static_cast<double>(c) / kCashUnitsPerCent;
}

inline double cash_dollars(Cash c) {
  return static_cast<double>(c) / kCashUnitsPerDollar;
}

}  // namespace gridmarket
