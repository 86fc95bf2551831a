#pragma once
// Zero-Intelligence-Plus trading agent: quotes from a limit price and an
// adaptive profit margin, updated after every market event by a
// Widrow-Hoff rule with momentum.

#include <cstdint>
#include <optional>
#include <random>

#include "gridmarket/order_book.hpp"
#include "gridmarket/units.hpp"

namespace gridmarket {

enum class Role { buyer, seller, inactive };

inline const char* role_name(Role r) {
  switch (r) {
    case Role::buyer: return "buyer";
    case Role::seller: return "seller";
    default: return "inactive";
  }
}

struct ZipParams {
  double beta = 0.3;    // learning rate, (0, 1]
  double gamma = 0.05;  // momentum coefficient, [0, 1)
  double buyer_margin_lo = -0.35;
  double buyer_margin_hi = -0.05;
  double seller_margin_lo = 0.05;
  double seller_margin_hi = 0.35;
};

// What an agent sees after each submission: the side of the order that was
// just processed and either the trade price (matched) or the order's own
// quoted price (unmatched).
struct MarketEvent {
  Side side = Side::bid;
  PriceCc price = 0;
  bool matched = false;
};

struct OrderRequest {
  Side side = Side::bid;
  PriceCc price = 0;
  EnergyWh quantity = 0;
};

class ZipTrader {
 public:
  ZipTrader(int id, const ZipParams& params, std::uint64_t seed)
      : id_(id), params_(params), rng_(seed) {}

  // Assigns the period role and limit price: buyer limit is the period ToU
  // rate, seller limit is the FiT. The first activation draws the initial
  // margin; afterwards the standing quote carries over, clamped into the
  // new feasible range.
  void set_limits(PriceCc tou, PriceCc fit, Role role);

  // Applies the update branch matching the event, if any: the quote moves
  // toward a perturbed event price, never past its limit and never against
  // the fired direction.
  void observe(const MarketEvent& event);

  // Order at the current quote for the remaining energy; nullopt when
  // inactive or nothing remains.
  std::optional<OrderRequest> make_order(EnergyWh residual) const;

  int id() const { return id_; }
  Role role() const { return role_; }
  PriceCc quote_price() const;  // rounded to integer price units
  double quote_exact() const { return quote_; }
  PriceCc limit_price() const { return static_cast<PriceCc>(limit_); }
  double margin() const { return limit_ > 0.0 ? quote_ / limit_ - 1.0 : 0.0; }

 private:
  double clamp_to_limits(double quote) const;

  int id_;
  ZipParams params_;
  Role role_ = Role::inactive;
  bool margin_drawn_ = false;
  double limit_ = 0.0;          // price units (hundredths of a cent)
  double quote_ = 0.0;          // continuous quote, price units
  double momentum_term_ = 0.0;  // smoothed Widrow-Hoff step
  std::mt19937_64 rng_;
};

}  // namespace gridmarket
