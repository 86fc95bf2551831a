#include "gridmarket/zip_trader.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gridmarket/rng.hpp"
#include "gridmarket/util.hpp"

namespace gridmarket {

void ZipTrader::set_limits(PriceCc tou, PriceCc fit, Role role) {
  if (tou <= fit) {
    throw std::invalid_argument(strformat(
        "degenerate market: ToU rate (%lld) must exceed FiT (%lld)",
        static_cast<long long>(tou), static_cast<long long>(fit)));
  }
  role_ = role;
  if (role == Role::inactive) return;

  limit_ = static_cast<double>(role == Role::buyer ? tou : fit);
  if (!margin_drawn_) {
    margin_drawn_ = true;
    const double m =
        role == Role::buyer
            ? uniform_real(rng_, params_.buyer_margin_lo, params_.buyer_margin_hi)
            : uniform_real(rng_, params_.seller_margin_lo,
                           params_.seller_margin_hi);
    quote_ = limit_ * (1.0 + m);
  }
  quote_ = clamp_to_limits(quote_);
}

void ZipTrader::observe(const MarketEvent& event) {
  if (role_ == Role::inactive) {
    throw std::logic_error("inactive trader cannot observe market events");
  }
  const double p = static_cast<double>(event.price);

  enum class Dir { none, up, down };
  Dir dir = Dir::none;
  if (role_ == Role::buyer) {
    if (event.matched) {
      if (quote_ >= p) {
        dir = Dir::down;
      } else if (event.side == Side::ask && quote_ <= p) {
        dir = Dir::up;
      }
    } else if (event.side == Side::bid && quote_ <= p) {
      dir = Dir::up;
    }
  } else {  // seller
    if (event.matched) {
      if (quote_ <= p) {
        dir = Dir::up;
      } else if (event.side == Side::bid && quote_ >= p) {
        dir = Dir::down;
      }
    } else if (event.side == Side::ask && quote_ >= p) {
      dir = Dir::down;
    }
  }
  if (dir == Dir::none) return;

  // Target is the event price perturbed past itself in the direction of
  // change; the Widrow-Hoff delta is smoothed by the momentum term.
  double relative, absolute;
  if (dir == Dir::up) {
    relative = uniform_real(rng_, 1.0, 1.05);
    absolute = uniform_real(rng_, 0.0, 0.05) * p;
  } else {
    relative = uniform_real(rng_, 0.95, 1.0);
    absolute = -uniform_real(rng_, 0.0, 0.05) * p;
  }
  const double target = relative * p + absolute;
  const double delta = params_.beta * (target - quote_);
  momentum_term_ = params_.gamma * momentum_term_ + (1.0 - params_.gamma) * delta;

  // The smoothed step must not move the quote against the fired direction.
  double next = quote_ + momentum_term_;
  next = dir == Dir::up ? std::max(next, quote_) : std::min(next, quote_);
  quote_ = clamp_to_limits(next);
}

std::optional<OrderRequest> ZipTrader::make_order(EnergyWh residual) const {
  if (residual < 0) {
    throw std::invalid_argument("residual energy must be non-negative");
  }
  if (role_ == Role::inactive || residual == 0) return std::nullopt;
  OrderRequest req;
  req.side = role_ == Role::buyer ? Side::bid : Side::ask;
  req.price = quote_price();
  req.quantity = residual;
  return req;
}

PriceCc ZipTrader::quote_price() const {
  return static_cast<PriceCc>(std::llround(quote_));
}

double ZipTrader::clamp_to_limits(double quote) const {
  quote = std::max(quote, 0.0);
  if (role_ == Role::buyer) quote = std::min(quote, limit_);
  if (role_ == Role::seller) quote = std::max(quote, limit_);
  return quote;
}

}  // namespace gridmarket
