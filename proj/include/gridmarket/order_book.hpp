#pragma once
// Continuous double auction order book with price-time priority, partial
// fills and end-of-period cancellation.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gridmarket/units.hpp"

namespace gridmarket {

enum class Side { bid, ask };

inline const char* side_name(Side s) { return s == Side::bid ? "bid" : "ask"; }

struct Order {
  std::uint64_t id = 0;
  int trader = 0;
  Side side = Side::bid;
  PriceCc price = 0;
  EnergyWh quantity = 0;   // remaining quantity; removed from book at zero
  std::uint64_t time = 0;  // submission ordinal within the period
  int period = 0;
};

struct Trade {
  int buyer = 0;
  int seller = 0;
  PriceCc price = 0;
  EnergyWh quantity = 0;
  int period = 0;
  std::uint64_t time = 0;  // ordinal of the submission that triggered it
};

class MarketError : public std::runtime_error {
 public:
  explicit MarketError(const std::string& what) : std::runtime_error(what) {}
};

// Exclusive-access state machine for a single trading period at a time.
// Matching rule: while the best ask price does not exceed the best bid
// price, trade the minimum remaining quantity of the two best orders at the
// price of the temporally earlier one.
class OrderBook {
 public:
  explicit OrderBook(int period = 0) : period_(period) {}

  // Inserts a new order for the open period and runs the matching loop.
  // A resting order from the same trader on the same side is replaced; a
  // resting order from the same trader on the opposite side rejects the
  // submission (self-trade). Returns trades in execution order.
  std::vector<Trade> submit(int trader, Side side, PriceCc price,
                            EnergyWh quantity);

  // Cancels and returns every resting order (bids first, each side in
  // priority order) and marks the period closed.
  std::vector<Order> close_period();

  // Reopens the book for a new period; resting state must be empty (a
  // closed book always is).
  void open_period(int period);

  std::optional<PriceCc> best_bid() const;
  std::optional<PriceCc> best_ask() const;
  std::pair<std::optional<PriceCc>, std::optional<PriceCc>> best_quotes()
      const {
    return {best_bid(), best_ask()};
  }

  int period() const { return period_; }
  bool is_open() const { return open_; }
  const std::vector<Order>& bids() const { return bids_; }
  const std::vector<Order>& asks() const { return asks_; }

 private:
  void insert_resting(Order order);
  std::vector<Trade> match(std::uint64_t trigger_time);

  int period_ = 0;
  bool open_ = true;
  std::uint64_t next_id_ = 1;
  std::uint64_t next_time_ = 1;
  std::vector<Order> bids_;  // sorted by (price desc, time asc), best first
  std::vector<Order> asks_;  // sorted by (price asc, time asc), best first
};

}  // namespace gridmarket
