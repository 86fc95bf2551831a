#include "gridmarket/order_book.hpp"

#include <algorithm>

#include "gridmarket/util.hpp"

namespace gridmarket {

namespace {

// Priority orders: best element first. Timestamps are unique within a
// period, so both comparators induce a strict total order and matching is
// deterministic by construction.
bool bid_before(const Order& a, const Order& b) {
  if (a.price != b.price) return a.price > b.price;
  return a.time < b.time;
}

bool ask_before(const Order& a, const Order& b) {
  if (a.price != b.price) return a.price < b.price;
  return a.time < b.time;
}

void erase_trader_order(std::vector<Order>& side, int trader) {
  side.erase(std::remove_if(side.begin(), side.end(),
                            [&](const Order& o) { return o.trader == trader; }),
             side.end());
}

}  // namespace

std::vector<Trade> OrderBook::submit(int trader, Side side, PriceCc price,
                                     EnergyWh quantity) {
  if (!open_) {
    throw MarketError(
        strformat("market closed: cannot submit to period %d", period_));
  }
  if (quantity <= 0) {
    throw std::invalid_argument(
        strformat("malformed order: quantity must be positive (got %lld Wh)",
                  static_cast<long long>(quantity)));
  }
  if (price < 0) {
    throw std::invalid_argument(
        strformat("malformed order: price must be non-negative (got %lld)",
                  static_cast<long long>(price)));
  }

  const auto& opposite = side == Side::bid ? asks_ : bids_;
  for (const Order& o : opposite) {
    if (o.trader == trader) {
      throw MarketError(strformat(
          "self-trade rejected: trader %d holds a resting %s", trader,
          side_name(o.side)));
    }
  }

  // One resting order per trader per side: resubmission replaces.
  erase_trader_order(side == Side::bid ? bids_ : asks_, trader);

  Order incoming;
  incoming.id = next_id_++;
  incoming.trader = trader;
  incoming.side = side;
  incoming.price = price;
  incoming.quantity = quantity;
  incoming.time = next_time_++;
  incoming.period = period_;
  insert_resting(incoming);

  return match(incoming.time);
}

void OrderBook::insert_resting(Order order) {
  auto& book_side = order.side == Side::bid ? bids_ : asks_;
  const auto pos =
      order.side == Side::bid
          ? std::upper_bound(book_side.begin(), book_side.end(), order,
                             bid_before)
          : std::upper_bound(book_side.begin(), book_side.end(), order,
                             ask_before);
  book_side.insert(pos, order);
}

std::vector<Trade> OrderBook::match(std::uint64_t trigger_time) {
  std::vector<Trade> trades;
  while (!bids_.empty() && !asks_.empty()) {
    Order& best_bid = bids_.front();
    Order& best_ask = asks_.front();
    if (best_ask.price > best_bid.price) break;

    // Price of the temporally earlier of the two best orders.
    const PriceCc price =
        best_bid.time <= best_ask.time ? best_bid.price : best_ask.price;
    const EnergyWh qty = std::min(best_bid.quantity, best_ask.quantity);

    Trade trade;
    trade.buyer = best_bid.trader;
    trade.seller = best_ask.trader;
    trade.price = price;
    trade.quantity = qty;
    trade.period = period_;
    trade.time = trigger_time;
    trades.push_back(trade);

    best_bid.quantity -= qty;
    best_ask.quantity -= qty;
    if (best_bid.quantity == 0) bids_.erase(bids_.begin());
    if (best_ask.quantity == 0) asks_.erase(asks_.begin());
  }
  return trades;
}

std::vector<Order> OrderBook::close_period() {
  if (!open_) {
    throw MarketError(strformat("period %d already closed", period_));
  }
  std::vector<Order> residual;
  residual.reserve(bids_.size() + asks_.size());
  for (const Order& o : bids_) residual.push_back(o);
  for (const Order& o : asks_) residual.push_back(o);
  bids_.clear();
  asks_.clear();
  open_ = false;
  return residual;
}

void OrderBook::open_period(int period) {
  if (open_) {
    throw MarketError(
        strformat("period %d still open; close it first", period_));
  }
  period_ = period;
  open_ = true;
  next_time_ = 1;
}

std::optional<PriceCc> OrderBook::best_bid() const {
  if (bids_.empty()) return std::nullopt;
  return bids_.front().price;
}

std::optional<PriceCc> OrderBook::best_ask() const {
  if (asks_.empty()) return std::nullopt;
  return asks_.front().price;
}

}  // namespace gridmarket
