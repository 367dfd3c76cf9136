#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flexauc/errors.hpp"
#include "flexauc/strategy.hpp"

namespace flexauc {

enum class Mechanism { vcg, uniform, partial_uniform, onebid };

inline std::string_view to_string(Mechanism m) {
  switch (m) {
    case Mechanism::vcg:
      return "vcg";
    case Mechanism::uniform:
      return "uniform";
    case Mechanism::partial_uniform:
      return "partial-uniform";
    case Mechanism::onebid:
      return "onebid";
  }
  return "unknown";
}

inline Mechanism parse_mechanism(std::string_view s) {
  if (s == "vcg") return Mechanism::vcg;
  if (s == "uniform") return Mechanism::uniform;
  if (s == "partial-uniform" || s == "partial_uniform") return Mechanism::partial_uniform;
  if (s == "onebid") return Mechanism::onebid;
  throw config_error("unknown mechanism '" + std::string(s) + "'");
}

/// N x C marginal bids, row i belonging to WSP i (0-based here, id i + 1
/// elsewhere). Rows must be non-increasing: that is the strategy space the
/// auction accepts.
class BidMatrix {
 public:
  BidMatrix() = default;

  explicit BidMatrix(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) {
      throw domain_error("bid matrix: need at least one WSP");
    }
    wsps_ = rows.size();
    channels_ = rows.front().size();
    if (channels_ == 0) {
      throw domain_error("bid matrix: rows must be non-empty");
    }
    values_.reserve(wsps_ * channels_);
    for (std::size_t i = 0; i < wsps_; ++i) {
      if (rows[i].size() != channels_) {
        throw domain_error("bid matrix: rows must all have length " + std::to_string(channels_));
      }
      for (std::size_t k = 0; k < channels_; ++k) {
        const double v = rows[i][k];
        if (!std::isfinite(v) || v < 0.0) {
          throw domain_error("bid matrix: bids must be finite and non-negative (wsp " +
                             std::to_string(i + 1) + ", rank " + std::to_string(k + 1) + ")");
        }
        if (k > 0 && v > rows[i][k - 1]) {
          throw domain_error("bid matrix: row of wsp " + std::to_string(i + 1) +
                             " increases at rank " + std::to_string(k + 1));
        }
        values_.push_back(v);
      }
    }
  }

  explicit BidMatrix(const std::vector<BidVector>& rows) : BidMatrix(to_rows(rows)) {}

  std::size_t wsp_count() const { return wsps_; }
  std::size_t channel_count() const { return channels_; }
  std::size_t size() const { return values_.size(); }

  double operator()(std::size_t wsp, std::size_t rank) const { return values_[wsp * channels_ + rank]; }

  std::span<const double> row(std::size_t wsp) const {
    return {values_.data() + wsp * channels_, channels_};
  }

  std::vector<std::vector<double>> rows() const {
    std::vector<std::vector<double>> out;
    out.reserve(wsps_);
    for (std::size_t i = 0; i < wsps_; ++i) {
      const auto r = row(i);
      out.emplace_back(r.begin(), r.end());
    }
    return out;
  }

  // Copy with one WSP's row replaced.
  BidMatrix with_row(std::size_t wsp, const std::vector<double>& replacement) const {
    auto r = rows();
    r.at(wsp) = replacement;
    return BidMatrix(r);
  }

  bool operator==(const BidMatrix&) const = default;

 private:
  static std::vector<std::vector<double>> to_rows(const std::vector<BidVector>& rows) {
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
      out.push_back(r.values);
    }
    return out;
  }

  std::size_t wsps_ = 0;
  std::size_t channels_ = 0;
  std::vector<double> values_;
};

struct RankedBid {
  double value = 0.0;
  std::size_t wsp = 0;
  std::size_t rank = 0;  // 0-based position within the WSP's row

  bool operator==(const RankedBid&) const = default;
};

// Total order used everywhere a bid is ranked: value descending, then WSP
// index ascending, then rank ascending.
inline bool outranks(const RankedBid& a, const RankedBid& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.wsp != b.wsp) return a.wsp < b.wsp;
  return a.rank < b.rank;
}

// Operation counters for the selection heap.
struct SelectionStats {
  std::size_t comparisons = 0;
  std::size_t pushes = 0;
  std::size_t pops = 0;
};

/// The `count` highest bids in descending order.
///
/// Rows are non-increasing, so the best remaining bid is always the head of
/// some row: a max-heap over the N row heads is built once, and each pop
/// pushes that row's next bid. Cost O(N + count log N); the N*C matrix is
/// never sorted.
inline std::vector<RankedBid> top_bids(const BidMatrix& bids, std::size_t count,
                                       SelectionStats* stats = nullptr) {
  if (count > bids.size()) {
    throw domain_error("top_bids: asked for " + std::to_string(count) + " of " +
                       std::to_string(bids.size()) + " bids");
  }
  auto lower_priority = [stats](const RankedBid& a, const RankedBid& b) {
    if (stats) ++stats->comparisons;
    return outranks(b, a);
  };
  std::vector<RankedBid> heads;
  heads.reserve(bids.wsp_count());
  for (std::size_t i = 0; i < bids.wsp_count(); ++i) {
    heads.push_back({bids(i, 0), i, 0});
  }
  std::priority_queue<RankedBid, std::vector<RankedBid>, decltype(lower_priority)> heap(
      lower_priority, std::move(heads));
  if (stats) stats->pushes += bids.wsp_count();

  std::vector<RankedBid> out;
  out.reserve(count);
  while (out.size() < count) {
    const RankedBid best = heap.top();
    heap.pop();
    if (stats) ++stats->pops;
    out.push_back(best);
    if (best.rank + 1 < bids.channel_count()) {
      heap.push({bids(best.wsp, best.rank + 1), best.wsp, best.rank + 1});
      if (stats) ++stats->pushes;
    }
  }
  return out;
}

/// Winning channel counts K_i; they always sum to C.
struct Allocation {
  std::vector<std::size_t> counts;

  std::size_t total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

  bool operator==(const Allocation&) const = default;
};

struct WinnerDetermination {
  Allocation allocation;
  std::vector<double> winning_values;  // b^s_1 >= ... >= b^s_C
};

/// Selects the C globally highest bids; each WSP wins the first K_i entries
/// of its row.
inline WinnerDetermination determine_winners(const BidMatrix& bids, std::size_t channels,
                                             SelectionStats* stats = nullptr) {
  if (channels < 1) {
    throw domain_error("determine_winners: need at least one channel");
  }
  const auto top = top_bids(bids, channels, stats);
  WinnerDetermination result;
  result.allocation.counts.assign(bids.wsp_count(), 0);
  result.winning_values.reserve(channels);
  for (const auto& b : top) {
    ++result.allocation.counts[b.wsp];
    result.winning_values.push_back(b.value);
  }
  return result;
}

/// Value of the k-th highest bid (1-based) under the total order.
inline double kth_highest(const BidMatrix& bids, std::size_t k) {
  if (k < 1 || k > bids.size()) {
    throw domain_error("kth_highest: rank " + std::to_string(k) + " outside [1, " +
                       std::to_string(bids.size()) + "]");
  }
  return top_bids(bids, k).back().value;
}

namespace detail {

inline void check_allocation(const BidMatrix& bids, const Allocation& allocation) {
  if (allocation.counts.size() != bids.wsp_count()) {
    throw domain_error("allocation does not match the bid matrix");
  }
  for (const auto k : allocation.counts) {
    if (k > bids.channel_count()) {
      throw domain_error("allocation gives a WSP more channels than it bid for");
    }
  }
}

}  // namespace detail

/// Each winner pays the K_i highest losing bids submitted by others.
///
/// Only the top 2C bids are needed: at most C - K_i of the C losing ranks in
/// that window belong to the winner itself.
inline std::vector<double> vcg_payments(const BidMatrix& bids, const Allocation& allocation,
                                        SelectionStats* stats = nullptr) {
  detail::check_allocation(bids, allocation);
  if (bids.wsp_count() < 2) {
    throw mechanism_error("vcg: needs at least two WSPs");
  }
  const std::size_t channels = allocation.total();
  const auto window = top_bids(bids, std::min(2 * channels, bids.size()), stats);
  std::vector<double> payments(bids.wsp_count(), 0.0);
  for (std::size_t i = 0; i < bids.wsp_count(); ++i) {
    std::size_t needed = allocation.counts[i];
    for (std::size_t j = channels; needed > 0 && j < window.size(); ++j) {
      if (window[j].wsp != i) {
        payments[i] += window[j].value;
        --needed;
      }
    }
    if (needed > 0) {
      throw mechanism_error("vcg: top-2C window exhausted for wsp " + std::to_string(i + 1));
    }
  }
  return payments;
}

/// One clearing price for every channel: the highest top bid among WSPs that
/// won nothing. Defined only for C < N, where such a WSP must exist.
inline std::vector<double> uniform_payments(const BidMatrix& bids, const Allocation& allocation) {
  detail::check_allocation(bids, allocation);
  const std::size_t channels = allocation.total();
  if (channels >= bids.wsp_count()) {
    throw mechanism_error("uniform: requires C < N (C = " + std::to_string(channels) +
                          ", N = " + std::to_string(bids.wsp_count()) + ")");
  }
  double price = 0.0;
  for (std::size_t i = 0; i < bids.wsp_count(); ++i) {
    if (allocation.counts[i] == 0) {
      price = std::max(price, bids(i, 0));
    }
  }
  std::vector<double> payments(bids.wsp_count(), 0.0);
  for (std::size_t i = 0; i < bids.wsp_count(); ++i) {
    payments[i] = price * static_cast<double>(allocation.counts[i]);
  }
  return payments;
}

/// Highest losing bid of each WSP: b_{K_i + 1}, or 0 when it won every rank.
inline std::vector<double> max_loser_bids(const BidMatrix& bids, const Allocation& allocation) {
  detail::check_allocation(bids, allocation);
  std::vector<double> out(bids.wsp_count(), 0.0);
  for (std::size_t i = 0; i < bids.wsp_count(); ++i) {
    const std::size_t k = allocation.counts[i];
    out[i] = k < bids.channel_count() ? bids(i, k) : 0.0;
  }
  return out;
}

/// Each winner pays, per channel, the highest losing bid among the other
/// WSPs. Found from the two largest max-loser bids; the owner of the largest
/// is priced by the second.
inline std::vector<double> partial_uniform_payments(const BidMatrix& bids, const Allocation& allocation) {
  if (bids.wsp_count() < 2) {
    throw mechanism_error("partial-uniform: needs at least two WSPs");
  }
  const auto losers = max_loser_bids(bids, allocation);
  std::size_t first = 0;
  for (std::size_t i = 1; i < losers.size(); ++i) {
    if (losers[i] > losers[first]) first = i;
  }
  double second = 0.0;
  for (std::size_t i = 0; i < losers.size(); ++i) {
    if (i != first) second = std::max(second, losers[i]);
  }
  std::vector<double> payments(bids.wsp_count(), 0.0);
  for (std::size_t i = 0; i < bids.wsp_count(); ++i) {
    const double unit = i == first ? second : losers[first];
    payments[i] = unit * static_cast<double>(allocation.counts[i]);
  }
  return payments;
}

/// C times the (C+1)-th highest bid: an upper bound on revenue for every
/// payment rule here.
inline double revenue_indicator(const BidMatrix& bids, std::size_t channels) {
  if (channels + 1 > bids.size()) {
    throw domain_error("revenue_indicator: rank C+1 does not exist");
  }
  return static_cast<double>(channels) * kth_highest(bids, channels + 1);
}

struct AuctionOutcome {
  Allocation allocation;
  std::vector<double> payments;
  Mechanism mechanism = Mechanism::vcg;
  std::size_t channels = 0;
  double revenue = 0.0;
  double welfare = 0.0;
  std::optional<double> indicator;  // absent when rank C+1 does not exist
  std::vector<double> winning_values;
};

/// Sum of each WSP's first K_i values in `values`.
inline double allocated_value(const BidMatrix& values, const Allocation& allocation) {
  double total = 0.0;
  for (std::size_t i = 0; i < values.wsp_count(); ++i) {
    for (std::size_t k = 0; k < allocation.counts[i]; ++k) {
      total += values(i, k);
    }
  }
  return total;
}

namespace detail {

inline double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x;
  return s;
}

}  // namespace detail

/// OneBid baseline: each WSP submits one bid and wins at most one channel.
/// Winners pay the highest non-winning bid (0 if every WSP wins).
inline AuctionOutcome onebid_auction(std::span<const double> first_bids, std::size_t channels) {
  if (first_bids.empty()) {
    throw domain_error("onebid: need at least one WSP");
  }
  if (channels < 1) {
    throw domain_error("onebid: need at least one channel");
  }
  const std::size_t n = first_bids.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return first_bids[a] > first_bids[b]; });

  const std::size_t winners = std::min(n, channels);
  const double price = n > channels ? first_bids[order[channels]] : 0.0;

  AuctionOutcome out;
  out.mechanism = Mechanism::onebid;
  out.channels = channels;
  out.allocation.counts.assign(n, 0);
  out.payments.assign(n, 0.0);
  for (std::size_t r = 0; r < winners; ++r) {
    const std::size_t i = order[r];
    out.allocation.counts[i] = 1;
    out.payments[i] = price;
    out.winning_values.push_back(first_bids[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (out.allocation.counts[i] == 1) out.welfare += first_bids[i];
  }
  out.revenue = detail::sum(out.payments);
  // Submitted matrix is {b_1, 0, ..., 0} per WSP.
  if (n * channels >= channels + 1) {
    out.indicator = static_cast<double>(channels) * (channels < n ? first_bids[order[channels]] : 0.0);
  }
  return out;
}

/// Winner determination plus the chosen payment rule.
inline AuctionOutcome run_auction(const BidMatrix& bids, std::size_t channels, Mechanism mechanism) {
  if (channels != bids.channel_count()) {
    throw domain_error("run_auction: bid rows have " + std::to_string(bids.channel_count()) +
                       " entries but C = " + std::to_string(channels));
  }
  if (mechanism == Mechanism::onebid) {
    std::vector<double> first(bids.wsp_count());
    for (std::size_t i = 0; i < bids.wsp_count(); ++i) first[i] = bids(i, 0);
    return onebid_auction(first, channels);
  }
  auto winners = determine_winners(bids, channels);
  AuctionOutcome out;
  out.mechanism = mechanism;
  out.channels = channels;
  switch (mechanism) {
    case Mechanism::vcg:
      out.payments = vcg_payments(bids, winners.allocation);
      break;
    case Mechanism::uniform:
      out.payments = uniform_payments(bids, winners.allocation);
      break;
    case Mechanism::partial_uniform:
      out.payments = partial_uniform_payments(bids, winners.allocation);
      break;
    case Mechanism::onebid:
      break;
  }
  out.allocation = std::move(winners.allocation);
  out.winning_values = std::move(winners.winning_values);
  out.revenue = detail::sum(out.payments);
  out.welfare = allocated_value(bids, out.allocation);
  if (channels + 1 <= bids.size()) {
    out.indicator = revenue_indicator(bids, channels);
  }
  return out;
}

}  // namespace flexauc
