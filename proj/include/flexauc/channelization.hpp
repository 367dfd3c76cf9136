#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "flexauc/auction.hpp"
#include "flexauc/errors.hpp"
#include "flexauc/random.hpp"
#include "flexauc/scenario.hpp"
#include "flexauc/strategy.hpp"

namespace flexauc {

inline constexpr std::size_t kDefaultChannelCap = 64;

/// Largest C that leaves a positive channel width: floor((B0 - b0) / b0).
/// Without a guard band the count is unbounded and `cap` is returned.
inline std::size_t max_channels(double total_bandwidth_hz, double guard_band_hz,
                                std::size_t cap = kDefaultChannelCap) {
  if (!(guard_band_hz >= 0.0) || !(total_bandwidth_hz > guard_band_hz)) {
    throw domain_error("max_channels: need B0 > b0 >= 0");
  }
  if (guard_band_hz == 0.0) {
    return cap;
  }
  // The ratio of two decimal MHz figures can land one ulp under an integer.
  const double ratio = (total_bandwidth_hz - guard_band_hz) / guard_band_hz;
  const auto c = static_cast<std::size_t>(std::floor(ratio * (1.0 + 1e-12)));
  return std::max<std::size_t>(c, 1);
}

enum class SearchMode { exhaustive, binary };

inline SearchMode parse_search_mode(std::string_view s) {
  if (s == "exhaustive") return SearchMode::exhaustive;
  if (s == "binary") return SearchMode::binary;
  throw config_error("unknown search mode '" + std::string(s) + "'");
}

struct SweepPoint {
  std::size_t channels = 0;
  double channel_hz = 0.0;
  double indicator = 0.0;
};

struct ChannelizationResult {
  std::size_t best_channels = 0;
  double indicator_value = 0.0;
  std::vector<SweepPoint> sweep;  // C = 1..c_max
  std::size_t c_max = 0;
  SearchMode search = SearchMode::exhaustive;
  std::size_t binary_evaluations = 0;  // indicator evaluations made by binary mode
};

/// Bid matrix the spectrum holder expects when it sells C channels.
inline BidMatrix estimated_bid_matrix(const std::vector<Estimates>& estimates, double total_bandwidth_hz,
                                      double guard_band_hz, std::size_t channels) {
  std::vector<std::vector<double>> rows;
  rows.reserve(estimates.size());
  for (const auto& est : estimates) {
    std::vector<double> row;
    row.reserve(channels);
    for (std::size_t k = 1; k <= channels; ++k) {
      const double b = estimated_bid(est, total_bandwidth_hz, guard_band_hz, channels, k);
      // h(k) is decreasing, so rows only rise by rounding; flatten that.
      row.push_back(row.empty() ? b : std::min(b, row.back()));
    }
    rows.push_back(std::move(row));
  }
  return BidMatrix(rows);
}

inline double estimated_indicator(const std::vector<Estimates>& estimates, double total_bandwidth_hz,
                                  double guard_band_hz, std::size_t channels) {
  return revenue_indicator(estimated_bid_matrix(estimates, total_bandwidth_hz, guard_band_hz, channels),
                           channels);
}

/// SH's channel count: argmax over C in [1, C_MAX] of C * b^s_{C+1} on the
/// estimated bids, smallest C on ties.
///
/// Exhaustive mode is the reference. Binary mode searches for a peak
/// assuming unimodality and throws non_unimodal_error when that peak is not
/// the exhaustive optimum.
inline ChannelizationResult optimize_channel_count(const std::vector<Estimates>& estimates,
                                                   double total_bandwidth_hz, double guard_band_hz,
                                                   SearchMode search = SearchMode::exhaustive,
                                                   std::size_t cap = kDefaultChannelCap) {
  if (estimates.size() < 2) {
    throw domain_error("optimize_channel_count: need estimates for at least two WSPs");
  }
  ChannelizationResult result;
  result.search = search;
  result.c_max = max_channels(total_bandwidth_hz, guard_band_hz, cap);
  result.sweep.reserve(result.c_max);
  for (std::size_t c = 1; c <= result.c_max; ++c) {
    result.sweep.push_back({c, channel_bandwidth(total_bandwidth_hz, guard_band_hz, c),
                            estimated_indicator(estimates, total_bandwidth_hz, guard_band_hz, c)});
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.sweep.size(); ++i) {
    if (result.sweep[i].indicator > result.sweep[best].indicator) best = i;
  }
  if (!(result.sweep[best].indicator > 0.0)) {
    throw degenerate_market_error("optimize_channel_count: every channel count yields a zero indicator");
  }
  result.best_channels = result.sweep[best].channels;
  result.indicator_value = result.sweep[best].indicator;

  if (search == SearchMode::binary) {
    auto eval = [&](std::size_t c) {
      ++result.binary_evaluations;
      return estimated_indicator(estimates, total_bandwidth_hz, guard_band_hz, c);
    };
    std::size_t lo = 1;
    std::size_t hi = result.c_max;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (eval(mid) < eval(mid + 1)) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    const double found = eval(lo);
    if (found != result.indicator_value) {
      std::ostringstream msg;
      msg << "binary channel search stopped at C = " << lo << " (indicator " << found
          << ") but the exhaustive optimum is C = " << result.best_channels << " (indicator "
          << result.indicator_value << "); the indicator is not unimodal in C";
      throw non_unimodal_error(msg.str());
    }
    result.best_channels = lo;
  }
  return result;
}

/// SH estimates of every WSP: the true (alpha, G), each scaled by an
/// independent factor uniform in [1 - noise, 1 + noise] when noise > 0.
inline std::vector<Estimates> estimates_from_scenario(const Scenario& scenario, double noise = 0.0,
                                                      std::uint64_t seed = 0) {
  if (!(noise >= 0.0 && noise < 1.0)) {
    throw config_error("estimates: noise must lie in [0, 1)");
  }
  std::vector<Estimates> out;
  out.reserve(scenario.wsps.size());
  const Rng master(seed);
  for (std::size_t i = 0; i < scenario.wsps.size(); ++i) {
    const auto& w = scenario.wsps[i];
    Estimates e{w.alpha, w.aggregate_gain_hz};
    if (noise > 0.0) {
      Rng rng = master.substream(i);
      e.alpha_est *= rng.uniform(1.0 - noise, 1.0 + noise);
      e.gain_est_hz *= rng.uniform(1.0 - noise, 1.0 + noise);
    }
    out.push_back(e);
  }
  return out;
}

/// Truthful bid matrix of every WSP in the scenario for C channels.
inline BidMatrix truthful_bids(const Scenario& scenario, std::size_t channels) {
  const double width = channel_bandwidth(scenario.block.total_bandwidth_hz, scenario.block.guard_band_hz, channels);
  std::vector<BidVector> rows;
  rows.reserve(scenario.wsps.size());
  for (const auto& w : scenario.wsps) {
    rows.push_back(true_bid_vector(w.alpha, w.aggregate_gain_hz, width, channels));
  }
  return BidMatrix(rows);
}

}  // namespace flexauc
