#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "flexauc/errors.hpp"
#include "flexauc/scenario.hpp"

namespace flexauc {

// Stage V: end users' demand response.

/// Bandwidth a user with gain g subscribes at unit price p: g * e^(-1 - p/alpha).
inline double optimal_user_demand(double g_hz, double price, double alpha) {
  return g_hz * std::exp(-1.0 - price / alpha);
}

/// alpha * w * ln(1 + g/w) - p * w, or the approximation with ln(g/w) used
/// for the closed-form strategies. Zero at w = 0.
inline double user_utility(double g_hz, double price, double alpha, double w_hz, bool exact) {
  if (w_hz <= 0.0) {
    return 0.0;
  }
  const double log_term = exact ? std::log1p(g_hz / w_hz) : std::log(g_hz / w_hz);
  return alpha * w_hz * log_term - price * w_hz;
}

// Stage IV: WSP pricing.

enum class PriceRegime { abundant, scarce };

struct PriceDecision {
  double price_per_hz = 0.0;
  PriceRegime regime = PriceRegime::abundant;
};

/// Revenue-maximizing unit price for K channels of width B.
///
/// Abundant (K*B > G e^-2): users' demand at price alpha fits, price stays alpha.
/// Scarce: the price rises until aggregate demand equals K*B.
inline PriceDecision optimal_price(double alpha, double aggregate_gain_hz, std::size_t channels,
                                   double channel_hz) {
  const double supply = static_cast<double>(channels) * channel_hz;
  if (supply > aggregate_gain_hz * std::exp(-2.0)) {
    return {alpha, PriceRegime::abundant};
  }
  return {alpha * (std::log(aggregate_gain_hz / supply) - 1.0), PriceRegime::scarce};
}

/// What the WSP collects from its users holding K channels at the optimal
/// price: p* times aggregate demand capped at K*B. Zero for K = 0.
inline double wsp_gross_revenue(double alpha, double aggregate_gain_hz, std::size_t channels,
                                double channel_hz) {
  if (channels == 0) {
    return 0.0;
  }
  const double supply = static_cast<double>(channels) * channel_hz;
  const auto decision = optimal_price(alpha, aggregate_gain_hz, channels, channel_hz);
  if (decision.regime == PriceRegime::abundant) {
    return alpha * aggregate_gain_hz * std::exp(-2.0);
  }
  return decision.price_per_hz * supply;
}

/// Full WSP utility for a given user price: price * min(demand, K*B) - payment.
inline double wsp_utility(double alpha, double aggregate_gain_hz, std::size_t channels, double channel_hz,
                          double price, double payment) {
  const double demand = optimal_user_demand(aggregate_gain_hz, price, alpha);
  return price * std::min(demand, static_cast<double>(channels) * channel_hz) - payment;
}

// Stage III: truthful bids.

/// Ordinal marginal bids b_1..b_C; truthful vectors are non-increasing.
struct BidVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }

  bool is_non_increasing(double tol = 0.0) const {
    for (std::size_t k = 1; k < values.size(); ++k) {
      if (values[k] > values[k - 1] + tol) {
        return false;
      }
    }
    return true;
  }

  bool operator==(const BidVector&) const = default;
};

/// True value of each additional channel: gross(k) - gross(k - 1).
///
/// Entries are clamped at zero, and rounding-level increases between
/// neighbours are flattened so the vector is exactly non-increasing.
inline BidVector true_bid_vector(double alpha, double aggregate_gain_hz, double channel_hz,
                                 std::size_t channels) {
  if (channels == 0) {
    throw domain_error("true_bid_vector: need at least one channel");
  }
  BidVector bids;
  bids.values.reserve(channels);
  double previous = 0.0;
  for (std::size_t k = 1; k <= channels; ++k) {
    const double gross = wsp_gross_revenue(alpha, aggregate_gain_hz, k, channel_hz);
    double marginal = std::max(0.0, gross - previous);
    if (!bids.values.empty()) {
      marginal = std::min(marginal, bids.values.back());
    }
    bids.values.push_back(marginal);
    previous = gross;
  }
  return bids;
}

// Spectrum holder's view of a WSP.

struct Estimates {
  double alpha_est = 0.0;
  double gain_est_hz = 0.0;
};

/// (k-1)^(k-1) / k^k with h(1) = 1.
inline double marginal_shape(std::size_t k) {
  if (k == 0) {
    throw domain_error("marginal_shape: k must be positive");
  }
  if (k == 1) {
    return 1.0;
  }
  // (1/k) * (1 - 1/k)^(k-1)
  const double kk = static_cast<double>(k);
  return std::exp((kk - 1.0) * std::log1p(-1.0 / kk)) / kk;
}

/// Closed-form estimate of the k-th marginal bid when the block is cut into C
/// channels: alpha * B * (ln(G h(k) / B) - 1), clamped at zero.
inline double estimated_bid(const Estimates& est, double total_bandwidth_hz, double guard_band_hz,
                            std::size_t channels, std::size_t k) {
  if (k == 0 || k > channels) {
    throw domain_error("estimated_bid: need 1 <= k <= C");
  }
  const double width = channel_bandwidth(total_bandwidth_hz, guard_band_hz, channels);
  const double bid = est.alpha_est * width * (std::log(est.gain_est_hz * marginal_shape(k) / width) - 1.0);
  return std::max(0.0, bid);
}

}  // namespace flexauc
