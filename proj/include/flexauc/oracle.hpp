#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "flexauc/auction.hpp"
#include "flexauc/errors.hpp"
#include "flexauc/random.hpp"
#include "flexauc/strategy.hpp"

// Independent checkers for the auction's economic properties. Nothing here
// calls the winner determination or payment code except where a check runs
// the auction under test and compares it against its own recomputation.
namespace flexauc::oracle {

inline constexpr double kTolerance = 1e-9;
inline constexpr double kEnumerationGuard = 1e7;

/// Number of ways to write C as an ordered sum of N non-negative parts.
inline double composition_count(std::size_t wsps, std::size_t channels) {
  // binomial(C + N - 1, N - 1) in floating point so large cases saturate
  // instead of overflowing.
  const std::size_t n = channels + wsps - 1;
  const std::size_t k = std::min(wsps - 1, channels);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return c;
}

struct WelfareOptimum {
  double welfare = 0.0;
  Allocation witness;
};

namespace detail {

// Scores with the same summation order as a row-major pass, so equal
// allocations give bit-identical totals.
inline double score(const BidMatrix& bids, const std::vector<std::size_t>& counts) {
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t k = 0; k < counts[i]; ++k) {
      total += bids(i, k);
    }
  }
  return total;
}

inline void enumerate(const BidMatrix& bids, std::size_t wsp, std::size_t remaining,
                      std::vector<std::size_t>& counts, WelfareOptimum& best, bool& have_best) {
  const std::size_t n = bids.wsp_count();
  if (wsp + 1 == n) {
    if (remaining > bids.channel_count()) return;
    counts[wsp] = remaining;
    const double s = score(bids, counts);
    if (!have_best || s > best.welfare) {
      best.welfare = s;
      best.witness.counts = counts;
      have_best = true;
    }
    return;
  }
  const std::size_t top = std::min(remaining, bids.channel_count());
  for (std::size_t k = 0; k <= top; ++k) {
    counts[wsp] = k;
    enumerate(bids, wsp + 1, remaining - k, counts, best, have_best);
  }
}

}  // namespace detail

/// Maximum of sum_i sum_{k <= K_i} b^i_k over every {K_i >= 0, sum K_i = C}.
inline WelfareOptimum brute_force_welfare(const BidMatrix& bids, std::size_t channels) {
  if (channels < 1 || channels > bids.size()) {
    throw domain_error("brute_force_welfare: C outside [1, N*C]");
  }
  if (composition_count(bids.wsp_count(), channels) > kEnumerationGuard) {
    throw oracle_scale_error("brute_force_welfare: more than 1e7 allocations to enumerate");
  }
  WelfareOptimum best;
  bool have_best = false;
  std::vector<std::size_t> counts(bids.wsp_count(), 0);
  detail::enumerate(bids, 0, channels, counts, best, have_best);
  return best;
}

/// Random non-increasing bid matrix. Integer-valued entries in [0, max_value]
/// when `integral`, otherwise reals in [0, max_value).
inline BidMatrix random_bid_matrix(std::size_t wsps, std::size_t channels, Rng& rng, double max_value = 100.0,
                                   bool integral = false) {
  std::vector<std::vector<double>> rows(wsps, std::vector<double>(channels));
  for (auto& row : rows) {
    for (auto& v : row) {
      v = integral ? static_cast<double>(rng.uniform_int(0, static_cast<std::uint64_t>(max_value)))
                   : rng.uniform(0.0, max_value);
    }
    std::sort(row.begin(), row.end(), std::greater<>());
  }
  return BidMatrix(rows);
}

/// Strategic deviation within the monotone strategy space: each entry scaled
/// by a factor uniform in [0.5, 1.5], then repaired by running maxima from
/// the tail. Redrawn until it differs from the input. An all-zero input is
/// lifted by uniform draws in [0, 1) instead, since scaling cannot move it.
inline BidVector perturb_bids(const BidVector& truthful, Rng& rng) {
  if (!truthful.is_non_increasing()) {
    throw domain_error("perturb_bids: input must be non-increasing");
  }
  const bool all_zero =
      std::all_of(truthful.values.begin(), truthful.values.end(), [](double v) { return v == 0.0; });
  BidVector out;
  do {
    out.values = truthful.values;
    for (auto& v : out.values) {
      v = all_zero ? rng.uniform() : v * rng.uniform(0.5, 1.5);
    }
    for (std::size_t k = out.values.size(); k-- > 1;) {
      out.values[k - 1] = std::max(out.values[k - 1], out.values[k]);
    }
  } while (out == truthful);
  return out;
}

enum class Relation { less, equal, greater };

inline std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::less:
      return "less";
    case Relation::equal:
      return "equal";
    case Relation::greater:
      return "greater";
  }
  return "unknown";
}

inline Relation classify(double deviant, double truthful, double tol = kTolerance) {
  if (deviant > truthful + tol) return Relation::greater;
  if (deviant < truthful - tol) return Relation::less;
  return Relation::equal;
}

struct TruthTrial {
  std::size_t wsp = 0;  // 0-based row
  Mechanism mechanism = Mechanism::vcg;
  double truthful_utility = 0.0;
  double deviant_utility = 0.0;
  Relation relation = Relation::equal;
  std::size_t truthful_channels = 0;
  std::size_t deviant_channels = 0;
  std::vector<double> deviant_bids;
};

/// Quasilinear utility of `wsp`: its true values for the channels it won
/// minus what it paid.
inline double realized_utility(const BidMatrix& true_values, const AuctionOutcome& outcome, std::size_t wsp) {
  double value = 0.0;
  for (std::size_t k = 0; k < outcome.allocation.counts[wsp]; ++k) {
    value += true_values(wsp, k);
  }
  return value - outcome.payments[wsp];
}

/// Runs the auction with everyone truthful, then with `wsp` alone submitting
/// `deviation`, and compares that WSP's utility measured in true values.
inline TruthTrial truthfulness_trial(const BidMatrix& true_bids, std::size_t wsp, Mechanism mechanism,
                                     const BidVector& deviation, double tol = kTolerance) {
  const std::size_t channels = true_bids.channel_count();
  const auto truthful = run_auction(true_bids, channels, mechanism);
  const auto deviant = run_auction(true_bids.with_row(wsp, deviation.values), channels, mechanism);
  TruthTrial t;
  t.wsp = wsp;
  t.mechanism = mechanism;
  t.truthful_utility = realized_utility(true_bids, truthful, wsp);
  t.deviant_utility = realized_utility(true_bids, deviant, wsp);
  t.relation = classify(t.deviant_utility, t.truthful_utility, tol);
  t.truthful_channels = truthful.allocation.counts[wsp];
  t.deviant_channels = deviant.allocation.counts[wsp];
  t.deviant_bids = deviation.values;
  return t;
}

inline TruthTrial truthfulness_trial(const BidMatrix& true_bids, std::size_t wsp, Mechanism mechanism, Rng& rng,
                                     double tol = kTolerance) {
  const auto row = true_bids.row(wsp);
  const BidVector truthful{std::vector<double>(row.begin(), row.end())};
  return truthfulness_trial(true_bids, wsp, mechanism, perturb_bids(truthful, rng), tol);
}

struct RationalityViolation {
  std::size_t wsp = 0;
  double payment = 0.0;
  double bound = 0.0;
  std::string what;
};

/// Winners whose payment exceeds the sum of their winning bids, or whose
/// average unit price exceeds b^s_{C+1}. Bounds get a 1e-9 relative slack
/// for sums of many equal terms.
inline std::vector<RationalityViolation> rationality_violations(const BidMatrix& bids,
                                                                const AuctionOutcome& outcome) {
  std::vector<RationalityViolation> out;
  const std::size_t channels = outcome.channels;
  const bool has_next = channels + 1 <= bids.size();
  double next = 0.0;
  if (has_next) {
    std::vector<double> all;
    all.reserve(bids.size());
    for (std::size_t i = 0; i < bids.wsp_count(); ++i) {
      for (const double v : bids.row(i)) all.push_back(v);
    }
    std::nth_element(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(channels), all.end(),
                     std::greater<>());
    next = all[channels];
  }
  for (std::size_t i = 0; i < bids.wsp_count(); ++i) {
    const std::size_t won = outcome.allocation.counts[i];
    const double pay = outcome.payments[i];
    if (won == 0) {
      if (pay != 0.0) out.push_back({i, pay, 0.0, "loser charged"});
      continue;
    }
    double value = 0.0;
    for (std::size_t k = 0; k < won; ++k) value += bids(i, k);
    if (pay > value * (1.0 + kTolerance) + kTolerance) {
      out.push_back({i, pay, value, "payment exceeds winning bids"});
    }
    if (has_next && outcome.mechanism != Mechanism::onebid) {
      const double cap = static_cast<double>(won) * next;
      if (pay > cap * (1.0 + kTolerance) + kTolerance) {
        out.push_back({i, pay, cap, "unit price exceeds b^s_{C+1}"});
      }
    }
  }
  return out;
}

inline nlohmann::json instance_json(const BidMatrix& bids, std::size_t channels) {
  return {{"channels", channels}, {"bids", bids.rows()}};
}

// Carries the full instance so a failing sweep can be replayed.
class DominanceViolation : public std::runtime_error {
 public:
  DominanceViolation(const std::string& what, nlohmann::json counterexample)
      : std::runtime_error(what), counterexample_(std::move(counterexample)) {}

  const nlohmann::json& counterexample() const { return counterexample_; }

 private:
  nlohmann::json counterexample_;
};

struct RevenueTriple {
  double vcg = 0.0;
  std::optional<double> uniform;  // only when C < N
  double partial = 0.0;
};

inline bool at_least(double a, double b) { return a >= b - kTolerance * std::max(1.0, std::abs(b)); }

/// Revenues of the three payment rules on one instance; throws
/// DominanceViolation unless partial-uniform collects at least as much as
/// both others.
inline RevenueTriple dominance_check(const BidMatrix& bids, std::size_t channels) {
  RevenueTriple r;
  r.vcg = run_auction(bids, channels, Mechanism::vcg).revenue;
  r.partial = run_auction(bids, channels, Mechanism::partial_uniform).revenue;
  if (channels < bids.wsp_count()) {
    r.uniform = run_auction(bids, channels, Mechanism::uniform).revenue;
  }
  const bool ok_vcg = at_least(r.partial, r.vcg);
  const bool ok_uniform = !r.uniform || at_least(r.partial, *r.uniform);
  if (!ok_vcg || !ok_uniform) {
    auto cx = instance_json(bids, channels);
    cx["revenue"] = {{"vcg", r.vcg}, {"partial_uniform", r.partial}};
    if (r.uniform) cx["revenue"]["uniform"] = *r.uniform;
    throw DominanceViolation(ok_vcg ? "partial-uniform revenue below uniform"
                                    : "partial-uniform revenue below vcg",
                             std::move(cx));
  }
  return r;
}

/// WSP revenue p * min(demand(p), K*B) at each ratio * p*; returns the ratio
/// with the highest revenue (first one on ties).
inline double price_grid_check(double alpha, double aggregate_gain_hz, std::size_t channels, double channel_hz,
                               std::span<const double> ratios) {
  if (std::find(ratios.begin(), ratios.end(), 1.0) == ratios.end()) {
    throw domain_error("price_grid_check: ratio grid must contain 1.0");
  }
  const double optimal = optimal_price(alpha, aggregate_gain_hz, channels, channel_hz).price_per_hz;
  double best_ratio = ratios.front();
  double best = -std::numeric_limits<double>::infinity();
  for (const double r : ratios) {
    const double revenue = wsp_utility(alpha, aggregate_gain_hz, channels, channel_hz, r * optimal, 0.0);
    if (revenue > best) {
      best = revenue;
      best_ratio = r;
    }
  }
  return best_ratio;
}

/// {0.1, 0.2, ..., 2.0}
inline std::vector<double> default_price_ratios() {
  std::vector<double> r;
  for (int i = 1; i <= 20; ++i) r.push_back(static_cast<double>(i) / 10.0);
  return r;
}

/// Instance where every mechanism's revenue reaches C * b^s_{C+1}: C WSPs bid
/// `high` for one channel, one WSP bids `mid` and loses everything, the rest
/// bid `low`. Needs N >= C + 1 and high > mid > low >= 0.
inline BidMatrix tightness_instance(std::size_t wsps, std::size_t channels, double high = 10.0, double mid = 5.0,
                                    double low = 1.0) {
  if (wsps < channels + 1) {
    throw domain_error("tightness_instance: needs N >= C + 1");
  }
  std::vector<std::vector<double>> rows(wsps, std::vector<double>(channels, 0.0));
  for (std::size_t i = 0; i < channels; ++i) rows[i][0] = high;
  rows[channels][0] = mid;
  for (std::size_t i = channels + 1; i < wsps; ++i) rows[i][0] = low;
  return BidMatrix(rows);
}

}  // namespace flexauc::oracle
