#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "flexauc/auction.hpp"
#include "flexauc/channelization.hpp"
#include "flexauc/errors.hpp"
#include "flexauc/io.hpp"
#include "flexauc/oracle.hpp"
#include "flexauc/random.hpp"
#include "flexauc/scenario.hpp"
#include "flexauc/strategy.hpp"

namespace flexauc::harness {

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "pricing-grid",         "bid-structure",         "truthfulness",    "payment-comparison",
      "onebid-comparison",    "channelization-sweep",  "guard-band-sweep"};
  return names;
}

struct ExperimentConfig {
  std::string name;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  GenerationConfig generation;
  std::vector<Mechanism> mechanisms;      // empty: experiment default
  std::vector<std::size_t> channels;      // empty: experiment default
  std::vector<double> guard_bands_mhz;    // sweeps only; empty: default
  std::size_t perturbations = 100;        // truthfulness: deviations per scenario
  double noise = 0.0;                     // estimate noise for the sweeps
  std::size_t channel_cap = kDefaultChannelCap;
  std::size_t workers = 0;                // 0: FLEXAUC_WORKERS or 1
};

/// Fills the per-experiment defaults for every list left empty.
inline ExperimentConfig with_defaults(ExperimentConfig c) {
  using M = Mechanism;
  const auto& n = c.name;
  if (n == "pricing-grid" || n == "bid-structure") {
    if (c.channels.empty()) c.channels = {5};
    if (c.mechanisms.empty()) c.mechanisms = {M::partial_uniform};
  } else if (n == "truthfulness") {
    if (c.channels.empty()) c.channels = {5};
    if (c.mechanisms.empty()) c.mechanisms = {M::vcg, M::uniform, M::partial_uniform};
  } else if (n == "payment-comparison") {
    if (c.channels.empty()) c.channels = {3, 5, 7, 20, 30};
    if (c.mechanisms.empty()) c.mechanisms = {M::vcg, M::uniform, M::partial_uniform};
  } else if (n == "onebid-comparison") {
    if (c.channels.empty()) c.channels = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    if (c.mechanisms.empty()) c.mechanisms = {M::partial_uniform};
  } else if (n == "channelization-sweep") {
    if (c.guard_bands_mhz.empty()) c.guard_bands_mhz = {hz_to_mhz(c.generation.block.guard_band_hz)};
    if (c.mechanisms.empty()) c.mechanisms = {M::vcg, M::partial_uniform};
  } else if (n == "guard-band-sweep") {
    if (c.guard_bands_mhz.empty()) c.guard_bands_mhz = {0.0, 0.1, 0.5, 1.0};
    if (c.mechanisms.empty()) c.mechanisms = {M::vcg, M::partial_uniform};
  }
  return c;
}

/// Rejects unknown experiments and mechanism/C combinations that cannot be
/// priced, listing every offending point.
inline void validate(const ExperimentConfig& c) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), c.name) == names.end()) {
    throw config_error("unknown experiment '" + c.name + "'");
  }
  if (c.trials < 1) throw config_error("trials must be at least 1");
  c.generation.validate();
  const std::size_t n = c.generation.wsp_count;
  std::vector<std::string> bad;
  auto check = [&](Mechanism m, std::size_t channels, const std::string& where) {
    if (m == Mechanism::uniform && channels >= n) {
      bad.push_back("uniform with C=" + std::to_string(channels) + " >= N=" + std::to_string(n) + where);
    }
    if ((m == Mechanism::vcg || m == Mechanism::partial_uniform) && n < 2) {
      bad.push_back(std::string(to_string(m)) + " with N=1" + where);
    }
  };
  const bool sweep = c.name == "channelization-sweep" || c.name == "guard-band-sweep";
  if (sweep) {
    if (n < 2) bad.push_back("channel sweeps need N >= 2");
    for (const double b0 : c.guard_bands_mhz) {
      const double b0_hz = mhz_to_hz(b0);
      if (!(b0_hz >= 0.0) || !(b0_hz < c.generation.block.total_bandwidth_hz)) {
        bad.push_back("guard band " + std::to_string(b0) + " MHz outside [0, B0)");
        continue;
      }
      const std::size_t cmax = max_channels(c.generation.block.total_bandwidth_hz, b0_hz, c.channel_cap);
      for (const auto m : c.mechanisms) {
        for (std::size_t ch = 1; ch <= cmax; ++ch) check(m, ch, " (guard band " + std::to_string(b0) + " MHz)");
      }
    }
  } else {
    for (const auto ch : c.channels) {
      if (ch < 1) {
        bad.push_back("C=0");
        continue;
      }
      try {
        (void)channel_bandwidth(c.generation.block.total_bandwidth_hz, c.generation.block.guard_band_hz, ch);
      } catch (const domain_error&) {
        bad.push_back("C=" + std::to_string(ch) + " leaves no bandwidth after guard bands");
      }
      if (c.name == "payment-comparison") continue;  // uniform is skipped where undefined
      for (const auto m : c.mechanisms) check(m, ch, "");
    }
  }
  if (c.name == "truthfulness" && c.perturbations < 1) bad.push_back("perturbations must be at least 1");
  if (!bad.empty()) {
    std::string msg = "invalid experiment '" + c.name + "':";
    for (const auto& b : bad) msg += "\n  " + b;
    throw config_error(msg);
  }
}

/// One row of output: parameters of the point plus the experiment's metrics.
struct ResultRecord {
  std::string experiment;
  std::size_t trial = 0;
  std::optional<std::size_t> channels;
  std::optional<double> guard_band_mhz;
  std::optional<Mechanism> mechanism;
  std::optional<std::size_t> wsp;   // 1-based id
  std::optional<std::size_t> rank;  // 1-based bid rank
  std::vector<double> metrics;

  bool operator==(const ResultRecord&) const = default;
};

inline std::vector<std::string> metric_names(const std::string& experiment) {
  if (experiment == "pricing-grid") {
    return {"alpha", "aggregate_gain_hz", "won_channels", "optimal_price", "argmax_ratio", "revenue_at_optimum",
            "best_other_revenue"};
  }
  if (experiment == "bid-structure") return {"true_bid", "estimated_bid", "non_increasing"};
  if (experiment == "truthfulness") {
    return {"perturbations", "less", "equal", "greater", "rationality_violations", "max_gain"};
  }
  if (experiment == "payment-comparison") return {"revenue", "ratio_to_vcg", "indicator", "welfare"};
  if (experiment == "onebid-comparison") {
    return {"flexauc_revenue", "flexauc_welfare", "onebid_revenue", "onebid_welfare", "welfare_gap",
            "revenue_gap"};
  }
  if (experiment == "channelization-sweep" || experiment == "guard-band-sweep") {
    return {"channel_hz", "indicator", "welfare", "revenue", "is_best"};
  }
  throw config_error("unknown experiment '" + experiment + "'");
}

/// Counts over every auction an experiment ran.
struct Audit {
  std::size_t auctions = 0;
  std::size_t rationality_violations = 0;
  std::size_t indicator_violations = 0;  // revenue above C * b^s_{C+1}

  void merge(const Audit& o) {
    auctions += o.auctions;
    rationality_violations += o.rationality_violations;
    indicator_violations += o.indicator_violations;
  }

  bool operator==(const Audit&) const = default;
};

inline AuctionOutcome audited_auction(const BidMatrix& bids, std::size_t channels, Mechanism m, Audit& audit) {
  auto out = run_auction(bids, channels, m);
  ++audit.auctions;
  audit.rationality_violations += oracle::rationality_violations(bids, out).size();
  if (out.indicator && !oracle::at_least(*out.indicator, out.revenue)) {
    ++audit.indicator_violations;
  }
  return out;
}

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ResultRecord> records;
  Audit audit;
};

namespace detail {

inline std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) { return Rng::derive(seed, trial); }

inline Scenario trial_scenario(const ExperimentConfig& c, std::size_t trial) {
  return generate_scenario(c.generation, Rng::derive(trial_seed(c.seed, trial), 0));
}

struct TrialOutput {
  std::vector<ResultRecord> records;
  Audit audit;
};

inline ResultRecord record(const ExperimentConfig& c, std::size_t trial) {
  ResultRecord r;
  r.experiment = c.name;
  r.trial = trial;
  return r;
}

inline TrialOutput pricing_grid(const ExperimentConfig& c, std::size_t trial) {
  TrialOutput out;
  const auto scenario = trial_scenario(c, trial);
  const auto ratios = oracle::default_price_ratios();
  for (const auto channels : c.channels) {
    const auto bids = truthful_bids(scenario, channels);
    const double width =
        channel_bandwidth(scenario.block.total_bandwidth_hz, scenario.block.guard_band_hz, channels);
    for (const auto m : c.mechanisms) {
      const auto outcome = audited_auction(bids, channels, m, out.audit);
      for (std::size_t i = 0; i < scenario.wsps.size(); ++i) {
        const std::size_t won = outcome.allocation.counts[i];
        if (won == 0) continue;
        const auto& w = scenario.wsps[i];
        const double p_star = optimal_price(w.alpha, w.aggregate_gain_hz, won, width).price_per_hz;
        double best_other = -std::numeric_limits<double>::infinity();
        for (const double r : ratios) {
          if (r == 1.0) continue;
          best_other = std::max(best_other, wsp_utility(w.alpha, w.aggregate_gain_hz, won, width, r * p_star, 0.0));
        }
        auto rec = record(c, trial);
        rec.channels = channels;
        rec.mechanism = m;
        rec.wsp = w.id;
        rec.metrics = {w.alpha,
                       w.aggregate_gain_hz,
                       static_cast<double>(won),
                       p_star,
                       oracle::price_grid_check(w.alpha, w.aggregate_gain_hz, won, width, ratios),
                       wsp_utility(w.alpha, w.aggregate_gain_hz, won, width, p_star, 0.0),
                       best_other};
        out.records.push_back(std::move(rec));
      }
    }
  }
  return out;
}

inline TrialOutput bid_structure(const ExperimentConfig& c, std::size_t trial) {
  TrialOutput out;
  const auto scenario = trial_scenario(c, trial);
  const auto estimates = estimates_from_scenario(scenario);
  const double b0 = scenario.block.guard_band_hz;
  const double total = scenario.block.total_bandwidth_hz;
  for (const auto channels : c.channels) {
    const auto bids = truthful_bids(scenario, channels);
    for (std::size_t i = 0; i < bids.wsp_count(); ++i) {
      for (std::size_t k = 0; k < channels; ++k) {
        auto rec = record(c, trial);
        rec.channels = channels;
        rec.wsp = i + 1;
        rec.rank = k + 1;
        const bool monotone = k == 0 || bids(i, k) <= bids(i, k - 1);
        rec.metrics = {bids(i, k), estimated_bid(estimates[i], total, b0, channels, k + 1), monotone ? 1.0 : 0.0};
        out.records.push_back(std::move(rec));
      }
    }
  }
  return out;
}

inline TrialOutput truthfulness(const ExperimentConfig& c, std::size_t trial) {
  TrialOutput out;
  const auto scenario = trial_scenario(c, trial);
  for (const auto channels : c.channels) {
    const auto bids = truthful_bids(scenario, channels);
    // One deviation per perturbation, shared by every mechanism.
    Rng rng(Rng::derive(Rng::derive(trial_seed(c.seed, trial), 1), channels));
    std::vector<std::pair<std::size_t, BidVector>> deviations;
    deviations.reserve(c.perturbations);
    for (std::size_t p = 0; p < c.perturbations; ++p) {
      const auto wsp = static_cast<std::size_t>(rng.uniform_int(0, bids.wsp_count() - 1));
      const auto row = bids.row(wsp);
      deviations.emplace_back(wsp, oracle::perturb_bids(BidVector{{row.begin(), row.end()}}, rng));
    }
    for (const auto m : c.mechanisms) {
      Audit local;
      (void)audited_auction(bids, channels, m, local);
      std::size_t counts[3] = {0, 0, 0};
      double max_gain = -std::numeric_limits<double>::infinity();
      for (const auto& [wsp, deviation] : deviations) {
        const auto t = oracle::truthfulness_trial(bids, wsp, m, deviation);
        ++counts[static_cast<int>(t.relation)];
        max_gain = std::max(max_gain, t.deviant_utility - t.truthful_utility);
        // The deviant run must still respect the submitted bids.
        (void)audited_auction(bids.with_row(wsp, deviation.values), channels, m, local);
      }
      out.audit.merge(local);
      auto rec = record(c, trial);
      rec.channels = channels;
      rec.mechanism = m;
      rec.metrics = {static_cast<double>(c.perturbations),
                     static_cast<double>(counts[0]),
                     static_cast<double>(counts[1]),
                     static_cast<double>(counts[2]),
                     static_cast<double>(local.rationality_violations),
                     max_gain};
      out.records.push_back(std::move(rec));
    }
  }
  return out;
}

inline TrialOutput payment_comparison(const ExperimentConfig& c, std::size_t trial) {
  TrialOutput out;
  const auto scenario = trial_scenario(c, trial);
  for (const auto channels : c.channels) {
    const auto bids = truthful_bids(scenario, channels);
    const auto vcg = audited_auction(bids, channels, Mechanism::vcg, out.audit);
    for (const auto m : c.mechanisms) {
      if (m == Mechanism::uniform && channels >= bids.wsp_count()) continue;
      const auto outcome = m == Mechanism::vcg ? vcg : audited_auction(bids, channels, m, out.audit);
      auto rec = record(c, trial);
      rec.channels = channels;
      rec.mechanism = m;
      const double ratio = vcg.revenue > 0.0 ? outcome.revenue / vcg.revenue
                                             : std::numeric_limits<double>::quiet_NaN();
      rec.metrics = {outcome.revenue, ratio, outcome.indicator.value_or(std::numeric_limits<double>::quiet_NaN()),
                     outcome.welfare};
      out.records.push_back(std::move(rec));
    }
  }
  return out;
}

inline TrialOutput onebid_comparison(const ExperimentConfig& c, std::size_t trial) {
  TrialOutput out;
  const auto scenario = trial_scenario(c, trial);
  for (const auto channels : c.channels) {
    const auto bids = truthful_bids(scenario, channels);
    const auto onebid = audited_auction(bids, channels, Mechanism::onebid, out.audit);
    for (const auto m : c.mechanisms) {
      const auto flex = audited_auction(bids, channels, m, out.audit);
      auto rec = record(c, trial);
      rec.channels = channels;
      rec.mechanism = m;
      rec.metrics = {flex.revenue,  flex.welfare, onebid.revenue, onebid.welfare, flex.welfare - onebid.welfare,
                     flex.revenue - onebid.revenue};
      out.records.push_back(std::move(rec));
    }
  }
  return out;
}

inline TrialOutput channel_sweep(const ExperimentConfig& c, std::size_t trial) {
  TrialOutput out;
  const auto scenario = trial_scenario(c, trial);
  // Same estimates for every guard band so the curves are comparable.
  const auto estimates = estimates_from_scenario(scenario, c.noise, Rng::derive(trial_seed(c.seed, trial), 2));
  const double total = scenario.block.total_bandwidth_hz;
  for (const double b0_mhz : c.guard_bands_mhz) {
    const double b0 = mhz_to_hz(b0_mhz);
    const std::size_t cmax = max_channels(total, b0, c.channel_cap);
    std::vector<ResultRecord> points;
    std::size_t best_channels = 0;
    double best = -1.0;
    for (std::size_t channels = 1; channels <= cmax; ++channels) {
      const auto bids = estimated_bid_matrix(estimates, total, b0, channels);
      const double indicator = revenue_indicator(bids, channels);
      if (indicator > best) {
        best = indicator;
        best_channels = channels;
      }
      double welfare = 0.0;
      for (const auto& b : top_bids(bids, channels)) welfare += b.value;
      for (const auto m : c.mechanisms) {
        const auto outcome = audited_auction(bids, channels, m, out.audit);
        auto rec = record(c, trial);
        rec.channels = channels;
        rec.guard_band_mhz = b0_mhz;
        rec.mechanism = m;
        rec.metrics = {channel_bandwidth(total, b0, channels), indicator, welfare, outcome.revenue, 0.0};
        points.push_back(std::move(rec));
      }
    }
    for (auto& p : points) {
      if (p.channels == best_channels) p.metrics.back() = 1.0;
      out.records.push_back(std::move(p));
    }
  }
  return out;
}

inline TrialOutput run_trial(const ExperimentConfig& c, std::size_t trial) {
  const auto& n = c.name;
  if (n == "pricing-grid") return pricing_grid(c, trial);
  if (n == "bid-structure") return bid_structure(c, trial);
  if (n == "truthfulness") return truthfulness(c, trial);
  if (n == "payment-comparison") return payment_comparison(c, trial);
  if (n == "onebid-comparison") return onebid_comparison(c, trial);
  return channel_sweep(c, trial);
}

}  // namespace detail

inline std::size_t resolve_workers(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FLEXAUC_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

/// Runs every trial and returns records ordered by trial, then by parameter
/// point. Trials draw from streams derived from (seed, trial index), so the
/// output is identical for any worker count.
inline ExperimentResult run_experiment(ExperimentConfig config) {
  config = with_defaults(std::move(config));
  validate(config);
  const std::size_t workers = std::min(resolve_workers(config.workers), config.trials);

  std::vector<detail::TrialOutput> slots(config.trials);
  std::vector<std::exception_ptr> errors(workers);
  std::atomic<std::size_t> next{0};
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t t = next++; t < config.trials; t = next++) {
        slots[t] = detail::run_trial(config, t);
      }
    } catch (...) {
      errors[w] = std::current_exception();
      next = config.trials;
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentResult result;
  result.config = config;
  for (auto& s : slots) {
    result.audit.merge(s.audit);
    for (auto& r : s.records) result.records.push_back(std::move(r));
  }
  return result;
}

// --- output ---------------------------------------------------------------

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string csv_header(const std::string& experiment) {
  std::string h = "experiment,trial,channels,guard_band_mhz,mechanism,wsp,rank";
  for (const auto& m : metric_names(experiment)) h += "," + m;
  return h;
}

inline std::string csv_row(const ResultRecord& r) {
  std::ostringstream os;
  os << r.experiment << ',' << r.trial << ',';
  if (r.channels) os << *r.channels;
  os << ',';
  if (r.guard_band_mhz) os << format_number(*r.guard_band_mhz);
  os << ',';
  if (r.mechanism) os << to_string(*r.mechanism);
  os << ',';
  if (r.wsp) os << *r.wsp;
  os << ',';
  if (r.rank) os << *r.rank;
  for (const double m : r.metrics) os << ',' << format_number(m);
  return os.str();
}

inline std::string to_csv(const std::string& experiment, const std::vector<ResultRecord>& records) {
  std::string out = csv_header(experiment) + "\n";
  for (const auto& r : records) out += csv_row(r) + "\n";
  return out;
}

struct SummaryGroup {
  std::optional<std::size_t> channels;
  std::optional<double> guard_band_mhz;
  std::optional<Mechanism> mechanism;
  std::optional<std::size_t> rank;
  std::size_t count = 0;
  std::vector<double> mean, min, max, sum;
};

struct Summary {
  std::string experiment;
  std::vector<std::string> metrics;
  std::vector<SummaryGroup> groups;  // in order of first appearance
};

/// Per parameter point (C, guard band, mechanism, rank): count and the mean,
/// min, max and sum of each metric across trials and WSPs. NaN entries are
/// skipped.
inline Summary summarize(const std::vector<ResultRecord>& records) {
  if (records.empty()) throw domain_error("summarize: no records");
  Summary s;
  s.experiment = records.front().experiment;
  s.metrics = metric_names(s.experiment);
  const std::size_t width = s.metrics.size();
  using Key = std::tuple<std::optional<std::size_t>, std::optional<double>, std::optional<Mechanism>,
                         std::optional<std::size_t>>;
  std::map<Key, std::size_t> index;
  std::vector<std::vector<std::size_t>> finite_counts;
  for (const auto& r : records) {
    if (r.experiment != s.experiment) throw domain_error("summarize: records from several experiments");
    if (r.metrics.size() != width) throw domain_error("summarize: record does not match the schema");
    const Key key{r.channels, r.guard_band_mhz, r.mechanism, r.rank};
    auto [it, inserted] = index.try_emplace(key, s.groups.size());
    if (inserted) {
      SummaryGroup g;
      g.channels = r.channels;
      g.guard_band_mhz = r.guard_band_mhz;
      g.mechanism = r.mechanism;
      g.rank = r.rank;
      g.sum.assign(width, 0.0);
      g.min.assign(width, std::numeric_limits<double>::infinity());
      g.max.assign(width, -std::numeric_limits<double>::infinity());
      s.groups.push_back(std::move(g));
      finite_counts.emplace_back(width, 0);
    }
    auto& g = s.groups[it->second];
    ++g.count;
    for (std::size_t m = 0; m < width; ++m) {
      const double v = r.metrics[m];
      if (std::isnan(v)) continue;
      ++finite_counts[it->second][m];
      g.sum[m] += v;
      g.min[m] = std::min(g.min[m], v);
      g.max[m] = std::max(g.max[m], v);
    }
  }
  for (std::size_t gi = 0; gi < s.groups.size(); ++gi) {
    auto& g = s.groups[gi];
    g.mean.resize(width);
    for (std::size_t m = 0; m < width; ++m) {
      const auto n = finite_counts[gi][m];
      g.mean[m] = n ? g.sum[m] / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return s;
}

inline nlohmann::json summary_json(const ExperimentResult& result) {
  using nlohmann::json;
  auto number = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json j;
  j["experiment"] = result.config.name;
  j["trials"] = result.config.trials;
  j["seed"] = result.config.seed;
  j["audit"] = {{"auctions", result.audit.auctions},
                {"rationality_violations", result.audit.rationality_violations},
                {"indicator_violations", result.audit.indicator_violations}};
  const auto s = summarize(result.records);
  j["metrics"] = s.metrics;
  j["groups"] = json::array();
  for (const auto& g : s.groups) {
    json gj;
    if (g.channels) gj["channels"] = *g.channels;
    if (g.guard_band_mhz) gj["guard_band_mhz"] = *g.guard_band_mhz;
    if (g.mechanism) gj["mechanism"] = to_string(*g.mechanism);
    if (g.rank) gj["rank"] = *g.rank;
    gj["count"] = g.count;
    for (std::size_t m = 0; m < s.metrics.size(); ++m) {
      gj["mean"][s.metrics[m]] = number(g.mean[m]);
      gj["min"][s.metrics[m]] = number(g.min[m]);
      gj["max"][s.metrics[m]] = number(g.max[m]);
      gj["sum"][s.metrics[m]] = number(g.sum[m]);
    }
    j["groups"].push_back(std::move(gj));
  }
  return j;
}

/// Writes <name>.csv and <name>.summary.json into `dir`.
inline void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / (result.config.name + ".csv"), std::ios::binary);
    if (!csv) throw config_error("cannot write " + (dir / (result.config.name + ".csv")).string());
    csv << to_csv(result.config.name, result.records);
  }
  write_json_file(dir / (result.config.name + ".summary.json"), summary_json(result));
}

/// Experiment config file: {"name", "trials", "seed", "generation": {...},
/// "mechanisms": [...], "channels": [...], "guard_bands_mhz": [...],
/// "perturbations", "noise", "channel_cap", "workers"}; every key optional.
inline ExperimentConfig parse_experiment_config(const nlohmann::json& j, ExperimentConfig c = {}) {
  c.name = j.value("name", c.name);
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  if (j.contains("generation")) c.generation = j.at("generation").get<GenerationConfig>();
  if (j.contains("mechanisms")) {
    c.mechanisms.clear();
    for (const auto& m : j.at("mechanisms")) c.mechanisms.push_back(parse_mechanism(m.get<std::string>()));
  }
  if (j.contains("channels")) j.at("channels").get_to(c.channels);
  if (j.contains("guard_bands_mhz")) j.at("guard_bands_mhz").get_to(c.guard_bands_mhz);
  c.perturbations = j.value("perturbations", c.perturbations);
  c.noise = j.value("noise", c.noise);
  c.channel_cap = j.value("channel_cap", c.channel_cap);
  c.workers = j.value("workers", c.workers);
  return c;
}

}  // namespace flexauc::harness
