// flexauc: scenario generation, single auctions, channel optimization,
// oracle verification and batch experiments.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "flexauc/flexauc.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace flexauc;

namespace {

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json_file(out, j);
  }
}

struct CheckResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::optional<json> counterexample;
};

void fail(CheckResult& r, json example) {
  if (r.failures++ == 0) r.counterexample = std::move(example);
}

CheckResult verify_welfare(std::size_t instances, Rng rng) {
  CheckResult r;
  r.name = "welfare-vs-brute-force";
  for (std::size_t t = 0; t < instances; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 5));
    const auto c = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const auto bids = oracle::random_bid_matrix(n, c, rng);
    const double got = allocated_value(bids, determine_winners(bids, c).allocation);
    const auto best = oracle::brute_force_welfare(bids, c);
    ++r.cases;
    if (got != best.welfare) {
      auto ex = oracle::instance_json(bids, c);
      ex["flexauc_welfare"] = got;
      ex["brute_force_welfare"] = best.welfare;
      ex["witness"] = best.witness.counts;
      fail(r, ex);
    }
  }
  return r;
}

CheckResult verify_dominance(std::size_t instances, Rng rng) {
  CheckResult r;
  r.name = "payment-dominance";
  for (std::size_t t = 0; t < instances; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 8));
    const auto c = static_cast<std::size_t>(rng.uniform_int(1, 10));
    const auto bids = oracle::random_bid_matrix(n, c, rng);
    ++r.cases;
    try {
      (void)oracle::dominance_check(bids, c);
    } catch (const oracle::DominanceViolation& e) {
      fail(r, e.counterexample());
    }
  }
  return r;
}

CheckResult verify_rationality(std::size_t instances, Rng rng) {
  CheckResult r;
  r.name = "individual-rationality-and-indicator-bound";
  const Mechanism all[] = {Mechanism::vcg, Mechanism::uniform, Mechanism::partial_uniform, Mechanism::onebid};
  for (std::size_t t = 0; t < instances; ++t) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 8));
    const auto c = static_cast<std::size_t>(rng.uniform_int(1, 10));
    const auto bids = oracle::random_bid_matrix(n, c, rng);
    for (const auto m : all) {
      if (m == Mechanism::uniform && c >= n) continue;
      const auto out = run_auction(bids, c, m);
      ++r.cases;
      const auto v = oracle::rationality_violations(bids, out);
      const bool bound_ok = !out.indicator || oracle::at_least(*out.indicator, out.revenue);
      if (!v.empty() || !bound_ok) {
        auto ex = oracle::instance_json(bids, c);
        ex["outcome"] = out;
        ex["violations"] = json::array();
        for (const auto& x : v) ex["violations"].push_back({{"wsp", x.wsp + 1}, {"payment", x.payment}, {"bound", x.bound}, {"what", x.what}});
        fail(r, ex);
      }
    }
  }
  return r;
}

std::vector<CheckResult> verify_truthfulness(std::size_t scenarios, std::size_t perturbations, std::size_t channels,
                                             const std::vector<Mechanism>& mechanisms, std::uint64_t seed,
                                             const GenerationConfig& gen) {
  std::vector<CheckResult> results;
  for (const auto m : mechanisms) {
    results.emplace_back();
    results.back().name = "truthfulness-" + std::string(to_string(m));
  }
  for (std::size_t s = 0; s < scenarios; ++s) {
    const auto scenario = generate_scenario(gen, Rng::derive(seed, s));
    const auto bids = truthful_bids(scenario, channels);
    Rng rng(Rng::derive(Rng::derive(seed, s), 1));
    for (std::size_t p = 0; p < perturbations; ++p) {
      const auto wsp = static_cast<std::size_t>(rng.uniform_int(0, bids.wsp_count() - 1));
      const auto row = bids.row(wsp);
      const auto deviation = oracle::perturb_bids(BidVector{{row.begin(), row.end()}}, rng);
      for (std::size_t mi = 0; mi < mechanisms.size(); ++mi) {
        const auto m = mechanisms[mi];
        if (m == Mechanism::uniform && channels >= bids.wsp_count()) continue;
        const auto t = oracle::truthfulness_trial(bids, wsp, m, deviation);
        ++results[mi].cases;
        if (t.relation == oracle::Relation::greater) {
          auto ex = oracle::instance_json(bids, channels);
          ex["mechanism"] = to_string(m);
          ex["wsp"] = wsp + 1;
          ex["deviant_bids"] = t.deviant_bids;
          ex["truthful_utility"] = t.truthful_utility;
          ex["deviant_utility"] = t.deviant_utility;
          ex["truthful_channels"] = t.truthful_channels;
          ex["deviant_channels"] = t.deviant_channels;
          fail(results[mi], ex);
        }
      }
    }
  }
  return results;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flexible multi-unit spectrum auction: scenarios, auctions, channelization and experiments"};
  app.require_subcommand(1);

  // gen-scenario
  auto* gen = app.add_subcommand("gen-scenario", "Draw a scenario from a generation config");
  std::string gen_config, gen_out;
  std::uint64_t gen_seed = 1;
  gen->add_option("--config", gen_config, "Generation config JSON (defaults when omitted)")->check(CLI::ExistingFile);
  gen->add_option("--seed", gen_seed, "Master seed");
  gen->add_option("--out", gen_out, "Output scenario JSON ('-' for stdout)");

  // run-auction
  auto* auc = app.add_subcommand("run-auction", "Run one auction on a scenario's truthful bids");
  std::string auc_scenario, auc_mechanism = "partial-uniform", auc_out;
  std::size_t auc_channels = 0;
  auc->add_option("--scenario", auc_scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  auc->add_option("--channels", auc_channels, "Number of channels C")->required()->check(CLI::PositiveNumber);
  auc->add_option("--mechanism", auc_mechanism, "vcg | uniform | partial-uniform | onebid");
  auc->add_option("--out", auc_out, "Output outcome JSON ('-' for stdout)");

  // optimize-channels
  auto* opt = app.add_subcommand("optimize-channels", "Choose the channel count for a scenario");
  std::string opt_scenario, opt_out, opt_search = "exhaustive";
  std::optional<double> opt_guard;
  double opt_noise = 0.0;
  std::uint64_t opt_seed = 0;
  std::size_t opt_cap = kDefaultChannelCap;
  opt->add_option("--scenario", opt_scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  opt->add_option("--guard-band-mhz", opt_guard, "Guard band b0 in MHz (default: the scenario's)");
  opt->add_option("--noise", opt_noise, "Relative noise on the holder's estimates, in [0, 1)");
  opt->add_option("--noise-seed", opt_seed, "Seed for the estimate noise");
  opt->add_option("--search", opt_search, "exhaustive | binary");
  opt->add_option("--cap", opt_cap, "Channel cap when b0 = 0")->check(CLI::PositiveNumber);
  opt->add_option("--out", opt_out, "Output result JSON ('-' for stdout)");

  // verify
  auto* ver = app.add_subcommand("verify", "Run the oracle checks and report pass/fail");
  std::size_t ver_instances = 1000, ver_scenarios = 100, ver_perturbations = 100, ver_channels = 5;
  std::uint64_t ver_seed = 1;
  std::vector<std::string> ver_mechanisms = {"vcg", "uniform", "partial-uniform"};
  std::string ver_out;
  ver->add_option("--instances", ver_instances, "Random instances per bid-level check");
  ver->add_option("--scenarios", ver_scenarios, "Scenarios for the truthfulness check");
  ver->add_option("--perturbations", ver_perturbations, "Deviations per scenario");
  ver->add_option("--channels", ver_channels, "C for the truthfulness check")->check(CLI::PositiveNumber);
  ver->add_option("--mechanisms", ver_mechanisms, "Mechanisms for the truthfulness check");
  ver->add_option("--seed", ver_seed, "Master seed");
  ver->add_option("--counterexample-out", ver_out, "Where to write counterexamples on failure ('-' for stdout)");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a batch experiment and write CSV plus summary");
  std::string exp_name, exp_config, exp_out_dir = ".";
  std::optional<std::size_t> exp_trials, exp_workers;
  std::optional<std::uint64_t> exp_seed;
  exp->add_option("--name", exp_name, "Experiment name")->check(CLI::IsMember(harness::experiment_names()));
  exp->add_option("--config", exp_config, "Experiment config JSON")->check(CLI::ExistingFile);
  exp->add_option("--trials", exp_trials, "Number of trials")->check(CLI::PositiveNumber);
  exp->add_option("--seed", exp_seed, "Master seed");
  exp->add_option("--workers", exp_workers, "Worker threads (default: FLEXAUC_WORKERS or 1)");
  exp->add_option("--out-dir", exp_out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      GenerationConfig config;
      if (!gen_config.empty()) config = read_json_file(gen_config).get<GenerationConfig>();
      emit(json(generate_scenario(config, gen_seed)), gen_out);
      return 0;
    }

    if (auc->parsed()) {
      const auto scenario = read_scenario(auc_scenario);
      const auto mechanism = parse_mechanism(auc_mechanism);
      const auto outcome = run_auction(truthful_bids(scenario, auc_channels), auc_channels, mechanism);
      emit(json(outcome), auc_out);
      return 0;
    }

    if (opt->parsed()) {
      const auto scenario = read_scenario(opt_scenario);
      const double b0 = opt_guard ? mhz_to_hz(*opt_guard) : scenario.block.guard_band_hz;
      const auto estimates = estimates_from_scenario(scenario, opt_noise, opt_seed);
      const auto result = optimize_channel_count(estimates, scenario.block.total_bandwidth_hz, b0,
                                                 parse_search_mode(opt_search), opt_cap);
      emit(json(result), opt_out);
      return 0;
    }

    if (ver->parsed()) {
      std::vector<Mechanism> mechanisms;
      for (const auto& m : ver_mechanisms) mechanisms.push_back(parse_mechanism(m));
      const Rng master(ver_seed);
      std::vector<CheckResult> checks;
      checks.push_back(verify_welfare(ver_instances, master.substream(1)));
      checks.push_back(verify_dominance(ver_instances, master.substream(2)));
      checks.push_back(verify_rationality(ver_instances, master.substream(3)));
      for (auto& t : verify_truthfulness(ver_scenarios, ver_perturbations, ver_channels, mechanisms,
                                         Rng::derive(ver_seed, 4), GenerationConfig{})) {
        checks.push_back(std::move(t));
      }
      bool ok = true;
      json report = json::array();
      for (const auto& c : checks) {
        const bool pass = c.failures == 0;
        ok = ok && pass;
        std::cout << (pass ? "PASS " : "FAIL ") << c.name << " (" << c.failures << "/" << c.cases
                  << " failing)\n";
        if (!pass) report.push_back({{"check", c.name}, {"failures", c.failures}, {"cases", c.cases},
                                     {"counterexample", *c.counterexample}});
      }
      if (!ok) {
        if (ver_out.empty()) {
          std::cerr << report.dump(2) << '\n';
        } else {
          emit(report, ver_out);
        }
      }
      return ok ? 0 : 1;
    }

    if (exp->parsed()) {
      harness::ExperimentConfig config;
      if (!exp_config.empty()) config = harness::parse_experiment_config(read_json_file(exp_config));
      if (!exp_name.empty()) config.name = exp_name;
      if (config.name.empty()) throw config_error("experiment: --name or a config 'name' is required");
      if (exp_trials) config.trials = *exp_trials;
      if (exp_seed) config.seed = *exp_seed;
      if (exp_workers) config.workers = *exp_workers;
      const auto result = harness::run_experiment(config);
      harness::write_outputs(result, exp_out_dir);
      std::cout << "wrote " << (fs::path(exp_out_dir) / (config.name + ".csv")).string() << " ("
                << result.records.size() << " records, " << result.audit.auctions << " auctions)\n";
      if (result.audit.rationality_violations || result.audit.indicator_violations) {
        std::cerr << "warning: " << result.audit.rationality_violations << " rationality and "
                  << result.audit.indicator_violations << " indicator-bound violations\n";
        return 1;
      }
      return 0;
    }
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
