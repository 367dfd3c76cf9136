#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "flexauc/channelization.hpp"
#include "flexauc/io.hpp"

using namespace flexauc;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("flexauc_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(ScenarioJson, RoundTripIsExact) {
  GenerationConfig cfg;
  cfg.wsp_count = 4;
  cfg.users_min = 20;
  cfg.users_max = 40;
  const auto s = generate_scenario(cfg, 123);
  EXPECT_EQ(json(s).get<Scenario>(), s);
  EXPECT_EQ(json::parse(json(s).dump()).get<Scenario>(), s);

  const auto path = temp_dir("roundtrip") / "nested" / "scenario.json";
  write_scenario(path, s);
  EXPECT_EQ(read_scenario(path), s);
}

TEST(ScenarioJson, KeysCarryUnits) {
  const auto j = json(generate_scenario(GenerationConfig{}, 1));
  EXPECT_TRUE(j.contains("block"));
  EXPECT_TRUE(j.contains("radio"));
  EXPECT_TRUE(j.contains("wsps"));
  EXPECT_TRUE(j.contains("seed"));
  EXPECT_EQ(j["block"]["total_bandwidth_hz"], 50e6);
  const auto& w = j["wsps"][0];
  EXPECT_TRUE(w.contains("alpha"));
  EXPECT_TRUE(w.contains("aggregate_gain_hz"));
  EXPECT_TRUE(w["users"][0].contains("gain_factor_hz"));
  EXPECT_TRUE(w["users"][0].contains("range_m"));
}

TEST(ScenarioJson, RejectsInconsistentFile) {
  auto j = json(generate_scenario(GenerationConfig{}, 1));
  j["wsps"][0]["aggregate_gain_hz"] = 1.0;
  EXPECT_THROW(j.get<Scenario>(), domain_error);
  j = json(generate_scenario(GenerationConfig{}, 1));
  j["wsps"][0]["users"][0]["placement"] = "orbit";
  EXPECT_THROW(j.get<Scenario>(), config_error);
}

TEST(GenerationConfigJson, MhzAtTheBoundary) {
  const auto cfg = json::parse(R"({"wsps": 4, "total_bandwidth_mhz": 20, "guard_band_mhz": 0.5,
                                   "alpha_mode": "uniform", "radio": {"floors": 3}})")
                       .get<GenerationConfig>();
  EXPECT_EQ(cfg.wsp_count, 4u);
  EXPECT_EQ(cfg.block.total_bandwidth_hz, 20e6);
  EXPECT_EQ(cfg.block.guard_band_hz, 0.5e6);
  EXPECT_EQ(cfg.alpha_mode, AlphaMode::uniform);
  EXPECT_EQ(cfg.radio.floors, 3);
  EXPECT_EQ(cfg.radio.carrier_mhz, 2000.0);  // untouched default
  EXPECT_EQ(cfg.users_min, 500u);
  EXPECT_EQ(json(cfg).get<GenerationConfig>().block, cfg.block);
}

TEST(GenerationConfigJson, RejectsBadValues) {
  EXPECT_THROW(json::parse(R"({"alpha_mode": "sorted"})").get<GenerationConfig>(), config_error);
  EXPECT_THROW(json::parse(R"({"users_min": 9, "users_max": 3})").get<GenerationConfig>(), config_error);
}

TEST(OutcomeJson, Keys) {
  const BidMatrix bids(std::vector<std::vector<double>>{{5, 3}, {4, 1}, {2, 1}});
  const auto out = run_auction(bids, 2, Mechanism::partial_uniform);
  const json j = out;
  EXPECT_EQ(j["mechanism"], "partial-uniform");
  EXPECT_EQ(j["allocation"], json({1, 1, 0}));
  EXPECT_EQ(j["payments"], json({2.0, 3.0, 0.0}));
  EXPECT_EQ(j["revenue"], 5.0);
  EXPECT_EQ(j["welfare"], 9.0);
  EXPECT_EQ(j["indicator"], 6.0);
  const auto back = j.get<AuctionOutcome>();
  EXPECT_EQ(back.payments, out.payments);
  EXPECT_EQ(back.indicator, out.indicator);

  const std::vector<double> lone = {1.0};
  EXPECT_TRUE(json(onebid_auction(lone, 1))["indicator"].is_null());
}

TEST(ChannelizationJson, MirrorsResult) {
  const std::vector<Estimates> est = {{0.3, 1e10}, {0.2, 1e9}};
  const auto r = optimize_channel_count(est, 50e6, 1e6, SearchMode::binary);
  const json j = r;
  EXPECT_EQ(j["best_channels"], r.best_channels);
  EXPECT_EQ(j["c_max"], 49);
  EXPECT_EQ(j["search"], "binary");
  EXPECT_EQ(j["sweep"].size(), 49u);
  EXPECT_EQ(j["sweep"][0]["channels"], 1);
  EXPECT_TRUE(j.contains("binary_evaluations"));
}

TEST(JsonFiles, Errors) {
  const auto dir = temp_dir("errors");
  EXPECT_THROW(read_json_file(dir / "missing.json"), config_error);
  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_THROW(read_json_file(dir / "bad.json"), config_error);
}
