#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "flexauc/auction.hpp"
#include "flexauc/channelization.hpp"
#include "flexauc/errors.hpp"
#include "flexauc/scenario.hpp"

// JSON file formats. Scenario files carry Hz and metres with the unit in
// every key; generation configs are written in MHz and converted here.
namespace flexauc {

using json = nlohmann::json;

inline void to_json(json& j, const SpectrumBlock& b) {
  j = {{"total_bandwidth_hz", b.total_bandwidth_hz}, {"guard_band_hz", b.guard_band_hz}};
}

inline void from_json(const json& j, SpectrumBlock& b) {
  j.at("total_bandwidth_hz").get_to(b.total_bandwidth_hz);
  j.at("guard_band_hz").get_to(b.guard_band_hz);
}

inline void to_json(json& j, const RadioConfig& r) {
  j = {{"tx_power_w", r.tx_power_w},
       {"noise_density_db_hz", r.noise_density_db_hz},
       {"carrier_mhz", r.carrier_mhz},
       {"floors", r.floors},
       {"shadowing_sigma_db", r.shadowing_sigma_db},
       {"range_m_min", r.range_m_min},
       {"range_m_max", r.range_m_max},
       {"indoor_fraction", r.indoor_fraction}};
}

// Missing keys keep their defaults, so configs may list overrides only.
inline void from_json(const json& j, RadioConfig& r) {
  r.tx_power_w = j.value("tx_power_w", r.tx_power_w);
  r.noise_density_db_hz = j.value("noise_density_db_hz", r.noise_density_db_hz);
  r.carrier_mhz = j.value("carrier_mhz", r.carrier_mhz);
  r.floors = j.value("floors", r.floors);
  r.shadowing_sigma_db = j.value("shadowing_sigma_db", r.shadowing_sigma_db);
  r.range_m_min = j.value("range_m_min", r.range_m_min);
  r.range_m_max = j.value("range_m_max", r.range_m_max);
  r.indoor_fraction = j.value("indoor_fraction", r.indoor_fraction);
}

inline void to_json(json& j, const EndUser& u) {
  j = {{"gain_factor_hz", u.gain_factor_hz}, {"placement", to_string(u.placement)}, {"range_m", u.range_m}};
}

inline void from_json(const json& j, EndUser& u) {
  j.at("gain_factor_hz").get_to(u.gain_factor_hz);
  u.placement = parse_placement(j.at("placement").get<std::string>());
  j.at("range_m").get_to(u.range_m);
}

inline void to_json(json& j, const Wsp& w) {
  j = {{"id", w.id}, {"alpha", w.alpha}, {"aggregate_gain_hz", w.aggregate_gain_hz}, {"users", w.users}};
}

inline void from_json(const json& j, Wsp& w) {
  j.at("id").get_to(w.id);
  j.at("alpha").get_to(w.alpha);
  j.at("users").get_to(w.users);
  w.aggregate_gain_hz = j.contains("aggregate_gain_hz") ? j.at("aggregate_gain_hz").get<double>()
                                                         : Wsp::sum_gains(w.users);
}

inline void to_json(json& j, const Scenario& s) {
  j = {{"block", s.block}, {"radio", s.radio}, {"wsps", s.wsps}, {"seed", s.seed}};
}

inline void from_json(const json& j, Scenario& s) {
  j.at("block").get_to(s.block);
  j.at("radio").get_to(s.radio);
  j.at("wsps").get_to(s.wsps);
  s.seed = j.value("seed", std::uint64_t{0});
  s.validate();
}

inline void to_json(json& j, const GenerationConfig& c) {
  j = {{"wsps", c.wsp_count},
       {"users_min", c.users_min},
       {"users_max", c.users_max},
       {"alpha_min", c.alpha_min},
       {"alpha_max", c.alpha_max},
       {"alpha_mode", c.alpha_mode == AlphaMode::equally_spaced ? "equally-spaced" : "uniform"},
       {"total_bandwidth_mhz", hz_to_mhz(c.block.total_bandwidth_hz)},
       {"guard_band_mhz", hz_to_mhz(c.block.guard_band_hz)},
       {"radio", c.radio}};
}

inline void from_json(const json& j, GenerationConfig& c) {
  c.wsp_count = j.value("wsps", c.wsp_count);
  c.users_min = j.value("users_min", c.users_min);
  c.users_max = j.value("users_max", c.users_max);
  c.alpha_min = j.value("alpha_min", c.alpha_min);
  c.alpha_max = j.value("alpha_max", c.alpha_max);
  if (j.contains("alpha_mode")) {
    const auto mode = j.at("alpha_mode").get<std::string>();
    if (mode == "equally-spaced") {
      c.alpha_mode = AlphaMode::equally_spaced;
    } else if (mode == "uniform") {
      c.alpha_mode = AlphaMode::uniform;
    } else {
      throw config_error("unknown alpha_mode '" + mode + "'");
    }
  }
  c.block.total_bandwidth_hz = mhz_to_hz(j.value("total_bandwidth_mhz", hz_to_mhz(c.block.total_bandwidth_hz)));
  c.block.guard_band_hz = mhz_to_hz(j.value("guard_band_mhz", hz_to_mhz(c.block.guard_band_hz)));
  if (j.contains("radio")) {
    from_json(j.at("radio"), c.radio);
  }
  c.validate();
}

inline void to_json(json& j, const AuctionOutcome& o) {
  j = {{"mechanism", to_string(o.mechanism)},
       {"channels", o.channels},
       {"allocation", o.allocation.counts},
       {"payments", o.payments},
       {"revenue", o.revenue},
       {"welfare", o.welfare},
       {"indicator", o.indicator ? json(*o.indicator) : json(nullptr)}};
}

inline void from_json(const json& j, AuctionOutcome& o) {
  o.mechanism = parse_mechanism(j.at("mechanism").get<std::string>());
  o.channels = j.value("channels", std::size_t{0});
  j.at("allocation").get_to(o.allocation.counts);
  j.at("payments").get_to(o.payments);
  j.at("revenue").get_to(o.revenue);
  j.at("welfare").get_to(o.welfare);
  o.indicator.reset();
  if (j.contains("indicator") && !j.at("indicator").is_null()) {
    o.indicator = j.at("indicator").get<double>();
  }
}

inline void to_json(json& j, const SweepPoint& p) {
  j = {{"channels", p.channels}, {"channel_hz", p.channel_hz}, {"indicator", p.indicator}};
}

inline void to_json(json& j, const ChannelizationResult& r) {
  j = {{"best_channels", r.best_channels},
       {"indicator_value", r.indicator_value},
       {"c_max", r.c_max},
       {"search", r.search == SearchMode::exhaustive ? "exhaustive" : "binary"},
       {"sweep", r.sweep}};
  if (r.search == SearchMode::binary) {
    j["binary_evaluations"] = r.binary_evaluations;
  }
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw config_error("cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw config_error(path.string() + ": " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) {
    throw config_error("cannot write " + path.string());
  }
  out << j.dump(2) << '\n';
}

inline Scenario read_scenario(const std::filesystem::path& path) { return read_json_file(path).get<Scenario>(); }

inline void write_scenario(const std::filesystem::path& path, const Scenario& s) { write_json_file(path, json(s)); }

}  // namespace flexauc
