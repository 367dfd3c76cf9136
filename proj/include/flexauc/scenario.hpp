#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "flexauc/errors.hpp"
#include "flexauc/random.hpp"

namespace flexauc {

inline constexpr double kHzPerMHz = 1.0e6;

constexpr double mhz_to_hz(double mhz) { return mhz * kHzPerMHz; }
constexpr double hz_to_mhz(double hz) { return hz / kHzPerMHz; }

// Total bandwidth B0 for sale and the guard band b0 inserted between
// adjacent channels. Hz throughout.
struct SpectrumBlock {
  double total_bandwidth_hz = mhz_to_hz(50.0);
  double guard_band_hz = 0.0;

  void validate() const {
    if (!(total_bandwidth_hz > 0.0) || !std::isfinite(total_bandwidth_hz)) {
      throw domain_error("spectrum block: total bandwidth must be positive");
    }
    if (!(guard_band_hz >= 0.0) || !std::isfinite(guard_band_hz)) {
      throw domain_error("spectrum block: guard band must be non-negative");
    }
    if (guard_band_hz > 0.0 && guard_band_hz >= total_bandwidth_hz) {
      throw domain_error("spectrum block: guard band must be narrower than the block");
    }
  }

  bool operator==(const SpectrumBlock&) const = default;
};

/// Width of one of C channels carved from B0 with C - 1 guard bands of b0.
inline double channel_bandwidth(double total_bandwidth_hz, double guard_band_hz, std::size_t channels) {
  if (channels == 0) {
    throw domain_error("channel_bandwidth: need at least one channel");
  }
  const double width = (total_bandwidth_hz + guard_band_hz) / static_cast<double>(channels) - guard_band_hz;
  if (!(width > 0.0)) {
    throw domain_error("channel_bandwidth: too many channels for the guard band");
  }
  return width;
}

enum class Placement { indoor, outdoor };

inline std::string_view to_string(Placement p) {
  return p == Placement::indoor ? "indoor" : "outdoor";
}

inline Placement parse_placement(std::string_view s) {
  if (s == "indoor") return Placement::indoor;
  if (s == "outdoor") return Placement::outdoor;
  throw config_error("unknown placement '" + std::string(s) + "'");
}

struct EndUser {
  double gain_factor_hz = 0.0;  // P * H / n0
  Placement placement = Placement::outdoor;
  double range_m = 0.0;

  void validate() const {
    if (!(gain_factor_hz > 0.0) || !std::isfinite(gain_factor_hz)) {
      throw domain_error("end user: gain factor must be positive and finite");
    }
    if (!(range_m > 0.0)) {
      throw domain_error("end user: range must be positive");
    }
  }

  bool operator==(const EndUser&) const = default;
};

struct Wsp {
  std::size_t id = 0;  // 1-based
  double alpha = 0.0;  // value per unit data rate
  std::vector<EndUser> users;
  double aggregate_gain_hz = 0.0;  // sum of the users' gain factors

  static double sum_gains(const std::vector<EndUser>& users) {
    double g = 0.0;
    for (const auto& u : users) {
      g += u.gain_factor_hz;
    }
    return g;
  }

  void validate() const {
    if (!(alpha > 0.0)) {
      throw domain_error("wsp " + std::to_string(id) + ": alpha must be positive");
    }
    if (users.empty()) {
      throw domain_error("wsp " + std::to_string(id) + ": needs at least one user");
    }
    for (const auto& u : users) {
      u.validate();
    }
    const double expected = sum_gains(users);
    if (!(aggregate_gain_hz > 0.0) ||
        std::abs(aggregate_gain_hz - expected) > 1e-12 * std::abs(expected)) {
      throw domain_error("wsp " + std::to_string(id) + ": aggregate gain does not match its users");
    }
  }

  bool operator==(const Wsp&) const = default;
};

struct RadioConfig {
  double tx_power_w = 1.0;
  double noise_density_db_hz = -204.0;
  double carrier_mhz = 2000.0;
  int floors = 20;
  double shadowing_sigma_db = 8.0;
  double range_m_min = 500.0;
  double range_m_max = 1000.0;
  double indoor_fraction = 0.75;

  void validate() const {
    if (!(tx_power_w > 0.0)) throw config_error("radio: tx power must be positive");
    if (!(carrier_mhz > 0.0)) throw config_error("radio: carrier frequency must be positive");
    if (floors < 1) throw config_error("radio: floors must be at least 1");
    if (!(shadowing_sigma_db >= 0.0)) throw config_error("radio: shadowing sigma must be non-negative");
    if (!(range_m_min > 0.0) || !(range_m_max >= range_m_min)) {
      throw config_error("radio: need 0 < range_m_min <= range_m_max");
    }
    if (!(indoor_fraction >= 0.0 && indoor_fraction <= 1.0)) {
      throw config_error("radio: indoor fraction must lie in [0, 1]");
    }
  }

  bool operator==(const RadioConfig&) const = default;
};

struct Scenario {
  SpectrumBlock block;
  std::vector<Wsp> wsps;
  RadioConfig radio;
  std::uint64_t seed = 0;

  std::size_t wsp_count() const { return wsps.size(); }

  void validate() const {
    block.validate();
    radio.validate();
    if (wsps.empty()) {
      throw domain_error("scenario: no WSPs");
    }
    for (std::size_t i = 0; i < wsps.size(); ++i) {
      if (wsps[i].id != i + 1) {
        throw domain_error("scenario: WSP ids must be 1..N in order");
      }
      wsps[i].validate();
    }
  }

  bool operator==(const Scenario&) const = default;
};

enum class AlphaMode { equally_spaced, uniform };

struct GenerationConfig {
  std::size_t wsp_count = 10;
  std::size_t users_min = 500;
  std::size_t users_max = 1000;
  double alpha_min = 0.2;
  double alpha_max = 0.4;
  AlphaMode alpha_mode = AlphaMode::equally_spaced;
  SpectrumBlock block;
  RadioConfig radio;

  void validate() const {
    if (wsp_count == 0) throw config_error("generation: WSP count must be positive");
    if (users_min == 0 || users_max < users_min) {
      throw config_error("generation: need 1 <= users_min <= users_max");
    }
    if (!(alpha_min > 0.0) || !(alpha_max >= alpha_min)) {
      throw config_error("generation: need 0 < alpha_min <= alpha_max");
    }
    block.validate();
    radio.validate();
  }
};

/// Base station to outdoor user:
/// 10^-4.9 * (r/1000)^-4 * f^-3 * 10^(-shadow/10), f in MHz.
inline double outdoor_attenuation(double range_m, double carrier_mhz, double shadow_db) {
  if (!(range_m > 0.0)) throw domain_error("outdoor_attenuation: range must be positive");
  if (!(carrier_mhz > 0.0)) throw domain_error("outdoor_attenuation: frequency must be positive");
  return std::pow(10.0, -4.9) * std::pow(range_m / 1000.0, -4.0) * std::pow(carrier_mhz, -3.0) *
         std::pow(10.0, -shadow_db / 10.0);
}

/// Base station to indoor user through `floors` floors:
/// 10^-3.7 * (r/1000)^-3 * 10^(-shadow/10) * 10^(-18.3 * n^((n+2)/(n+1) - 0.46) / 10).
inline double indoor_attenuation(double range_m, int floors, double shadow_db) {
  if (!(range_m > 0.0)) throw domain_error("indoor_attenuation: range must be positive");
  if (floors < 1) throw domain_error("indoor_attenuation: floors must be at least 1");
  const double n = static_cast<double>(floors);
  const double floor_loss_db = 18.3 * std::pow(n, (n + 2.0) / (n + 1.0) - 0.46);
  return std::pow(10.0, -3.7) * std::pow(range_m / 1000.0, -3.0) * std::pow(10.0, -shadow_db / 10.0) *
         std::pow(10.0, -floor_loss_db / 10.0);
}

/// P * H / n0 with n0 given in dB/Hz; the result is in Hz.
inline double gain_factor(double tx_power_w, double attenuation, double noise_density_db_hz) {
  if (!(tx_power_w > 0.0) || !(attenuation > 0.0)) {
    throw domain_error("gain_factor: power and attenuation must be positive");
  }
  return tx_power_w * attenuation / std::pow(10.0, noise_density_db_hz / 10.0);
}

inline EndUser draw_user(const RadioConfig& radio, Rng& rng) {
  EndUser user;
  user.range_m = rng.uniform(radio.range_m_min, radio.range_m_max);
  user.placement = rng.bernoulli(radio.indoor_fraction) ? Placement::indoor : Placement::outdoor;
  const double shadow_db = rng.normal(0.0, radio.shadowing_sigma_db);
  const double attenuation = user.placement == Placement::indoor
                                 ? indoor_attenuation(user.range_m, radio.floors, shadow_db)
                                 : outdoor_attenuation(user.range_m, radio.carrier_mhz, shadow_db);
  user.gain_factor_hz = gain_factor(radio.tx_power_w, attenuation, radio.noise_density_db_hz);
  return user;
}

/// Random market instance, a pure function of (config, seed).
///
/// WSP i draws from substream i of the master seed; its user j draws from
/// substream j of the WSP stream. Users draw range, placement, then shadowing.
inline Scenario generate_scenario(const GenerationConfig& config, std::uint64_t seed) {
  config.validate();
  Scenario scenario;
  scenario.block = config.block;
  scenario.radio = config.radio;
  scenario.seed = seed;
  scenario.wsps.reserve(config.wsp_count);

  const Rng master(seed);
  const std::size_t n = config.wsp_count;
  for (std::size_t i = 0; i < n; ++i) {
    Rng wsp_rng = master.substream(i);
    Wsp wsp;
    wsp.id = i + 1;
    if (config.alpha_mode == AlphaMode::equally_spaced) {
      wsp.alpha = n == 1 ? 0.5 * (config.alpha_min + config.alpha_max)
                         : config.alpha_min + static_cast<double>(i) * (config.alpha_max - config.alpha_min) /
                                                  static_cast<double>(n - 1);
    } else {
      wsp.alpha = wsp_rng.uniform(config.alpha_min, config.alpha_max);
    }
    const auto user_count = static_cast<std::size_t>(wsp_rng.uniform_int(config.users_min, config.users_max));
    wsp.users.reserve(user_count);
    for (std::size_t j = 0; j < user_count; ++j) {
      Rng user_rng = wsp_rng.substream(j);
      wsp.users.push_back(draw_user(config.radio, user_rng));
    }
    wsp.aggregate_gain_hz = Wsp::sum_gains(wsp.users);
    scenario.wsps.push_back(std::move(wsp));
  }
  return scenario;
}

}  // namespace flexauc
