#pragma once

// Reflectors, adversary emitters, and random scenario sampling.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bluefmcw/errors.hpp"
#include "bluefmcw/rng.hpp"
#include "bluefmcw/waveform.hpp"

namespace bluefmcw {

/// Round-trip time of flight for a reflector at `distance` meters.
inline double tof(double distance) {
  if (!(distance >= 0.0)) throw std::invalid_argument("tof: distance must be >= 0");
  return 2.0 * distance / kSpeedOfLight;
}

struct Reflector {
  double distance = 0.0;     // m
  double attenuation = 1.0;  // linear amplitude
};

enum class AdversaryKind { ConventionalChirp, BlueChirp };

/// A spoofer or interferer. Its signal reaches the victim delayed by
/// tof(ghost_distance) + start_offset, so under a conventional victim it
/// shows up as a ghost at ghost_distance.
struct Adversary {
  AdversaryKind kind = AdversaryKind::ConventionalChirp;
  double ghost_distance = 0.0;  // m
  double power_sir_db = 0.0;    // input SIR relative to the strongest reflector echo
  ChirpPlan own_plan;
  std::optional<HoppingPlan> own_hopping;  // required when kind == BlueChirp
  double start_offset = 0.0;               // s, frame offset; 0 = synchronised

  double delay() const { return tof(ghost_distance) + start_offset; }

  /// Hopping used by this emitter; identity for a conventional chirp.
  HoppingPlan hopping() const {
    if (kind == AdversaryKind::BlueChirp) {
      if (!own_hopping) throw std::invalid_argument("Adversary: BlueChirp without hopping plan");
      return *own_hopping;
    }
    return HoppingPlan::identity(own_plan.n_sub);
  }
};

struct Scene {
  std::vector<Reflector> reflectors;
  std::vector<Adversary> adversaries;
  std::optional<double> noise_snr_db;  // per-sample SNR vs strongest echo; nullopt = noise-free

  /// Amplitude reference for adversary and noise power: the strongest
  /// reflector, or 1 when the scene has none.
  double reference_amplitude() const noexcept {
    double a = 0.0;
    for (const auto& r : reflectors) a = std::max(a, r.attenuation);
    return a > 0.0 ? a : 1.0;
  }

  Scene without_adversaries() const {
    Scene s = *this;
    s.adversaries.clear();
    return s;
  }
};

struct ScenarioParams {
  std::size_t n_adversaries = 1;
  std::pair<double, double> distance_range{0.5, 200.0};  // m
  std::pair<double, double> sir_range_db{2.5, 6.0};
  double object_distance = 25.0;  // m
  AdversaryKind adversary_kind = AdversaryKind::ConventionalChirp;

  void validate() const {
    if (!(distance_range.first >= 0.0) || !(distance_range.first <= distance_range.second))
      throw ConfigError("scenario.distance_range", "need 0 <= min <= max");
    if (!(sir_range_db.first <= sir_range_db.second))
      throw ConfigError("scenario.sir_range_db", "need min <= max");
    if (!(object_distance >= 0.0))
      throw ConfigError("scenario.object_distance", "must be >= 0");
  }
};

/// Draws one scene: a unit-amplitude reflector at params.object_distance and
/// params.n_adversaries emitters with uniform distance and SIR.
///
/// Every adversary consumes the same number of draws (distance, SIR, hopping
/// seed) whatever its kind, so scenes stay paired across scenario variants
/// that share a seed.
inline Scene sample_scene(const ScenarioParams& params, const ChirpPlan& plan, Rng& rng) {
  params.validate();
  Scene scene;
  scene.reflectors.push_back({params.object_distance, 1.0});
  scene.adversaries.reserve(params.n_adversaries);
  for (std::size_t i = 0; i < params.n_adversaries; ++i) {
    Adversary a;
    a.kind = params.adversary_kind;
    a.ghost_distance = rng.uniform(params.distance_range.first, params.distance_range.second);
    a.power_sir_db = rng.uniform(params.sir_range_db.first, params.sir_range_db.second);
    a.own_plan = plan;
    const std::uint64_t hop_seed = rng.next();
    if (a.kind == AdversaryKind::BlueChirp) a.own_hopping = random_hopping_plan(plan.n_sub, hop_seed);
    scene.adversaries.push_back(std::move(a));
  }
  return scene;
}

// ---------------------------------------------------------------------------
// JSON

NLOHMANN_JSON_SERIALIZE_ENUM(AdversaryKind, {
                                                {AdversaryKind::ConventionalChirp, "conventional"},
                                                {AdversaryKind::BlueChirp, "blue"},
                                            })

inline void to_json(nlohmann::json& j, const ChirpPlan& p) {
  j = {{"f_c", p.f_c}, {"slope", p.slope}, {"f_s", p.f_s}, {"n_samples", p.n_samples},
       {"n_sub", p.n_sub}};
}

inline void to_json(nlohmann::json& j, const Reflector& r) {
  j = {{"distance", r.distance}, {"attenuation", r.attenuation}};
}

inline void to_json(nlohmann::json& j, const Adversary& a) {
  j = {{"kind", a.kind},
       {"ghost_distance", a.ghost_distance},
       {"power_sir_db", a.power_sir_db},
       {"start_offset", a.start_offset},
       {"own_plan", a.own_plan}};
  if (a.own_hopping) {
    j["own_hopping"] = {{"seed", a.own_hopping->seed()},
                        {"perm", std::vector<std::size_t>(a.own_hopping->perm().begin(),
                                                          a.own_hopping->perm().end())}};
  } else {
    j["own_hopping"] = nullptr;
  }
}

inline void to_json(nlohmann::json& j, const Scene& s) {
  j = {{"reflectors", s.reflectors}, {"adversaries", s.adversaries}};
  if (s.noise_snr_db)
    j["noise_snr_db"] = *s.noise_snr_db;
  else
    j["noise_snr_db"] = nullptr;
}

}  // namespace bluefmcw
