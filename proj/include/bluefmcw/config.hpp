#pragma once

// Campaign configuration: a single JSON document, parsed strictly (unknown
// keys are errors, every error names its key path).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bluefmcw/dsp.hpp"
#include "bluefmcw/errors.hpp"
#include "bluefmcw/scene.hpp"
#include "bluefmcw/waveform.hpp"

namespace bluefmcw {

enum class RadarMode { Conventional, Blue };
enum class Alignment { Aligned, Naive };

struct ProcessingConfig {
  std::size_t n_fft = 0;  // 0 = n_samples
  Window window = Window::Rectangular;
  std::size_t guard_bins = 3;
  std::optional<double> noise_snr_db;
  SynthesisOptions synthesis;
};

struct SweepSpec {
  std::string var;
  std::vector<std::string> values;
};

struct CampaignConfig {
  std::string name;
  RadarMode victim_mode = RadarMode::Blue;
  RadarMode aggressor_mode = RadarMode::Conventional;
  Alignment alignment = Alignment::Aligned;
  ChirpPlan chirp;
  ScenarioParams scenario;
  std::vector<std::size_t> adversary_counts{1};  // runs are repeated per count
  ProcessingConfig processing;
  std::size_t runs = 100;
  std::uint64_t master_seed = 1;
  std::string out_dir = ".";
  std::optional<std::size_t> profile_run;  // global run index to export
  std::optional<SweepSpec> sweep;
  std::optional<Scene> scene;  // explicit scene for `simulate`

  std::size_t n_fft() const { return processing.n_fft == 0 ? chirp.n_samples : processing.n_fft; }

  /// Scenario label such as "bvc"; a "-naive" suffix marks naive reconstruction.
  std::string tag() const {
    std::string t;
    t += victim_mode == RadarMode::Blue ? 'b' : 'c';
    t += 'v';
    t += aggressor_mode == RadarMode::Blue ? 'b' : 'c';
    if (victim_mode == RadarMode::Blue && alignment == Alignment::Naive) t += "-naive";
    return t;
  }

  void validate() const {
    if (runs < 1) throw ConfigError("runs", "must be >= 1");
    if (adversary_counts.empty()) throw ConfigError("scenario.n_adversaries", "must not be empty");
    if (n_fft() < chirp.n_samples) throw ConfigError("processing.n_fft", "must be >= n_samples");
    if (processing.guard_bins < 1) throw ConfigError("processing.guard_bins", "must be >= 1");
    if (scenario.object_distance > chirp.max_unambiguous_range())
      throw ConfigError("scenario.object_distance", "beyond the unambiguous range c*f_s/(4*slope)");
    scenario.validate();
  }
};

namespace detail {

using nlohmann::json;

inline std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

inline void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

inline void reject_unknown(const json& j, const std::string& path,
                           std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(join_path(path, key), "unknown key");
  }
}

inline double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

inline std::size_t read_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw ConfigError(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline bool read_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
  return j.get<bool>();
}

inline std::string read_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

inline std::pair<double, double> read_range(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(path, "expected [min, max]");
  const double lo = read_number(j[0], path + "[0]");
  const double hi = read_number(j[1], path + "[1]");
  if (!(lo <= hi)) throw ConfigError(path, "min must not exceed max");
  return {lo, hi};
}

inline RadarMode parse_mode(const std::string& s, const std::string& path) {
  if (s == "conventional") return RadarMode::Conventional;
  if (s == "blue") return RadarMode::Blue;
  throw ConfigError(path, "expected \"conventional\" or \"blue\", got \"" + s + "\"");
}

inline Alignment parse_alignment(const std::string& s, const std::string& path) {
  if (s == "aligned") return Alignment::Aligned;
  if (s == "naive") return Alignment::Naive;
  throw ConfigError(path, "expected \"aligned\" or \"naive\", got \"" + s + "\"");
}

inline Window parse_window(const std::string& s, const std::string& path) {
  if (s == "rectangular") return Window::Rectangular;
  if (s == "hann") return Window::Hann;
  throw ConfigError(path, "expected \"rectangular\" or \"hann\", got \"" + s + "\"");
}

inline ChirpPlan parse_chirp(const json& j, const std::string& path) {
  require_object(j, path);
  reject_unknown(j, path, {"f_c", "slope", "f_s", "n_samples", "n_sub"});
  for (const char* k : {"f_c", "slope", "f_s", "n_samples", "n_sub"})
    if (!j.contains(k)) throw ConfigError(join_path(path, k), "missing");
  try {
    return make_chirp_plan(read_number(j["f_c"], path + ".f_c"),
                           read_number(j["slope"], path + ".slope"),
                           read_number(j["f_s"], path + ".f_s"),
                           read_count(j["n_samples"], path + ".n_samples"),
                           read_count(j["n_sub"], path + ".n_sub"));
  } catch (const ConfigError& e) {
    // make_chirp_plan reports keys relative to "chirp"
    if (path == "chirp") throw;
    throw ConfigError(path, e.what());
  }
}

inline Scene parse_scene(const json& j, const std::string& path, const ChirpPlan& plan) {
  require_object(j, path);
  reject_unknown(j, path, {"reflectors", "adversaries", "noise_snr_db"});
  Scene s;
  if (j.contains("reflectors")) {
    const auto& arr = j["reflectors"];
    if (!arr.is_array()) throw ConfigError(path + ".reflectors", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = path + ".reflectors[" + std::to_string(i) + "]";
      require_object(arr[i], p);
      reject_unknown(arr[i], p, {"distance", "attenuation"});
      Reflector r;
      if (!arr[i].contains("distance")) throw ConfigError(p + ".distance", "missing");
      r.distance = read_number(arr[i]["distance"], p + ".distance");
      if (arr[i].contains("attenuation"))
        r.attenuation = read_number(arr[i]["attenuation"], p + ".attenuation");
      if (!(r.distance >= 0.0)) throw ConfigError(p + ".distance", "must be >= 0");
      if (!(r.attenuation > 0.0)) throw ConfigError(p + ".attenuation", "must be > 0");
      s.reflectors.push_back(r);
    }
  }
  if (j.contains("adversaries")) {
    const auto& arr = j["adversaries"];
    if (!arr.is_array()) throw ConfigError(path + ".adversaries", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string p = path + ".adversaries[" + std::to_string(i) + "]";
      require_object(arr[i], p);
      reject_unknown(arr[i], p, {"kind", "ghost_distance", "power_sir_db", "hopping_seed",
                                 "start_offset"});
      Adversary a;
      a.own_plan = plan;
      const std::string kind =
          arr[i].contains("kind") ? read_string(arr[i]["kind"], p + ".kind") : "conventional";
      a.kind = parse_mode(kind, p + ".kind") == RadarMode::Blue ? AdversaryKind::BlueChirp
                                                                 : AdversaryKind::ConventionalChirp;
      if (!arr[i].contains("ghost_distance")) throw ConfigError(p + ".ghost_distance", "missing");
      a.ghost_distance = read_number(arr[i]["ghost_distance"], p + ".ghost_distance");
      if (!(a.ghost_distance >= 0.0)) throw ConfigError(p + ".ghost_distance", "must be >= 0");
      if (!arr[i].contains("power_sir_db")) throw ConfigError(p + ".power_sir_db", "missing");
      a.power_sir_db = read_number(arr[i]["power_sir_db"], p + ".power_sir_db");
      if (arr[i].contains("start_offset"))
        a.start_offset = read_number(arr[i]["start_offset"], p + ".start_offset");
      if (a.kind == AdversaryKind::BlueChirp) {
        const std::uint64_t seed =
            arr[i].contains("hopping_seed") ? read_count(arr[i]["hopping_seed"], p + ".hopping_seed")
                                            : 0;
        a.own_hopping = random_hopping_plan(plan.n_sub, seed);
      }
      s.adversaries.push_back(std::move(a));
    }
  }
  if (j.contains("noise_snr_db") && !j["noise_snr_db"].is_null())
    s.noise_snr_db = read_number(j["noise_snr_db"], path + ".noise_snr_db");
  return s;
}

}  // namespace detail

/// Parses a campaign document. Missing sections keep their defaults.
inline CampaignConfig parse_config(const nlohmann::json& j) {
  using namespace detail;
  require_object(j, "");
  reject_unknown(j, "", {"name", "victim_mode", "aggressor_mode", "alignment", "chirp", "scenario",
                         "processing", "runs", "master_seed", "outputs", "sweep", "scene"});
  CampaignConfig c;
  if (!j.contains("chirp")) throw ConfigError("chirp", "missing");
  c.chirp = parse_chirp(j["chirp"], "chirp");
  if (j.contains("name")) c.name = read_string(j["name"], "name");
  if (j.contains("victim_mode"))
    c.victim_mode = parse_mode(read_string(j["victim_mode"], "victim_mode"), "victim_mode");
  if (j.contains("aggressor_mode"))
    c.aggressor_mode =
        parse_mode(read_string(j["aggressor_mode"], "aggressor_mode"), "aggressor_mode");
  if (j.contains("alignment"))
    c.alignment = parse_alignment(read_string(j["alignment"], "alignment"), "alignment");

  if (j.contains("scenario")) {
    const auto& s = j["scenario"];
    require_object(s, "scenario");
    reject_unknown(s, "scenario",
                   {"n_adversaries", "distance_range", "sir_range_db", "object_distance"});
    if (s.contains("n_adversaries")) {
      const auto& n = s["n_adversaries"];
      c.adversary_counts.clear();
      if (n.is_array()) {
        for (std::size_t i = 0; i < n.size(); ++i)
          c.adversary_counts.push_back(
              read_count(n[i], "scenario.n_adversaries[" + std::to_string(i) + "]"));
      } else {
        c.adversary_counts.push_back(read_count(n, "scenario.n_adversaries"));
      }
    }
    if (s.contains("distance_range"))
      c.scenario.distance_range = read_range(s["distance_range"], "scenario.distance_range");
    if (s.contains("sir_range_db"))
      c.scenario.sir_range_db = read_range(s["sir_range_db"], "scenario.sir_range_db");
    if (s.contains("object_distance"))
      c.scenario.object_distance = read_number(s["object_distance"], "scenario.object_distance");
  }
  c.scenario.adversary_kind = c.aggressor_mode == RadarMode::Blue
                                  ? AdversaryKind::BlueChirp
                                  : AdversaryKind::ConventionalChirp;
  c.scenario.n_adversaries = c.adversary_counts.empty() ? 0 : c.adversary_counts.front();

  if (j.contains("processing")) {
    const auto& p = j["processing"];
    require_object(p, "processing");
    reject_unknown(p, "processing", {"n_fft", "window", "guard_bins", "noise_snr_db",
                                     "zero_slot_transients", "lowpass_adversaries"});
    if (p.contains("n_fft")) c.processing.n_fft = read_count(p["n_fft"], "processing.n_fft");
    if (p.contains("window"))
      c.processing.window = parse_window(read_string(p["window"], "processing.window"),
                                         "processing.window");
    if (p.contains("guard_bins"))
      c.processing.guard_bins = read_count(p["guard_bins"], "processing.guard_bins");
    if (p.contains("noise_snr_db") && !p["noise_snr_db"].is_null())
      c.processing.noise_snr_db = read_number(p["noise_snr_db"], "processing.noise_snr_db");
    if (p.contains("zero_slot_transients"))
      c.processing.synthesis.zero_slot_transients =
          read_bool(p["zero_slot_transients"], "processing.zero_slot_transients");
    if (p.contains("lowpass_adversaries"))
      c.processing.synthesis.lowpass_adversaries =
          read_bool(p["lowpass_adversaries"], "processing.lowpass_adversaries");
  }

  if (j.contains("runs")) c.runs = read_count(j["runs"], "runs");
  if (j.contains("master_seed")) c.master_seed = read_count(j["master_seed"], "master_seed");

  if (j.contains("outputs")) {
    const auto& o = j["outputs"];
    require_object(o, "outputs");
    reject_unknown(o, "outputs", {"dir", "profile_run"});
    if (o.contains("dir")) c.out_dir = read_string(o["dir"], "outputs.dir");
    if (o.contains("profile_run") && !o["profile_run"].is_null())
      c.profile_run = read_count(o["profile_run"], "outputs.profile_run");
  }

  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    require_object(s, "sweep");
    reject_unknown(s, "sweep", {"var", "values"});
    SweepSpec spec;
    if (!s.contains("var")) throw ConfigError("sweep.var", "missing");
    spec.var = read_string(s["var"], "sweep.var");
    if (!s.contains("values") || !s["values"].is_array())
      throw ConfigError("sweep.values", "expected an array");
    for (const auto& v : s["values"]) spec.values.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    c.sweep = std::move(spec);
  }

  if (j.contains("scene")) c.scene = parse_scene(j["scene"], "scene", c.chirp);

  if (c.name.empty()) c.name = c.tag();
  c.validate();
  return c;
}

inline CampaignConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace bluefmcw
