#pragma once

// Built-in experiment presets. Each mirrors presets/<name>.json in the
// source tree.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bluefmcw/config.hpp"
#include "bluefmcw/errors.hpp"

namespace bluefmcw {

inline const std::vector<std::pair<std::string_view, std::string_view>>& presets() {
  static const std::vector<std::pair<std::string_view, std::string_view>> table{
      {"cvc", R"json({
  "name": "cvc",
  "victim_mode": "conventional",
  "aggressor_mode": "conventional",
  "alignment": "aligned",
  "chirp": {"f_c": 24e9, "slope": 24.785e12, "f_s": 20e6, "n_samples": 4096, "n_sub": 32},
  "scenario": {"n_adversaries": 1, "distance_range": [0.5, 200], "sir_range_db": [2.5, 6], "object_distance": 25},
  "processing": {"n_fft": 4096, "window": "rectangular", "guard_bins": 3, "noise_snr_db": null},
  "runs": 100,
  "master_seed": 1,
  "outputs": {"dir": "out/cvc", "profile_run": 0}
}
)json"},
      {"bvc", R"json({
  "name": "bvc",
  "victim_mode": "blue",
  "aggressor_mode": "conventional",
  "alignment": "aligned",
  "chirp": {"f_c": 24e9, "slope": 24.785e12, "f_s": 20e6, "n_samples": 4096, "n_sub": 32},
  "scenario": {"n_adversaries": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10], "distance_range": [0.5, 200], "sir_range_db": [2.5, 6], "object_distance": 25},
  "processing": {"n_fft": 4096, "window": "rectangular", "guard_bins": 3, "noise_snr_db": null},
  "runs": 100,
  "master_seed": 1,
  "outputs": {"dir": "out/bvc", "profile_run": 0}
}
)json"},
      {"bvb", R"json({
  "name": "bvb",
  "victim_mode": "blue",
  "aggressor_mode": "blue",
  "alignment": "aligned",
  "chirp": {"f_c": 24e9, "slope": 24.785e12, "f_s": 20e6, "n_samples": 4096, "n_sub": 32},
  "scenario": {"n_adversaries": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10], "distance_range": [0.5, 200], "sir_range_db": [2.5, 6], "object_distance": 25},
  "processing": {"n_fft": 4096, "window": "rectangular", "guard_bins": 3, "noise_snr_db": null},
  "runs": 100,
  "master_seed": 1,
  "outputs": {"dir": "out/bvb", "profile_run": 0}
}
)json"},
      {"fig6", R"json({
  "name": "fig6",
  "victim_mode": "blue",
  "aggressor_mode": "conventional",
  "alignment": "aligned",
  "chirp": {"f_c": 24e9, "slope": 24.785e12, "f_s": 20e6, "n_samples": 4096, "n_sub": 32},
  "scenario": {"n_adversaries": 1, "distance_range": [0.5, 200], "sir_range_db": [2.5, 6], "object_distance": 25},
  "processing": {"n_fft": 4096, "window": "rectangular", "guard_bins": 3, "noise_snr_db": null},
  "runs": 1,
  "master_seed": 1,
  "outputs": {"dir": "out/fig6", "profile_run": 0},
  "scene": {
    "reflectors": [{"distance": 20, "attenuation": 1}, {"distance": 35, "attenuation": 1}],
    "adversaries": [{"kind": "conventional", "ghost_distance": 50, "power_sir_db": 3}]
  }
}
)json"},
      {"fig7", R"json({
  "name": "fig7",
  "victim_mode": "blue",
  "aggressor_mode": "conventional",
  "alignment": "aligned",
  "chirp": {"f_c": 24e9, "slope": 24.785e12, "f_s": 20e6, "n_samples": 4096, "n_sub": 32},
  "scenario": {"n_adversaries": 1, "distance_range": [0.5, 200], "sir_range_db": [2.5, 6], "object_distance": 25},
  "processing": {"n_fft": 4096, "window": "rectangular", "guard_bins": 3, "noise_snr_db": null},
  "runs": 100,
  "master_seed": 1,
  "outputs": {"dir": "out/fig7", "profile_run": 0},
  "sweep": {"var": "n_adversaries", "values": ["1", "2", "3", "4", "5", "6", "7", "8", "9", "10"]}
}
)json"},
      {"fig9", R"json({
  "name": "fig9",
  "victim_mode": "blue",
  "aggressor_mode": "conventional",
  "alignment": "aligned",
  "chirp": {"f_c": 24e9, "slope": 24.785e12, "f_s": 20e6, "n_samples": 4096, "n_sub": 32},
  "scenario": {"n_adversaries": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10], "distance_range": [0.5, 200], "sir_range_db": [2.5, 6], "object_distance": 25},
  "processing": {"n_fft": 4096, "window": "rectangular", "guard_bins": 3, "noise_snr_db": null},
  "runs": 100,
  "master_seed": 1,
  "outputs": {"dir": "out/fig9", "profile_run": 0},
  "sweep": {"var": "alignment", "values": ["aligned", "naive"]}
}
)json"},
      {"fig10", R"json({
  "name": "fig10",
  "victim_mode": "blue",
  "aggressor_mode": "conventional",
  "alignment": "aligned",
  "chirp": {"f_c": 24e9, "slope": 24.785e12, "f_s": 20e6, "n_samples": 4096, "n_sub": 32},
  "scenario": {"n_adversaries": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10], "distance_range": [0.5, 200], "sir_range_db": [2.5, 6], "object_distance": 25},
  "processing": {"n_fft": 4096, "window": "rectangular", "guard_bins": 3, "noise_snr_db": null},
  "runs": 100,
  "master_seed": 1,
  "outputs": {"dir": "out/fig10", "profile_run": 0},
  "sweep": {"var": "slope", "values": ["24.785e12", "26.5625e12"]}
}
)json"},
      {"fig11", R"json({
  "name": "fig11",
  "victim_mode": "blue",
  "aggressor_mode": "conventional",
  "alignment": "aligned",
  "chirp": {"f_c": 24e9, "slope": 24.785e12, "f_s": 20e6, "n_samples": 4096, "n_sub": 32},
  "scenario": {"n_adversaries": 1, "distance_range": [0.5, 200], "sir_range_db": [2.5, 6], "object_distance": 25},
  "processing": {"n_fft": 4096, "window": "rectangular", "guard_bins": 3, "noise_snr_db": 30},
  "runs": 100,
  "master_seed": 1,
  "outputs": {"dir": "out/fig11", "profile_run": 0},
  "sweep": {"var": "victim_mode", "values": ["conventional", "blue"]}
}
)json"},
  };
  return table;
}

inline std::string_view preset_text(std::string_view name) {
  for (const auto& [n, text] : presets())
    if (n == name) return text;
  throw ConfigError("preset", "unknown preset \"" + std::string(name) + "\"");
}

inline CampaignConfig load_preset(std::string_view name) {
  return parse_config_text(std::string(preset_text(name)));
}

}  // namespace bluefmcw
