#pragma once

// Seeded Monte Carlo campaigns, parameter sweeps, single-scene simulation and
// result emission.
//
// Run i of a campaign draws everything from Rng(child_seed(master_seed, i)),
// in this order: the scene, the victim hopping seed, the noise seed. Runs are
// independent, so they can execute on any number of workers; results are
// stored by run index and written in that order.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "bluefmcw/analysis.hpp"
#include "bluefmcw/config.hpp"
#include "bluefmcw/dsp.hpp"
#include "bluefmcw/errors.hpp"
#include "bluefmcw/rng.hpp"
#include "bluefmcw/scene.hpp"
#include "bluefmcw/waveform.hpp"

namespace bluefmcw {

struct MetricsResult {
  std::string scenario;
  std::uint64_t seed = 0;
  std::size_t run = 0;
  std::size_t n_adversaries = 0;
  std::optional<double> sir_db;  // nullopt = undefined (nothing to interfere)
  std::optional<double> sinr_db;
  std::optional<double> sinr_loss_db;
};

struct MetricsTable {
  std::string scenario;
  std::vector<MetricsResult> rows;
  std::optional<Summary> sir;
  std::optional<Summary> sinr_loss;
  std::map<std::size_t, Summary> sir_by_count;
  std::map<std::size_t, Summary> sinr_loss_by_count;
  std::size_t undefined_sir = 0;
  // Populated when the config names a profile_run.
  std::optional<RangeProfile> profile;
  std::optional<Scene> profile_scene;
};

namespace detail {

struct RunOutput {
  MetricsResult metrics;
  std::optional<RangeProfile> profile;
  std::optional<Scene> scene;
};

struct RunInputs {
  Scene scene;
  HoppingPlan victim_hopping;
  std::uint64_t hopping_seed = 0;
  std::uint64_t noise_seed = 0;
};

inline RunInputs draw_run_inputs(const CampaignConfig& cfg, std::size_t n_adversaries,
                                 std::uint64_t seed) {
  Rng rng(seed);
  ScenarioParams params = cfg.scenario;
  params.n_adversaries = n_adversaries;
  RunInputs in;
  in.scene = sample_scene(params, cfg.chirp, rng);
  in.scene.noise_snr_db = cfg.processing.noise_snr_db;
  in.hopping_seed = rng.next();
  in.noise_seed = rng.next();
  in.victim_hopping = cfg.victim_mode == RadarMode::Blue
                          ? random_hopping_plan(cfg.chirp.n_sub, in.hopping_seed)
                          : HoppingPlan::identity(cfg.chirp.n_sub);
  return in;
}

inline BeatSignal reconstruct(const CampaignConfig& cfg, const SegmentedBeat& seg) {
  if (cfg.victim_mode == RadarMode::Conventional) return reconstruct_conventional(seg);
  return cfg.alignment == Alignment::Aligned ? reconstruct_aligned(seg) : reconstruct_naive(seg);
}

inline RunOutput execute_run(const CampaignConfig& cfg, std::size_t n_adversaries,
                             std::size_t run_index, bool keep_profile) {
  const std::uint64_t seed = child_seed(cfg.master_seed, run_index);
  const RunInputs in = draw_run_inputs(cfg, n_adversaries, seed);
  const auto& plan = cfg.chirp;
  const auto& proc = cfg.processing;
  const double d = cfg.scenario.object_distance;

  Rng noise(in.noise_seed);
  const auto seg = simulate_beat(plan, in.victim_hopping, in.scene, &noise, proc.synthesis);
  const auto profile = range_profile(reconstruct(cfg, seg), plan, cfg.n_fft(), proc.window);

  // Adversary-free conventional baseline on the same noise realisation.
  Rng base_noise(in.noise_seed);
  const auto base_seg = simulate_beat(plan, HoppingPlan::identity(plan.n_sub),
                                      in.scene.without_adversaries(), &base_noise, proc.synthesis);
  const auto base_profile =
      range_profile(reconstruct_conventional(base_seg), plan, cfg.n_fft(), proc.window);

  RunOutput out;
  auto& m = out.metrics;
  m.scenario = cfg.name;
  m.seed = seed;
  m.run = run_index;
  m.n_adversaries = n_adversaries;
  if (!in.scene.adversaries.empty() || in.scene.noise_snr_db)
    m.sir_db = compute_sir(profile, d, proc.guard_bins);
  m.sinr_db = compute_sinr(profile, d, proc.guard_bins);
  m.sinr_loss_db = compute_sinr_loss(profile, base_profile, d, proc.guard_bins);
  if (keep_profile) {
    out.profile = profile;
    out.scene = in.scene;
  }
  return out;
}

/// Calls fn(i) for i in [0, n) on `jobs` threads; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

inline std::vector<double> defined(const std::vector<MetricsResult>& rows,
                                   std::optional<double> MetricsResult::*field,
                                   std::optional<std::size_t> count = std::nullopt) {
  std::vector<double> v;
  for (const auto& r : rows)
    if ((r.*field) && (!count || r.n_adversaries == *count)) v.push_back(*(r.*field));
  return v;
}

}  // namespace detail

/// Runs cfg.runs Monte Carlo runs for every adversary count in
/// cfg.adversary_counts. Global run index = count_position * runs + r.
inline MetricsTable run_campaign(const CampaignConfig& cfg, unsigned jobs = 1) {
  cfg.validate();
  const std::size_t total = cfg.runs * cfg.adversary_counts.size();
  std::vector<detail::RunOutput> outputs(total);
  detail::parallel_for(total, jobs, [&](std::size_t i) {
    const std::size_t count = cfg.adversary_counts[i / cfg.runs];
    outputs[i] = detail::execute_run(cfg, count, i, cfg.profile_run && *cfg.profile_run == i);
  });

  MetricsTable t;
  t.scenario = cfg.name;
  t.rows.reserve(total);
  for (auto& o : outputs) {
    t.rows.push_back(o.metrics);
    if (o.profile) {
      t.profile = std::move(o.profile);
      t.profile_scene = std::move(o.scene);
    }
  }
  const auto sirs = detail::defined(t.rows, &MetricsResult::sir_db);
  const auto losses = detail::defined(t.rows, &MetricsResult::sinr_loss_db);
  t.undefined_sir = t.rows.size() - sirs.size();
  if (!sirs.empty()) t.sir = summarize(sirs);
  if (!losses.empty()) t.sinr_loss = summarize(losses);
  for (std::size_t count : cfg.adversary_counts) {
    const auto s = detail::defined(t.rows, &MetricsResult::sir_db, count);
    if (!s.empty()) t.sir_by_count[count] = summarize(s);
    const auto l = detail::defined(t.rows, &MetricsResult::sinr_loss_db, count);
    if (!l.empty()) t.sinr_loss_by_count[count] = summarize(l);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Sweeps

inline const std::vector<std::string>& sweep_variables() {
  static const std::vector<std::string> vars{"n_adversaries", "alignment", "slope", "victim_mode",
                                             "aggressor_mode"};
  return vars;
}

/// Copy of `base` with one variable set from its textual value.
inline CampaignConfig apply_sweep_value(const CampaignConfig& base, const std::string& var,
                                        const std::string& value) {
  CampaignConfig c = base;
  const std::string key = "sweep.values";
  try {
    if (var == "n_adversaries") {
      std::size_t pos = 0;
      const long long n = std::stoll(value, &pos);
      if (pos != value.size() || n < 0) throw ConfigError(key, "bad adversary count: " + value);
      c.adversary_counts = {static_cast<std::size_t>(n)};
      c.scenario.n_adversaries = static_cast<std::size_t>(n);
    } else if (var == "alignment") {
      c.alignment = detail::parse_alignment(value, key);
    } else if (var == "slope") {
      std::size_t pos = 0;
      const double s = std::stod(value, &pos);
      if (pos != value.size()) throw ConfigError(key, "bad slope: " + value);
      c.chirp = make_chirp_plan(c.chirp.f_c, s, c.chirp.f_s, c.chirp.n_samples, c.chirp.n_sub);
    } else if (var == "victim_mode") {
      c.victim_mode = detail::parse_mode(value, key);
    } else if (var == "aggressor_mode") {
      c.aggressor_mode = detail::parse_mode(value, key);
      c.scenario.adversary_kind = c.aggressor_mode == RadarMode::Blue
                                      ? AdversaryKind::BlueChirp
                                      : AdversaryKind::ConventionalChirp;
    } else {
      throw ConfigError("sweep.var", "unknown sweep variable \"" + var + "\"");
    }
  } catch (const std::logic_error&) {
    throw ConfigError(key, "cannot parse \"" + value + "\" for " + var);
  }
  c.validate();
  return c;
}

struct SweepResult {
  std::string var;
  std::vector<std::pair<std::string, MetricsTable>> tables;  // in value order
};

/// One campaign per value, all sharing the base config's master seed.
inline SweepResult run_sweep(const CampaignConfig& base, const std::string& var,
                             const std::vector<std::string>& values, unsigned jobs = 1) {
  if (std::find(sweep_variables().begin(), sweep_variables().end(), var) == sweep_variables().end())
    throw ConfigError("sweep.var", "unknown sweep variable \"" + var + "\"");
  if (values.empty()) throw ConfigError("sweep.values", "must not be empty");
  SweepResult r;
  r.var = var;
  for (const auto& v : values) {
    CampaignConfig c = apply_sweep_value(base, var, v);
    c.name = base.name + "[" + var + "=" + v + "]";
    r.tables.emplace_back(v, run_campaign(c, jobs));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Single scene

struct SimulationResult {
  Scene scene;
  HoppingPlan hopping;
  BeatSignal conventional;
  BeatSignal naive;
  BeatSignal aligned;
  RangeProfile conventional_profile;
  RangeProfile naive_profile;
  RangeProfile aligned_profile;
};

/// One scene (cfg.scene, or run 0 of the campaign's scenario) seen by a
/// conventional victim and by a hopping victim with both reconstructions.
inline SimulationResult simulate_scene(const CampaignConfig& cfg) {
  const std::uint64_t seed = child_seed(cfg.master_seed, 0);
  detail::RunInputs in = detail::draw_run_inputs(cfg, cfg.adversary_counts.front(), seed);
  if (cfg.scene) {
    in.scene = *cfg.scene;
    if (!in.scene.noise_snr_db) in.scene.noise_snr_db = cfg.processing.noise_snr_db;
  }
  // The hopping victim is simulated whatever victim_mode says.
  in.victim_hopping = random_hopping_plan(cfg.chirp.n_sub, in.hopping_seed);

  const auto& plan = cfg.chirp;
  const auto& proc = cfg.processing;
  SimulationResult r;
  r.scene = in.scene;
  r.hopping = in.victim_hopping;

  Rng conv_noise(in.noise_seed);
  const auto conv = simulate_beat(plan, HoppingPlan::identity(plan.n_sub), in.scene, &conv_noise,
                                  proc.synthesis);
  Rng hop_noise(in.noise_seed);
  const auto hop = simulate_beat(plan, in.victim_hopping, in.scene, &hop_noise, proc.synthesis);
  r.conventional = reconstruct_conventional(conv);
  r.naive = reconstruct_naive(hop);
  r.aligned = reconstruct_aligned(hop);
  r.conventional_profile = range_profile(r.conventional, plan, cfg.n_fft(), proc.window);
  r.naive_profile = range_profile(r.naive, plan, cfg.n_fft(), proc.window);
  r.aligned_profile = range_profile(r.aligned, plan, cfg.n_fft(), proc.window);
  return r;
}

// ---------------------------------------------------------------------------
// Design report

/// Sub-chirp design figures for a plan. B_sub and f_s are snapped to the
/// millihertz grid before the exact ratio is formed.
inline nlohmann::json design_report(const ChirpPlan& plan, std::uint64_t hopping_seed) {
  const Rational b_sub = Rational::from_double(plan.sub_bandwidth());
  const Rational f_s = Rational::from_double(plan.f_s);
  const Rational ratio = b_sub / f_s;
  const auto all_offsets = all_permutation_offsets(plan.n_sub);
  const auto hop = random_hopping_plan(plan.n_sub, hopping_seed);
  const auto hop_offsets = hop.offsets();
  const Rational zero(0);

  nlohmann::json j;
  j["chirp"] = plan;
  j["duration_s"] = plan.duration();
  j["sub_duration_s"] = plan.sub_duration();
  j["bandwidth_hz"] = plan.bandwidth();
  j["sub_bandwidth_hz"] = plan.sub_bandwidth();
  j["samples_per_slot"] = plan.samples_per_slot();
  j["range_resolution_m"] = plan.range_resolution();
  j["sub_range_resolution_m"] = plan.sub_range_resolution();
  j["max_unambiguous_range_m"] = plan.max_unambiguous_range();
  j["b_sub_over_f_s"] = {{"n", ratio.num()}, {"m", ratio.den()}};
  j["diversity_bound_m"] = diversity_bound(b_sub, f_s);
  j["permutation_offset_count"] = all_offsets.size();
  j["realized_diversity_all_offsets"] =
      adversary_beat_freqs(zero, b_sub, f_s, all_offsets).size();
  j["hopping_seed"] = hopping_seed;
  j["realized_diversity_for_seed"] = adversary_beat_freqs(zero, b_sub, f_s, hop_offsets).size();
  return j;
}

// ---------------------------------------------------------------------------
// Output

namespace detail {

inline std::string fmt_opt(const std::optional<double>& v) {
  if (!v) return "undefined";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

inline nlohmann::json summary_json(const Summary& s) {
  nlohmann::json cdf = nlohmann::json::array();
  for (const auto& p : s.cdf) cdf.push_back({p.value, p.probability});
  return {{"count", s.count}, {"p10", s.p10}, {"p50", s.p50}, {"p90", s.p90}, {"cdf", cdf}};
}

inline nlohmann::json table_json(const MetricsTable& t) {
  nlohmann::json j;
  j["scenario"] = t.scenario;
  j["runs"] = t.rows.size();
  j["undefined_sir"] = t.undefined_sir;
  j["sir_db"] = t.sir ? summary_json(*t.sir) : nlohmann::json(nullptr);
  j["sinr_loss_db"] = t.sinr_loss ? summary_json(*t.sinr_loss) : nlohmann::json(nullptr);
  nlohmann::json by = nlohmann::json::object();
  for (const auto& [count, s] : t.sir_by_count) by[std::to_string(count)] = summary_json(s);
  j["sir_db_by_adversary_count"] = by;
  nlohmann::json lby = nlohmann::json::object();
  for (const auto& [count, s] : t.sinr_loss_by_count) lby[std::to_string(count)] = summary_json(s);
  j["sinr_loss_db_by_adversary_count"] = lby;
  return j;
}

inline std::filesystem::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  return std::filesystem::path(dir);
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw IoError("write failed: " + path.string());
}

inline std::string metrics_csv_row(const MetricsResult& r, const std::string* sweep_value) {
  std::string line;
  if (sweep_value) line += *sweep_value + ",";
  line += r.scenario + "," + std::to_string(r.seed) + "," + std::to_string(r.run) + "," +
          std::to_string(r.n_adversaries) + "," + fmt_opt(r.sir_db) + "," + fmt_opt(r.sinr_db) +
          "," + fmt_opt(r.sinr_loss_db) + "\n";
  return line;
}

}  // namespace detail

inline constexpr const char* kMetricsHeader =
    "scenario,seed,run,n_adversaries,sir_db,sinr_db,sinr_loss_db\n";

/// Writes metrics.csv and summary.json into `dir`, plus profile.csv and
/// scene.json when the table carries an exported run.
inline void emit_outputs(const MetricsTable& table, const std::string& dir) {
  const auto root = detail::prepare_dir(dir);
  std::string csv = kMetricsHeader;
  for (const auto& r : table.rows) csv += detail::metrics_csv_row(r, nullptr);
  detail::write_text(root / "metrics.csv", csv);
  detail::write_text(root / "summary.json", detail::table_json(table).dump(2) + "\n");
  if (table.profile) {
    write_profile_csv(*table.profile, (root / "profile.csv").string());
    detail::write_text(root / "scene.json", nlohmann::json(*table.profile_scene).dump(2) + "\n");
  }
}

/// Writes sweep.csv (per-run rows prefixed with the swept value) and
/// sweep_summary.json.
inline void emit_sweep_outputs(const SweepResult& sweep, const std::string& dir) {
  const auto root = detail::prepare_dir(dir);
  std::string csv = "value," + std::string(kMetricsHeader);
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [value, table] : sweep.tables) {
    for (const auto& r : table.rows) csv += detail::metrics_csv_row(r, &value);
    nlohmann::json e = detail::table_json(table);
    e["value"] = value;
    entries.push_back(std::move(e));
  }
  detail::write_text(root / "sweep.csv", csv);
  nlohmann::json j = {{"var", sweep.var}, {"results", entries}};
  detail::write_text(root / "sweep_summary.json", j.dump(2) + "\n");
}

/// Writes scene.json plus beat_*.csv and profile_*.csv for the conventional,
/// naive and aligned signals.
inline void emit_simulation(const SimulationResult& sim, const ChirpPlan& plan,
                            const std::string& dir) {
  const auto root = detail::prepare_dir(dir);
  nlohmann::json scene = sim.scene;
  scene["victim_hopping"] =
      std::vector<std::size_t>(sim.hopping.perm().begin(), sim.hopping.perm().end());
  detail::write_text(root / "scene.json", scene.dump(2) + "\n");
  write_beat_csv(sim.conventional, plan, (root / "beat_conventional.csv").string());
  write_beat_csv(sim.naive, plan, (root / "beat_naive.csv").string());
  write_beat_csv(sim.aligned, plan, (root / "beat_aligned.csv").string());
  write_profile_csv(sim.conventional_profile, (root / "profile_conventional.csv").string());
  write_profile_csv(sim.naive_profile, (root / "profile_naive.csv").string());
  write_profile_csv(sim.aligned_profile, (root / "profile_aligned.csv").string());
}

}  // namespace bluefmcw
