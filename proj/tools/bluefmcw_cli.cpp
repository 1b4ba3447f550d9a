// bluefmcw: batch front-end for the frequency-hopping FMCW simulator.
//
//   bluefmcw simulate --preset fig6 --out out/fig6
//   bluefmcw campaign --preset bvc --jobs 4
//   bluefmcw sweep    --preset fig9
//   bluefmcw design   --config my.json
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bluefmcw/bluefmcw.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned jobs = 1;
};

bluefmcw::CampaignConfig load(const CommonOptions& o) {
  using namespace bluefmcw;
  if (o.config_path.empty() == o.preset.empty())
    throw ConfigError("", "exactly one of --config or --preset is required");
  CampaignConfig cfg;
  if (!o.preset.empty()) {
    cfg = load_preset(o.preset);
  } else {
    std::ifstream is(o.config_path, std::ios::binary);
    if (!is) throw IoError("cannot read config " + o.config_path);
    std::stringstream ss;
    ss << is.rdbuf();
    cfg = parse_config_text(ss.str());
  }
  if (o.seed_set) cfg.master_seed = o.seed;
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  return cfg;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool with_jobs) {
  cmd->add_option("--config", o.config_path, "Campaign JSON document");
  cmd->add_option("--preset", o.preset, "Built-in preset (cvc, bvc, bvb, fig6, fig7, fig9, fig10, fig11)");
  cmd->add_option("--out", o.out_dir, "Output directory (overrides outputs.dir)");
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&o](const std::uint64_t& s) { o.seed = s; o.seed_set = true; },
      "Master seed (overrides master_seed)");
  if (with_jobs) cmd->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)");
}

void print_summary(const bluefmcw::MetricsTable& t) {
  std::printf("%-28s runs=%zu", t.scenario.c_str(), t.rows.size());
  if (t.sir)
    std::printf("  SIR p10/p50/p90 = %.2f / %.2f / %.2f dB", t.sir->p10, t.sir->p50, t.sir->p90);
  else
    std::printf("  SIR undefined");
  if (t.sinr_loss) std::printf("  SINR loss p50 = %.2f dB", t.sinr_loss->p50);
  std::printf("\n");
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace bluefmcw;
  CLI::App app{"Frequency-hopping FMCW radar simulator"};
  app.require_subcommand(1);

  CommonOptions sim_opts, camp_opts, sweep_opts, design_opts;
  auto* simulate = app.add_subcommand("simulate", "Single scene: beat signals and range profiles as CSV");
  add_common(simulate, sim_opts, false);

  auto* campaign = app.add_subcommand("campaign", "Monte Carlo campaign: metrics CSV and summary JSON");
  add_common(campaign, camp_opts, true);

  auto* sweep = app.add_subcommand("sweep", "One campaign per value of a swept variable");
  add_common(sweep, sweep_opts, true);
  std::string sweep_var, sweep_values;
  sweep->add_option("--var", sweep_var,
                    "n_adversaries, alignment, slope, victim_mode or aggressor_mode");
  sweep->add_option("--values", sweep_values, "Comma-separated values");

  auto* design = app.add_subcommand("design", "Sub-chirp diversity report for a chirp configuration");
  add_common(design, design_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (simulate->parsed()) {
      const auto cfg = load(sim_opts);
      const auto sim = simulate_scene(cfg);
      emit_simulation(sim, cfg.chirp, cfg.out_dir);
      for (const auto& r : sim.scene.reflectors) {
        const auto pk = find_peak(sim.aligned_profile, r.distance, 3);
        std::printf("reflector %.3f m: aligned peak %.2f dB at bin %zu\n", r.distance, pk.power_db,
                    pk.bin);
      }
      std::printf("wrote %s\n", cfg.out_dir.c_str());
    } else if (campaign->parsed()) {
      const auto cfg = load(camp_opts);
      const auto table = run_campaign(cfg, camp_opts.jobs);
      emit_outputs(table, cfg.out_dir);
      print_summary(table);
    } else if (sweep->parsed()) {
      const auto cfg = load(sweep_opts);
      std::string var = sweep_var;
      std::vector<std::string> values = split_csv(sweep_values);
      if (var.empty() && cfg.sweep) var = cfg.sweep->var;
      if (values.empty() && cfg.sweep) values = cfg.sweep->values;
      if (var.empty()) throw ConfigError("sweep.var", "no sweep variable given");
      const auto result = run_sweep(cfg, var, values, sweep_opts.jobs);
      emit_sweep_outputs(result, cfg.out_dir);
      for (const auto& [value, table] : result.tables) print_summary(table);
    } else if (design->parsed()) {
      const auto cfg = load(design_opts);
      const auto report = design_report(cfg.chirp, cfg.master_seed);
      std::cout << report.dump(2) << "\n";
      if (!design_opts.out_dir.empty()) {
        const auto root = detail::prepare_dir(cfg.out_dir);
        detail::write_text(root / "design.json", report.dump(2) + "\n");
      }
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
