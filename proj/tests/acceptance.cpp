// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bluefmcw/bluefmcw.hpp"

using namespace bluefmcw;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("[%s] %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

const ChirpPlan kPlan = make_chirp_plan(24e9, 24.785e12, 20e6, 4096, 32);

// Two peaks are distinguishable when the zero-padded profile has two local
// maxima within 6 dB of the strongest, each within half a resolution cell of
// a different reflector.
bool resolved(const RangeProfile& p, double d1, double d2, double cell) {
  const double lo = d1 - 2.0 * cell, hi = d2 + 2.0 * cell;
  double top = p.floor_db;
  for (std::size_t k = 1; k + 1 < p.bin_distances.size(); ++k)
    if (p.bin_distances[k] >= lo && p.bin_distances[k] <= hi) top = std::max(top, p.magnitudes_db[k]);
  bool near1 = false, near2 = false;
  int peaks = 0;
  for (std::size_t k = 1; k + 1 < p.bin_distances.size(); ++k) {
    const double d = p.bin_distances[k];
    const auto& m = p.magnitudes_db;
    if (d < lo || d > hi || !(m[k] > m[k - 1] && m[k] >= m[k + 1]) || m[k] < top - 6.0) continue;
    ++peaks;
    near1 = near1 || std::fabs(d - d1) <= cell / 2.0;
    near2 = near2 || std::fabs(d - d2) <= cell / 2.0;
  }
  return peaks >= 2 && near1 && near2;
}

// Full chirp beat on global time: exp(j2pi(slope tau t + f_c tau - slope tau^2 / 2)).
std::vector<cplx> closed_form_beat(double distance) {
  const long double tau = 2.0L * distance / 299792458.0L;
  std::vector<cplx> x(kPlan.n_samples);
  for (std::size_t n = 0; n < x.size(); ++n) {
    const long double t = static_cast<long double>(n) / kPlan.f_s;
    long double cyc = kPlan.slope * tau * t + kPlan.f_c * tau - 0.5L * kPlan.slope * tau * tau;
    cyc -= std::floor(cyc);
    x[n] = std::polar(1.0, static_cast<double>(2.0L * 3.14159265358979323846L * cyc));
  }
  return x;
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  Scene scene;
  scene.reflectors.push_back({25.0, 1.0});
  const auto conv = closed_form_beat(25.0);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto aligned =
        reconstruct_aligned(simulate_beat(kPlan, random_hopping_plan(32, seed), scene)).samples;
    for (std::size_t n = 0; n < conv.size(); ++n)
      worst = std::max(worst, std::abs(aligned[n] - conv[n]) / std::abs(conv[n]));
  }
  const double dt = seconds_since(t0);
  report(1, worst < 1e-9 && dt < 5.0,
         fmt("alignment identity over 100 seeds: max rel error %.3e (< 1e-9), %.2f s (< 5 s)", worst, dt));
}

void criterion2() {
  const std::size_t pad = 16 * kPlan.n_samples;
  auto full = [&](double d1, double d2) {
    Scene s;
    s.reflectors = {{d1, 1.0}, {d2, 1.0}};
    const auto beat = reconstruct_aligned(simulate_beat(kPlan, random_hopping_plan(32, 7), s));
    return resolved(range_profile(beat, kPlan, pad), d1, d2, kPlan.range_resolution());
  };
  auto sub = [&](double d1, double d2) {
    Scene s;
    s.reflectors = {{d1, 1.0}, {d2, 1.0}};
    const auto seg = simulate_beat(kPlan, random_hopping_plan(32, 7), s);
    const std::size_t slot = seg.hopping.slot_of(0);
    const BeatSignal one{seg.segments[slot], BeatKind::Conventional};
    return resolved(range_profile(one, kPlan, pad), d1, d2, kPlan.sub_range_resolution());
  };
  const bool full_003 = full(25.0, 25.03);  // 0.03 > 0.0295: must resolve
  const bool full_001 = full(25.0, 25.01);  // well below: must not
  const bool sub_05 = sub(25.0, 25.5);      // 0.5 < 0.945: must not
  const bool sub_20 = sub(25.0, 27.0);      // above: must resolve
  report(2, full_003 && !full_001 && !sub_05 && sub_20,
         fmt("full band (dd %.4f m): 0.03 m %s, 0.01 m %s; sub-chirp (dd %.3f m): 0.5 m %s, 2.0 m %s",
             kPlan.range_resolution(), full_003 ? "resolved" : "merged",
             full_001 ? "resolved" : "merged", kPlan.sub_range_resolution(),
             sub_05 ? "resolved" : "merged", sub_20 ? "resolved" : "merged"));
}

double median_sir(const MetricsTable& t) { return t.sir ? t.sir->p50 : std::nan(""); }

void criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto t = run_campaign(load_preset("cvc"), 1);
  const double dt = seconds_since(t0);
  const double med = median_sir(t);
  report(3, std::fabs(med - 2.0) <= 2.0 && dt < 30.0 && t.rows.size() == 100,
         fmt("CvC 1 adversary, %zu runs: median SIR %.2f dB (2 +- 2), %.2f s single-threaded (< 30 s)",
             t.rows.size(), med, dt));
}

void criterion4() {
  const auto bvc_table = run_campaign(load_preset("bvc"), workers());
  const auto bvb = run_campaign(load_preset("bvb"), workers());
  const double a = median_sir(bvc_table), b = median_sir(bvb);
  report(4,
         std::fabs(a - 18.93) <= 3.0 && std::fabs(b - 18.75) <= 3.0 && std::fabs(a - b) <= 1.5 &&
             bvc_table.rows.size() == 1000 && bvb.rows.size() == 1000,
         fmt("median SIR BvC %.2f dB (18.93 +- 3), BvB %.2f dB (18.75 +- 3), gap %.2f dB (<= 1.5)", a,
             b, std::fabs(a - b)));
}

void criterion5() {
  const auto cfg = load_preset("fig9");
  const auto sweep = run_sweep(cfg, cfg.sweep->var, cfg.sweep->values, workers());
  double aligned = std::nan(""), naive = std::nan("");
  for (const auto& [v, t] : sweep.tables) (v == "aligned" ? aligned : naive) = median_sir(t);
  const double gain = aligned - naive;
  report(5, gain >= 7.0,
         fmt("BvC median SIR aligned %.2f dB vs naive %.2f dB: gain %.2f dB (>= 7)", aligned, naive, gain));
}

void criterion6() {
  const auto cfg = load_preset("fig10");
  const auto sweep = run_sweep(cfg, cfg.sweep->var, cfg.sweep->values, workers());
  const auto& opt = sweep.tables.at(0).second;
  const auto& bad = sweep.tables.at(1).second;
  const double d50 = opt.sir->p50 - bad.sir->p50;
  const double d10 = opt.sir->p10 - bad.sir->p10;
  report(6, std::fabs(d50 - 7.0) <= 3.0 && std::fabs(d10 - 9.0) <= 3.0,
         fmt("slope %s vs %s: median degradation %.2f dB (7 +- 3), p10 degradation %.2f dB (9 +- 3)",
             sweep.tables[1].first.c_str(), sweep.tables[0].first.c_str(), d50, d10));
}

void criterion7() {
  const auto cfg = load_preset("fig11");
  const auto sweep = run_sweep(cfg, cfg.sweep->var, cfg.sweep->values, workers());
  double conv = std::nan(""), blue = std::nan("");
  for (const auto& [v, t] : sweep.tables)
    (v == "conventional" ? conv : blue) = t.sinr_loss ? t.sinr_loss->p50 : std::nan("");
  report(7, std::fabs(conv - blue) <= 1.0,
         fmt("30 dB SNR, 1 adversary: median SINR loss conventional %.2f dB, hopping %.2f dB, gap %.2f dB (<= 1)",
             conv, blue, std::fabs(conv - blue)));
}

// Independent oracle: everything scaled onto a common integer lattice.
std::size_t lattice_count(const Rational& b, const Rational& f, const Rational& df,
                          const std::vector<long long>& k) {
  const long long D = std::lcm(std::lcm(b.den(), f.den()), df.den());
  const long long bi = b.num() * (D / b.den()), fi = f.num() * (D / f.den()),
                  di = df.num() * (D / df.den());
  std::set<long long> out;
  for (long long x : k) out.insert(((di + x * bi) % fi + fi) % fi);
  return out.size();
}

void criterion8() {
  Rng rng(20240601);
  int bad = 0, equality_checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Rational b(1 + static_cast<long long>(rng.below(5000)), 1 + static_cast<long long>(rng.below(60)));
    const Rational f(1 + static_cast<long long>(rng.below(500)), 1 + static_cast<long long>(rng.below(30)));
    const Rational df(static_cast<long long>(rng.below(10000)), 1 + static_cast<long long>(rng.below(12)));
    const long long m = diversity_bound(b, f);
    std::vector<long long> k;
    const std::size_t n = 1 + rng.below(200);
    for (std::size_t i = 0; i < n; ++i) k.push_back(static_cast<long long>(rng.below(401)) - 200);
    const auto got = adversary_beat_freqs(df, b, f, k);
    if (got.size() != lattice_count(b, f, df, k) || static_cast<long long>(got.size()) > m) ++bad;
    if (m <= 4000) {
      std::vector<long long> full(static_cast<std::size_t>(m));
      std::iota(full.begin(), full.end(), -static_cast<long long>(rng.below(50)));
      if (static_cast<long long>(adversary_beat_freqs(df, b, f, full).size()) != m) ++bad;
      ++equality_checked;
    }
  }
  const std::vector<long long> k4{0, 1, 2, 3};
  const auto worst = adversary_beat_freqs(Rational(70), Rational(200), Rational(100), k4);
  const auto better = adversary_beat_freqs(Rational(70), Rational(700, 3), Rational(100), k4);
  const bool worst_ok = worst == std::set<Rational>{Rational(70)} &&
                        diversity_bound(Rational(200), Rational(100)) == 1;
  const bool better_ok = better.size() == 3 && diversity_bound(Rational(700, 3), Rational(100)) == 3;
  report(8, bad == 0 && worst_ok && better_ok,
         fmt("1000 random configs: %d violations (%d equality checks); m=1 example %s (always 70), "
             "m=3 example %zu beats",
             bad, equality_checked, worst_ok ? "ok" : "wrong", better.size()));
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void criterion9() {
  const auto root = fs::temp_directory_path() / "bluefmcw_acceptance_determinism";
  fs::remove_all(root);
  auto cfg = load_preset("bvb");
  cfg.runs = 20;
  auto sweep_cfg = load_preset("fig9");
  sweep_cfg.runs = 10;
  std::vector<std::string> dirs;
  for (unsigned jobs : {1u, 1u, 3u, 8u, 0u}) {
    const auto dir = root / ("jobs" + std::to_string(jobs) + "_" + std::to_string(dirs.size()));
    emit_outputs(run_campaign(cfg, jobs), (dir / "campaign").string());
    emit_sweep_outputs(run_sweep(sweep_cfg, sweep_cfg.sweep->var, sweep_cfg.sweep->values, jobs),
                       (dir / "sweep").string());
    dirs.push_back(dir.string());
  }
  const std::vector<std::string> files{"campaign/metrics.csv", "campaign/summary.json",
                                       "campaign/profile.csv", "campaign/scene.json",
                                       "sweep/sweep.csv", "sweep/sweep_summary.json"};
  int mismatches = 0;
  for (const auto& f : files) {
    const auto ref = slurp(fs::path(dirs[0]) / f);
    if (ref.empty()) ++mismatches;
    for (std::size_t i = 1; i < dirs.size(); ++i)
      if (slurp(fs::path(dirs[i]) / f) != ref) ++mismatches;
  }
  fs::remove_all(root);
  report(9, mismatches == 0,
         fmt("%zu files x 5 reruns (jobs 1, 1, 3, 8, all cores): %d byte mismatches", files.size(),
             mismatches));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("%d of 9 criteria failed, %.1f s total\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
