#pragma once

// Dechirped beat-signal synthesis, reconstruction and range profiles.
//
// Everything is computed in the dechirped domain. Within time slot j the
// victim transmits exp(j2pi(f_j t + slope t^2 / 2)) on local slot time
// t = n / f_s, with f_j the start frequency of sub-chirp perm[j]. An echo
// delayed by tau then mixes down to
//
//   A exp(j2pi(slope tau t + f_j tau - slope tau^2 / 2))
//
// and an adversary emitting its own slot-j sub-chirp g_j mixes down to the
// same expression with f_j replaced by g_j where it enters the received
// phase. The resulting tone is sampled at f_s without band limiting, so
// out-of-band differences alias.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bluefmcw/errors.hpp"
#include "bluefmcw/fft.hpp"
#include "bluefmcw/rng.hpp"
#include "bluefmcw/scene.hpp"
#include "bluefmcw/waveform.hpp"

namespace bluefmcw {

inline constexpr double kDefaultFloorDb = -300.0;

struct SynthesisOptions {
  /// Zero each component for the first ceil(tau * f_s) samples of a slot,
  /// where the echo of the previous sub-chirp would still be arriving.
  bool zero_slot_transients = false;
  /// Drop adversary samples whose instantaneous beat frequency lies outside
  /// [-f_s/2, f_s/2) (ideal anti-aliasing filter).
  bool lowpass_adversaries = false;
};

/// Per-slot beat samples in transmission order.
struct SegmentedBeat {
  std::vector<std::vector<cplx>> segments;
  ChirpPlan plan;
  HoppingPlan hopping;
};

enum class BeatKind { Conventional, Naive, Aligned };

struct BeatSignal {
  std::vector<cplx> samples;
  BeatKind kind = BeatKind::Conventional;
};

enum class Window { Rectangular, Hann };

struct RangeProfile {
  std::vector<double> magnitudes_db;  // one per FFT bin, 20 log10 |X|
  std::vector<double> bin_freqs;      // Hz, k * f_s / n_fft for every bin
  std::vector<double> bin_distances;  // m, for bins below f_s / 2
  std::size_t n_fft = 0;
  std::size_t n_samples = 0;
  double f_s = 0.0;
  double slope = 0.0;
  double floor_db = kDefaultFloorDb;
  Window window = Window::Rectangular;

  double bin_width() const noexcept { return f_s / static_cast<double>(n_fft); }

  /// Bin whose frequency is nearest to the beat frequency of `distance`.
  std::size_t nearest_bin(double distance) const {
    const double f = 2.0 * slope * distance / kSpeedOfLight;
    const auto k = static_cast<long long>(std::llround(f / bin_width()));
    const auto n = static_cast<long long>(n_fft);
    return static_cast<std::size_t>(((k % n) + n) % n);
  }

  /// Circular bin distance.
  std::size_t bin_gap(std::size_t a, std::size_t b) const noexcept {
    const std::size_t d = a > b ? a - b : b - a;
    return std::min(d, n_fft - d);
  }
};

namespace detail {

inline double frac(double cycles) noexcept { return cycles - std::floor(cycles); }

inline cplx unit_phasor(double cycles) noexcept {
  const double ph = 2.0 * std::numbers::pi * frac(cycles);
  return {std::cos(ph), std::sin(ph)};
}

inline std::size_t transient_samples(double tau, double f_s) {
  return static_cast<std::size_t>(std::ceil(tau * f_s));
}

}  // namespace detail

/// Beat samples of time slot `slot`. `noise` must be provided when the scene
/// carries a noise level; it is advanced by 2 * samples_per_slot normals.
inline std::vector<cplx> beat_segment(const ChirpPlan& plan, const HoppingPlan& hopping,
                                      std::size_t slot, const Scene& scene, Rng* noise = nullptr,
                                      const SynthesisOptions& opts = {}) {
  if (hopping.size() != plan.n_sub)
    throw ConfigError("hopping", "hopping plan size does not match n_sub");
  if (slot >= plan.n_sub) throw std::out_of_range("beat_segment: slot out of range");

  const std::size_t len = plan.samples_per_slot();
  const double fs = plan.f_s;
  const double alpha = plan.slope;
  const double f_k = plan.f_c + static_cast<double>(hopping[slot]) * plan.sub_bandwidth();
  std::vector<cplx> out(len, cplx{});

  for (const auto& r : scene.reflectors) {
    const double tau = tof(r.distance);
    const double beat = alpha * tau;
    const double phase0 = detail::frac(f_k * tau - 0.5 * alpha * tau * tau);
    const std::size_t first = opts.zero_slot_transients ? detail::transient_samples(tau, fs) : 0;
    for (std::size_t n = first; n < len; ++n) {
      const double t = static_cast<double>(n) / fs;
      out[n] += r.attenuation * detail::unit_phasor(beat * t + phase0);
    }
  }

  const double ref_amp = scene.reference_amplitude();
  for (const auto& a : scene.adversaries) {
    const ChirpPlan& own = a.own_plan;
    if (own.n_sub != plan.n_sub || std::abs(own.sub_duration() - plan.sub_duration()) >
                                       1e-12 * plan.sub_duration())
      throw ConfigError("adversary.own_plan", "adversary slots must match the victim's");
    const HoppingPlan own_hop = a.hopping();
    const double amp = ref_amp * std::pow(10.0, -a.power_sir_db / 20.0);
    const double tau = a.delay();
    const double alpha_a = own.slope;
    const double g = own.f_c + static_cast<double>(own_hop[slot]) * own.sub_bandwidth();
    // victim(t) - adversary(t - tau), grouped so large terms cancel first.
    const double df = f_k - g;
    const double lin = df + alpha_a * tau;
    const double quad = 0.5 * (alpha - alpha_a);
    const double phase0 = detail::frac(g * tau - 0.5 * alpha_a * tau * tau);
    const std::size_t first = opts.zero_slot_transients ? detail::transient_samples(tau, fs) : 0;
    for (std::size_t n = first; n < len; ++n) {
      const double t = static_cast<double>(n) / fs;
      if (opts.lowpass_adversaries) {
        const double f_inst = lin + 2.0 * quad * t;
        if (f_inst < -0.5 * fs || f_inst >= 0.5 * fs) continue;
      }
      out[n] += amp * detail::unit_phasor(lin * t + quad * t * t + phase0);
    }
  }

  if (scene.noise_snr_db) {
    if (noise == nullptr) throw std::invalid_argument("beat_segment: noisy scene needs an Rng");
    const double sigma2 = ref_amp * ref_amp * std::pow(10.0, -*scene.noise_snr_db / 10.0);
    const double s = std::sqrt(0.5 * sigma2);
    for (auto& v : out) {
      const double re = noise->normal();
      const double im = noise->normal();
      v += cplx{s * re, s * im};
    }
  }
  return out;
}

/// All slots in transmission order.
inline SegmentedBeat simulate_beat(const ChirpPlan& plan, const HoppingPlan& hopping,
                                   const Scene& scene, Rng* noise = nullptr,
                                   const SynthesisOptions& opts = {}) {
  SegmentedBeat seg{{}, plan, hopping};
  seg.segments.reserve(plan.n_sub);
  for (std::size_t j = 0; j < plan.n_sub; ++j)
    seg.segments.push_back(beat_segment(plan, hopping, j, scene, noise, opts));
  return seg;
}

/// Segments concatenated in time order.
inline BeatSignal reconstruct_naive(const SegmentedBeat& seg) {
  BeatSignal b{{}, BeatKind::Naive};
  b.samples.reserve(seg.plan.n_samples);
  for (const auto& s : seg.segments) b.samples.insert(b.samples.end(), s.begin(), s.end());
  return b;
}

/// Segments reordered by the inverse permutation, so output slot i holds the
/// beat of sub-chirp i and start frequencies ascend.
inline BeatSignal reconstruct_aligned(const SegmentedBeat& seg) {
  BeatSignal b{{}, BeatKind::Aligned};
  b.samples.reserve(seg.plan.n_samples);
  for (std::size_t i = 0; i < seg.segments.size(); ++i) {
    const auto& s = seg.segments[seg.hopping.slot_of(i)];
    b.samples.insert(b.samples.end(), s.begin(), s.end());
  }
  return b;
}

/// Time-order concatenation of a conventional (identity-hopping) chirp.
inline BeatSignal reconstruct_conventional(const SegmentedBeat& seg) {
  BeatSignal b = reconstruct_naive(seg);
  b.kind = BeatKind::Conventional;
  return b;
}

inline std::vector<double> window_coefficients(Window w, std::size_t n) {
  std::vector<double> c(n, 1.0);
  if (w == Window::Hann) {
    // Periodic Hann; coherent gain is exactly 1/2.
    for (std::size_t i = 0; i < n; ++i)
      c[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                   static_cast<double>(n)));
  }
  return c;
}

/// Windowed, zero-padded FFT magnitude with a distance axis d = c f / (2 slope).
inline RangeProfile range_profile(const BeatSignal& beat, const ChirpPlan& plan, std::size_t n_fft,
                                  Window window = Window::Rectangular,
                                  double floor_db = kDefaultFloorDb) {
  if (n_fft < beat.samples.size() || n_fft == 0)
    throw std::invalid_argument("range_profile: n_fft must be >= number of samples");
  const auto w = window_coefficients(window, beat.samples.size());
  std::vector<cplx> x(beat.samples.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = beat.samples[i] * w[i];
  const auto spectrum = fft(x, n_fft);

  RangeProfile p;
  p.n_fft = n_fft;
  p.n_samples = beat.samples.size();
  p.f_s = plan.f_s;
  p.slope = plan.slope;
  p.floor_db = floor_db;
  p.window = window;
  p.magnitudes_db.resize(n_fft);
  p.bin_freqs.resize(n_fft);
  for (std::size_t k = 0; k < n_fft; ++k) {
    const double mag = std::abs(spectrum[k]);
    p.magnitudes_db[k] = mag > 0.0 ? std::max(20.0 * std::log10(mag), floor_db) : floor_db;
    p.bin_freqs[k] = static_cast<double>(k) * plan.f_s / static_cast<double>(n_fft);
  }
  p.bin_distances.resize(n_fft / 2);
  for (std::size_t k = 0; k < n_fft / 2; ++k)
    p.bin_distances[k] = kSpeedOfLight * p.bin_freqs[k] / (2.0 * plan.slope);
  return p;
}

struct Peak {
  double power_db = 0.0;
  std::size_t bin = 0;
};

/// Strongest bin within +-guard_bins of the bin nearest expected_distance.
inline Peak find_peak(const RangeProfile& profile, double expected_distance,
                      std::size_t guard_bins) {
  const double max_range = kSpeedOfLight * profile.f_s / (4.0 * profile.slope);
  if (!(expected_distance >= 0.0) || expected_distance > max_range)
    throw std::out_of_range("find_peak: expected distance outside the unambiguous range");
  const std::size_t centre = profile.nearest_bin(expected_distance);
  const auto n = static_cast<long long>(profile.n_fft);
  const auto g = static_cast<long long>(std::min<std::size_t>(guard_bins, profile.n_fft / 2));
  Peak best{-std::numeric_limits<double>::infinity(), centre};
  for (long long off = -g; off <= g; ++off) {
    const auto k = static_cast<std::size_t>(((static_cast<long long>(centre) + off) % n + n) % n);
    if (profile.magnitudes_db[k] > best.power_db) best = {profile.magnitudes_db[k], k};
  }
  return best;
}

// ---------------------------------------------------------------------------
// CSV export

inline void write_beat_csv(const BeatSignal& beat, const ChirpPlan& plan, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << "index,time_s,real,imag\n";
  char buf[160];
  for (std::size_t i = 0; i < beat.samples.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.9e,%.12e,%.12e\n", i,
                  static_cast<double>(i) / plan.f_s, beat.samples[i].real(),
                  beat.samples[i].imag());
    os << buf;
  }
  if (!os) throw IoError("write failed: " + path);
}

/// Bins below f_s / 2 only, since those carry a distance.
inline void write_profile_csv(const RangeProfile& profile, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << "bin,freq_hz,distance_m,magnitude_db\n";
  char buf[160];
  for (std::size_t k = 0; k < profile.bin_distances.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.9f,%.9f\n", k, profile.bin_freqs[k],
                  profile.bin_distances[k], profile.magnitudes_db[k]);
    os << buf;
  }
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace bluefmcw
