#pragma once

// Sub-chirp design math and the evaluation metrics (SIR, SINR, SINR loss,
// percentile summaries).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bluefmcw/dsp.hpp"
#include "bluefmcw/waveform.hpp"

namespace bluefmcw {

// ---------------------------------------------------------------------------
// Exact rationals

/// Reduced fraction num/den with den > 0. Intermediate products use 128-bit
/// integers; results that do not fit in 64 bits throw std::overflow_error.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(long long num, long long den = 1) { assign(num, den); }

  /// Snaps a double onto the 1/grid lattice (default: millihertz when the
  /// value is in Hz).
  static Rational from_double(double x, long long grid = 1000) {
    if (!std::isfinite(x)) throw std::invalid_argument("Rational::from_double: not finite");
    return Rational(std::llround(x * static_cast<double>(grid)), grid);
  }

  long long num() const noexcept { return num_; }
  long long den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// Largest integer <= value.
  long long floor() const noexcept {
    long long q = num_ / den_;
    if ((num_ % den_ != 0) && (num_ < 0)) --q;
    return q;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                 static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                 static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return make(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b) noexcept {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.num_ << '/' << r.den_;
  }

 private:
  static Rational make(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    constexpr __int128 lim = std::numeric_limits<long long>::max();
    if (n > lim || n < -lim || d > lim) throw std::overflow_error("Rational: overflow");
    Rational r;
    r.num_ = static_cast<long long>(n);
    r.den_ = static_cast<long long>(d);
    return r;
  }

  void assign(long long n, long long d) { *this = make(n, d); }

  long long num_ = 0;
  long long den_ = 1;
};

/// x mod m in [0, m) for m > 0.
inline Rational mod(const Rational& x, const Rational& m) {
  if (!(Rational(0) < m)) throw std::invalid_argument("mod: modulus must be positive");
  return x - m * Rational((x / m).floor());
}

// ---------------------------------------------------------------------------
// Beat-frequency diversity

/// Aliased adversary beat frequencies {mod(delta_f + k b_sub, f_s) : k in offsets}.
inline std::set<Rational> adversary_beat_freqs(const Rational& delta_f, const Rational& b_sub,
                                               const Rational& f_s,
                                               std::span<const long long> offsets) {
  std::set<Rational> out;
  for (long long k : offsets) out.insert(mod(delta_f + Rational(k) * b_sub, f_s));
  return out;
}

/// Reduced denominator m of b_sub / f_s: the number of distinct beat
/// frequencies a synchronised adversary can be spread over.
inline long long diversity_bound(const Rational& b_sub, const Rational& f_s) {
  if (!(Rational(0) < b_sub) || !(Rational(0) < f_s))
    throw std::invalid_argument("diversity_bound: inputs must be positive");
  return (b_sub / f_s).den();
}

struct DiversityAnalysis {
  Rational b_sub;
  Rational f_s;
  long long ratio_n = 0;  // b_sub / f_s = ratio_n / ratio_m in lowest terms
  long long ratio_m = 1;
  long long bound = 1;
  std::set<Rational> realized;
};

inline DiversityAnalysis analyze_diversity(const Rational& b_sub, const Rational& f_s,
                                           const Rational& delta_f,
                                           std::span<const long long> offsets) {
  DiversityAnalysis d;
  d.b_sub = b_sub;
  d.f_s = f_s;
  const Rational ratio = b_sub / f_s;
  d.ratio_n = ratio.num();
  d.ratio_m = ratio.den();
  d.bound = diversity_bound(b_sub, f_s);
  d.realized = adversary_beat_freqs(delta_f, b_sub, f_s, offsets);
  return d;
}

/// Every slot offset perm[j] - j reachable by some permutation of n_sub
/// sub-chirps: -(n_sub-1) .. n_sub-1.
inline std::vector<long long> all_permutation_offsets(std::size_t n_sub) {
  std::vector<long long> k;
  const auto n = static_cast<long long>(n_sub);
  for (long long i = -(n - 1); i <= n - 1; ++i) k.push_back(i);
  return k;
}

// ---------------------------------------------------------------------------
// Metrics

namespace detail {

inline bool outside_guard(const RangeProfile& p, std::size_t k, std::size_t centre,
                          std::size_t guard_bins) {
  return k != 0 && p.bin_gap(k, centre) > guard_bins;
}

}  // namespace detail

/// Object peak (within +-guard_bins of true_distance) minus the strongest
/// bin outside that window, DC excluded. nullopt when nothing but the dB
/// floor lies outside the window.
inline std::optional<double> compute_sir(const RangeProfile& profile, double true_distance,
                                         std::size_t guard_bins = 3) {
  if (guard_bins < 1) throw std::invalid_argument("compute_sir: guard_bins must be >= 1");
  const Peak peak = find_peak(profile, true_distance, guard_bins);
  const std::size_t centre = profile.nearest_bin(true_distance);
  double interference = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < profile.n_fft; ++k)
    if (detail::outside_guard(profile, k, centre, guard_bins))
      interference = std::max(interference, profile.magnitudes_db[k]);
  if (!(interference > profile.floor_db)) return std::nullopt;
  return peak.power_db - interference;
}

/// Object peak minus the mean power (dB of the linear mean) of all bins
/// outside the guard window, DC excluded.
inline std::optional<double> compute_sinr(const RangeProfile& profile, double true_distance,
                                          std::size_t guard_bins = 3) {
  const Peak peak = find_peak(profile, true_distance, guard_bins);
  const std::size_t centre = profile.nearest_bin(true_distance);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < profile.n_fft; ++k) {
    if (!detail::outside_guard(profile, k, centre, guard_bins)) continue;
    sum += std::pow(10.0, profile.magnitudes_db[k] / 10.0);
    ++count;
  }
  if (count == 0) return std::nullopt;
  const double mean_db = 10.0 * std::log10(sum / static_cast<double>(count));
  if (!(mean_db > profile.floor_db)) return std::nullopt;
  return peak.power_db - mean_db;
}

/// SINR(baseline) - SINR(test). Both profiles must come from the same chirp
/// plan and FFT setup.
inline std::optional<double> compute_sinr_loss(const RangeProfile& under_test,
                                               const RangeProfile& baseline, double true_distance,
                                               std::size_t guard_bins = 3) {
  if (under_test.n_fft != baseline.n_fft || under_test.f_s != baseline.f_s ||
      under_test.slope != baseline.slope || under_test.n_samples != baseline.n_samples ||
      under_test.window != baseline.window)
    throw std::invalid_argument("compute_sinr_loss: profiles come from different plans");
  const auto base = compute_sinr(baseline, true_distance, guard_bins);
  const auto test = compute_sinr(under_test, true_distance, guard_bins);
  if (!base || !test) return std::nullopt;
  return *base - *test;
}

// ---------------------------------------------------------------------------
// Summaries

/// Percentile p in [0, 100] of ascending `sorted`, linear interpolation
/// between order statistics at position p/100 * (n-1).
inline double percentile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("percentile: empty input");
  const double pos = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return sorted[lo] + w * (sorted[hi] - sorted[lo]);
}

struct CdfPoint {
  double value;
  double probability;  // fraction of samples <= value
};

struct Summary {
  std::size_t count = 0;
  double p10 = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  std::vector<CdfPoint> cdf;
};

inline Summary summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summarize: empty input");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  Summary s;
  s.count = v.size();
  s.p10 = percentile_sorted(v, 10.0);
  s.p50 = percentile_sorted(v, 50.0);
  s.p90 = percentile_sorted(v, 90.0);
  s.cdf.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    s.cdf.push_back({v[i], static_cast<double>(i + 1) / static_cast<double>(v.size())});
  return s;
}

}  // namespace bluefmcw
