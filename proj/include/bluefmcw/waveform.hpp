#pragma once

// Chirp plans and sub-chirp hopping plans.
//
// A chirp of n_samples ADC samples is cut into n_sub equal sub-chirps. Every
// sub-chirp shares the slope, so sub-chirp i occupies the band
// [f_c + i*B_sub, f_c + (i+1)*B_sub). A hopping plan assigns sub-chirps to
// time slots: slot j transmits sub-chirp perm[j].

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "bluefmcw/errors.hpp"
#include "bluefmcw/rng.hpp"

namespace bluefmcw {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

struct ChirpPlan {
  double f_c = 0.0;            // Hz, start frequency of the full chirp
  double slope = 0.0;          // Hz/s
  double f_s = 0.0;            // Hz, ADC sampling rate
  std::size_t n_samples = 0;   // samples per full chirp
  std::size_t n_sub = 1;       // number of sub-chirps

  double duration() const noexcept { return static_cast<double>(n_samples) / f_s; }
  double sub_duration() const noexcept { return duration() / static_cast<double>(n_sub); }
  double bandwidth() const noexcept { return slope * duration(); }
  double sub_bandwidth() const noexcept { return slope * sub_duration(); }
  std::size_t samples_per_slot() const noexcept { return n_samples / n_sub; }

  /// Range resolution c / 2B of the full chirp.
  double range_resolution() const noexcept { return kSpeedOfLight / (2.0 * bandwidth()); }
  /// Range resolution of a single sub-chirp, c*N / 2B.
  double sub_range_resolution() const noexcept {
    return kSpeedOfLight / (2.0 * sub_bandwidth());
  }
  /// Largest distance whose beat frequency stays below f_s/2.
  double max_unambiguous_range() const noexcept {
    return kSpeedOfLight * f_s / (4.0 * slope);
  }

  bool operator==(const ChirpPlan&) const = default;
};

/// Validates and builds a chirp plan.
inline ChirpPlan make_chirp_plan(double f_c, double slope, double f_s, std::size_t n_samples,
                                 std::size_t n_sub) {
  if (!(f_c > 0.0)) throw ConfigError("chirp.f_c", "carrier frequency must be positive");
  if (!(slope > 0.0)) throw ConfigError("chirp.slope", "slope must be positive");
  if (!(f_s > 0.0)) throw ConfigError("chirp.f_s", "sampling rate must be positive");
  if (n_samples == 0) throw ConfigError("chirp.n_samples", "must be positive");
  if (n_sub == 0 || n_sub > n_samples)
    throw ConfigError("chirp.n_sub", "must satisfy 1 <= n_sub <= n_samples");
  if (n_samples % n_sub != 0)
    throw ConfigError("chirp.n_sub", "n_samples (" + std::to_string(n_samples) +
                                         ") is not divisible by n_sub (" +
                                         std::to_string(n_sub) + ")");
  return ChirpPlan{f_c, slope, f_s, n_samples, n_sub};
}

/// Permutation of sub-chirps over time slots, with its inverse.
class HoppingPlan {
 public:
  HoppingPlan() = default;

  /// Throws std::invalid_argument unless `perm` is a bijection on {0..N-1}.
  explicit HoppingPlan(std::vector<std::size_t> perm, std::uint64_t seed = 0)
      : perm_(std::move(perm)), inv_(perm_.size(), perm_.size()), seed_(seed) {
    for (std::size_t j = 0; j < perm_.size(); ++j) {
      const std::size_t i = perm_[j];
      if (i >= perm_.size() || inv_[i] != perm_.size())
        throw std::invalid_argument("HoppingPlan: not a permutation");
      inv_[i] = j;
    }
  }

  static HoppingPlan identity(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    return HoppingPlan(std::move(p));
  }

  std::size_t size() const noexcept { return perm_.size(); }
  /// Sub-chirp index transmitted in time slot `slot`.
  std::size_t operator[](std::size_t slot) const { return perm_[slot]; }
  /// Time slot carrying sub-chirp `sub`.
  std::size_t slot_of(std::size_t sub) const { return inv_[sub]; }

  std::span<const std::size_t> perm() const noexcept { return perm_; }
  std::span<const std::size_t> inv() const noexcept { return inv_; }
  std::uint64_t seed() const noexcept { return seed_; }

  bool is_identity() const noexcept {
    for (std::size_t j = 0; j < perm_.size(); ++j)
      if (perm_[j] != j) return false;
    return true;
  }

  /// perm[j] - j for every slot; the sub-band offsets seen against a
  /// frame-synchronised conventional chirp.
  std::vector<long long> offsets() const {
    std::vector<long long> k(perm_.size());
    for (std::size_t j = 0; j < perm_.size(); ++j)
      k[j] = static_cast<long long>(perm_[j]) - static_cast<long long>(j);
    return k;
  }

  bool operator==(const HoppingPlan& o) const noexcept { return perm_ == o.perm_; }

 private:
  std::vector<std::size_t> perm_;
  std::vector<std::size_t> inv_;
  std::uint64_t seed_ = 0;
};

/// Uniform random permutation of n_sub sub-chirps (Fisher-Yates on an Rng
/// seeded with `seed`).
inline HoppingPlan random_hopping_plan(std::size_t n_sub, std::uint64_t seed) {
  if (n_sub == 0) throw std::invalid_argument("random_hopping_plan: n_sub must be >= 1");
  std::vector<std::size_t> p(n_sub);
  std::iota(p.begin(), p.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n_sub - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i + 1));
    std::swap(p[i], p[j]);
  }
  return HoppingPlan(std::move(p), seed);
}

/// Start frequency of the sub-chirp in each time slot.
inline std::vector<double> subchirp_start_freqs(const ChirpPlan& plan, const HoppingPlan& hopping) {
  if (hopping.size() != plan.n_sub)
    throw ConfigError("hopping", "hopping plan has " + std::to_string(hopping.size()) +
                                     " slots but chirp plan has n_sub = " +
                                     std::to_string(plan.n_sub));
  const double b_sub = plan.sub_bandwidth();
  std::vector<double> f(plan.n_sub);
  for (std::size_t j = 0; j < plan.n_sub; ++j)
    f[j] = plan.f_c + static_cast<double>(hopping[j]) * b_sub;
  return f;
}

}  // namespace bluefmcw
