#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "bluefmcw/waveform.hpp"

using namespace bluefmcw;

namespace {

ChirpPlan reference_plan(std::size_t n_sub = 32) {
  return make_chirp_plan(24e9, 24.785e12, 20e6, 4096, n_sub);
}

double chi_square_p(const std::vector<double>& observed, double expected) {
  double stat = 0.0;
  for (double o : observed) stat += (o - expected) * (o - expected) / expected;
  boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST(ChirpPlan, ReferencePlanDerivedQuantities) {
  const auto p = reference_plan();
  EXPECT_NEAR(p.duration(), 204.8e-6, 1e-18);
  EXPECT_NEAR(p.sub_duration(), 6.4e-6, 1e-18);
  EXPECT_EQ(p.samples_per_slot(), 128u);
  // 24.785 MHz/us * 204.8 us and * 6.4 us.
  EXPECT_NEAR(p.bandwidth(), 5075.968e6, 1e-3);
  EXPECT_NEAR(p.sub_bandwidth(), 158.624e6, 1e-3);
  EXPECT_NEAR(p.bandwidth(), p.sub_bandwidth() * 32.0, 1e-6);
  // c / 2B and c N / 2B.
  EXPECT_NEAR(p.range_resolution(), 0.02953, 1e-5);
  EXPECT_NEAR(p.sub_range_resolution(), 0.9450, 1e-4);
}

TEST(ChirpPlan, SingleSubChirpIsConventional) {
  const auto p = reference_plan(1);
  EXPECT_DOUBLE_EQ(p.sub_duration(), p.duration());
  EXPECT_EQ(p.samples_per_slot(), 4096u);
}

TEST(ChirpPlan, RejectsIndivisibleSubChirpCount) {
  try {
    make_chirp_plan(24e9, 24.785e12, 20e6, 4096, 3);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "chirp.n_sub");
    const std::string what = e.what();
    EXPECT_NE(what.find("4096"), std::string::npos);
    EXPECT_NE(what.find("3"), std::string::npos);
  }
}

TEST(ChirpPlan, RejectsNonPositiveParameters) {
  EXPECT_THROW(make_chirp_plan(24e9, 0.0, 20e6, 4096, 32), ConfigError);
  EXPECT_THROW(make_chirp_plan(24e9, 1e12, -1.0, 4096, 32), ConfigError);
  EXPECT_THROW(make_chirp_plan(24e9, 1e12, 20e6, 0, 1), ConfigError);
  EXPECT_THROW(make_chirp_plan(24e9, 1e12, 20e6, 16, 0), ConfigError);
  EXPECT_THROW(make_chirp_plan(24e9, 1e12, 20e6, 16, 32), ConfigError);
}

TEST(HoppingPlan, SingleSubChirpIsIdentity) {
  for (std::uint64_t seed : {0ull, 1ull, 12345ull}) EXPECT_TRUE(random_hopping_plan(1, seed).is_identity());
}

TEST(HoppingPlan, InverseComposesToIdentity) {
  const auto h = random_hopping_plan(4, 77);
  std::vector<std::size_t> sorted(h.perm().begin(), h.perm().end());
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<std::size_t>{0, 1, 2, 3}));
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_EQ(h.slot_of(h[j]), j);
    EXPECT_EQ(h[h.slot_of(j)], j);
  }
}

TEST(HoppingPlan, RejectsNonPermutation) {
  EXPECT_THROW(HoppingPlan({0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(HoppingPlan({0, 3}), std::invalid_argument);
}

TEST(HoppingPlan, SameSeedIsBitIdentical) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto a = random_hopping_plan(32, seed);
    const auto b = random_hopping_plan(32, seed);
    EXPECT_TRUE(std::equal(a.perm().begin(), a.perm().end(), b.perm().begin()));
  }
  EXPECT_FALSE(random_hopping_plan(32, 1) == random_hopping_plan(32, 2));
}

TEST(HoppingPlan, FirstSlotIndexIsUniform) {
  constexpr std::size_t n = 8, draws = 4000;
  std::vector<double> counts(n, 0.0);
  for (std::size_t s = 0; s < draws; ++s) counts[random_hopping_plan(n, 1000 + s)[0]] += 1.0;
  EXPECT_GT(chi_square_p(counts, static_cast<double>(draws) / n), 0.001);
}

TEST(HoppingPlan, AllPermutationsOfFourAreEquallyLikely) {
  constexpr std::size_t draws = 24000;
  std::map<std::vector<std::size_t>, double> counts;
  for (std::size_t s = 0; s < draws; ++s) {
    const auto h = random_hopping_plan(4, s);
    counts[std::vector<std::size_t>(h.perm().begin(), h.perm().end())] += 1.0;
  }
  ASSERT_EQ(counts.size(), 24u);
  std::vector<double> observed;
  for (const auto& [perm, c] : counts) observed.push_back(c);
  EXPECT_GT(chi_square_p(observed, draws / 24.0), 0.001);
}

TEST(SubchirpStartFreqs, IdentityAscendsByOneSubBand) {
  const auto p = reference_plan();
  const auto f = subchirp_start_freqs(p, HoppingPlan::identity(32));
  for (std::size_t j = 0; j < f.size(); ++j)
    EXPECT_DOUBLE_EQ(f[j], p.f_c + static_cast<double>(j) * p.sub_bandwidth());
}

TEST(SubchirpStartFreqs, FourSlotExample) {
  // Slots carry sub-chirps 3, 2, 1, 4 (1-based).
  const auto p = make_chirp_plan(24e9, 24.785e12, 20e6, 512, 4);
  const auto f = subchirp_start_freqs(p, HoppingPlan({2, 1, 0, 3}));
  const double b = p.sub_bandwidth();
  EXPECT_DOUBLE_EQ(f[0], p.f_c + 2 * b);
  EXPECT_DOUBLE_EQ(f[1], p.f_c + 1 * b);
  EXPECT_DOUBLE_EQ(f[2], p.f_c);
  EXPECT_DOUBLE_EQ(f[3], p.f_c + 3 * b);
}

TEST(SubchirpStartFreqs, SortedFrequenciesMatchConventionalPlan) {
  const auto p = reference_plan();
  const auto conventional = subchirp_start_freqs(p, HoppingPlan::identity(32));
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto f = subchirp_start_freqs(p, random_hopping_plan(32, seed));
    EXPECT_DOUBLE_EQ(*std::min_element(f.begin(), f.end()), p.f_c);
    EXPECT_DOUBLE_EQ(*std::max_element(f.begin(), f.end()), p.f_c + 31 * p.sub_bandwidth());
    std::sort(f.begin(), f.end());
    EXPECT_EQ(f, conventional);
  }
}

TEST(SubchirpStartFreqs, SizeMismatchIsConfigError) {
  EXPECT_THROW(subchirp_start_freqs(reference_plan(), HoppingPlan::identity(16)), ConfigError);
}
