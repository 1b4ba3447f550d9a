#pragma once

// Thin FFTW wrapper. Plans are cached per size behind a mutex; execution uses
// the new-array interface, which FFTW guarantees to be thread-safe.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace bluefmcw {

using cplx = std::complex<double>;

namespace detail {

class FftPlanCache {
 public:
  static FftPlanCache& instance() {
    static FftPlanCache cache;
    return cache;
  }

  fftw_plan forward(std::size_t n) {
    std::lock_guard lock(mu_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<cplx> in(n), out(n);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                                   reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (p == nullptr) throw std::runtime_error("fftw_plan_dft_1d failed");
    plans_.emplace(n, p);
    return p;
  }

  FftPlanCache(const FftPlanCache&) = delete;
  FftPlanCache& operator=(const FftPlanCache&) = delete;

 private:
  FftPlanCache() = default;
  ~FftPlanCache() {
    for (auto& [n, p] : plans_) fftw_destroy_plan(p);
  }

  std::mutex mu_;
  std::map<std::size_t, fftw_plan> plans_;
};

}  // namespace detail

/// Forward DFT X[k] = sum_n x[n] exp(-j 2 pi k n / n_fft), zero-padding the
/// input to n_fft points.
inline std::vector<cplx> fft(std::span<const cplx> x, std::size_t n_fft) {
  if (n_fft == 0 || n_fft < x.size()) throw std::invalid_argument("fft: n_fft must be >= input length");
  std::vector<cplx> in(n_fft, cplx{});
  std::copy(x.begin(), x.end(), in.begin());
  std::vector<cplx> out(n_fft);
  fftw_plan p = detail::FftPlanCache::instance().forward(n_fft);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace bluefmcw
