#include "dnls/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace dnls::fft {
namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

// FFTW planning is not thread-safe; new-array execution is. Plans are created
// out-of-place with FFTW_UNALIGNED so they can be re-executed on any buffers.
PlanPair plans_for(int n) {
  static std::mutex mutex;
  static std::unordered_map<int, PlanPair> cache;

  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<std::complex<double>> in(n), out(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  p.fwd = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                           reinterpret_cast<fftw_complex*>(out.data()),
                           FFTW_FORWARD, flags);
  p.bwd = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                           reinterpret_cast<fftw_complex*>(out.data()),
                           FFTW_BACKWARD, flags);
  if (!p.fwd || !p.bwd) throw std::runtime_error("fftw plan creation failed");
  cache.emplace(n, p);
  return p;
}

std::vector<std::complex<double>> execute(fftw_plan plan,
                                          std::span<const std::complex<double>> in) {
  const int n = static_cast<int>(in.size());
  std::vector<std::complex<double>> buf(in.begin(), in.end());
  std::vector<std::complex<double>> out(n);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(buf.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in) {
  return execute(plans_for(static_cast<int>(in.size())).fwd, in);
}

std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> in) {
  return execute(plans_for(static_cast<int>(in.size())).bwd, in);
}

}  // namespace dnls::fft
