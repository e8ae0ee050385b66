#pragma once

#include <complex>
#include <span>
#include <vector>

namespace dnls::fft {

// Unnormalized DFTs in FFTW index order:
//   forward: out[m] = sum_j in[j] e^{-2 pi i j m / n}
//   inverse: out[j] = sum_m in[m] e^{+2 pi i j m / n}
// Plans are cached per size; concurrent calls are safe.
std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in);
std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> in);

}  // namespace dnls::fft
