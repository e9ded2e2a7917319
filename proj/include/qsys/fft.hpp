#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qsys {

/// Power-of-two radix-2 transform, in place. sign = +1 computes
/// sum_j a_j e(jk/n), sign = -1 the conjugate kernel. No normalization.
void fft_pow2(std::span<std::complex<double>> a, int sign);

/// Arbitrary-length DFT via Bluestein's chirp-z reindexing onto a
/// power-of-two convolution. The chirp tables and the transformed kernel are
/// precomputed, so one instance serves many transforms of the same length.
class ChirpDft {
 public:
  explicit ChirpDft(size_t n);

  size_t size() const noexcept { return n_; }

  /// out_k = sum_j in_j e(sign * jk / n). `in` and `out` may alias.
  void transform(std::span<const std::complex<double>> in,
                 std::span<std::complex<double>> out, int sign) const;

 private:
  size_t n_;
  size_t padded_;
  std::vector<std::complex<double>> chirp_;       // e(j^2 / 2n)
  std::vector<std::complex<double>> kernel_fwd_;  // FFT of conj chirp, sign +1
  std::vector<std::complex<double>> kernel_bwd_;  // FFT of chirp, sign -1
};

/// Reference O(n^2) DFT with the same convention.
std::vector<std::complex<double>> naive_dft(
    std::span<const std::complex<double>> in, int sign);

}  // namespace qsys
