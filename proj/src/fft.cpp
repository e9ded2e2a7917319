#include "qsys/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsys {

namespace {

using cd = std::complex<double>;

cd unit(int64_t v, int64_t m) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(v) /
                       static_cast<double>(m);
  return {std::cos(angle), std::sin(angle)};
}

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

void fft_pow2(std::span<cd> a, int sign) {
  const size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("fft_pow2: length must be a power of two");
  }
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const size_t half = len / 2;
    // Twiddles from exact residues rather than repeated multiplication.
    std::vector<cd> w(half);
    for (size_t k = 0; k < half; ++k) {
      w[k] = unit(sign * static_cast<int64_t>(k), static_cast<int64_t>(len));
    }
    for (size_t i = 0; i < n; i += len) {
      for (size_t k = 0; k < half; ++k) {
        const cd u = a[i + k];
        const cd v = a[i + k + half] * w[k];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

ChirpDft::ChirpDft(size_t n) : n_(n), padded_(next_pow2(2 * n - 1)) {
  if (n == 0) throw std::invalid_argument("ChirpDft: empty length");
  const auto two_n = static_cast<int64_t>(2 * n);
  chirp_.resize(n);
  for (size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<int64_t>(j);
    chirp_[j] = unit((jj * jj) % two_n, two_n);
  }
  auto make_kernel = [&](int sign) {
    std::vector<cd> b(padded_, cd{});
    for (size_t m = 0; m < n; ++m) {
      const cd c = sign > 0 ? chirp_[m] : std::conj(chirp_[m]);
      b[m] = std::conj(c);
      if (m != 0) b[padded_ - m] = std::conj(c);
    }
    fft_pow2(b, -1);
    return b;
  };
  kernel_fwd_ = make_kernel(+1);
  kernel_bwd_ = make_kernel(-1);
}

void ChirpDft::transform(std::span<const cd> in, std::span<cd> out,
                         int sign) const {
  if (in.size() != n_ || out.size() != n_) {
    throw std::invalid_argument("ChirpDft: length mismatch");
  }
  std::vector<cd> a(padded_, cd{});
  for (size_t j = 0; j < n_; ++j) {
    a[j] = in[j] * (sign > 0 ? chirp_[j] : std::conj(chirp_[j]));
  }
  fft_pow2(a, -1);
  const auto& kernel = sign > 0 ? kernel_fwd_ : kernel_bwd_;
  for (size_t i = 0; i < padded_; ++i) a[i] *= kernel[i];
  fft_pow2(a, +1);
  const double inv = 1.0 / static_cast<double>(padded_);
  for (size_t k = 0; k < n_; ++k) {
    const cd c = sign > 0 ? chirp_[k] : std::conj(chirp_[k]);
    out[k] = a[k] * inv * c;
  }
}

std::vector<cd> naive_dft(std::span<const cd> in, int sign) {
  const auto n = static_cast<int64_t>(in.size());
  std::vector<cd> out(in.size());
  for (int64_t k = 0; k < n; ++k) {
    cd acc{};
    for (int64_t j = 0; j < n; ++j) acc += in[static_cast<size_t>(j)] * unit(sign * ((j * k) % n), n);
    out[static_cast<size_t>(k)] = acc;
  }
  return out;
}

}  // namespace qsys
