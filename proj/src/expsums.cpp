#include "qsys/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "qsys/budget.hpp"
#include "qsys/error.hpp"
#include "qsys/parallel.hpp"

namespace qsys {

namespace {

using cd = std::complex<double>;

constexpr int64_t kQuadTableLimit = int64_t{1} << 22;

cd unit_frac(int128 v, int128 m) {
  const long double t = static_cast<long double>(v) / static_cast<long double>(m);
  const long double angle = 2.0L * std::numbers::pi_v<long double> * t;
  return {static_cast<double>(std::cos(angle)),
          static_cast<double>(std::sin(angle))};
}

bool entry_before(const SpectrumEntry& a, const SpectrumEntry& b) {
  if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
  return a.z < b.z;
}

}  // namespace

Frequency normalize_frequency(const Ambient& amb, int64_t x, int64_t y) {
  return Frequency{mod_floor(x, amb.M), mod_floor(y, amb.M_squared)};
}

Frequency scale_frequency(const Ambient& amb, Frequency z, int64_t lambda) {
  return Frequency{mod_floor(static_cast<int128>(z.x) * lambda, amb.M),
                   mod_floor(static_cast<int128>(z.y) * lambda, amb.M_squared)};
}

int64_t phase_residue(const Ambient& amb, Frequency z, int64_t n) {
  const int128 nn = n;
  const int128 v = static_cast<int128>(z.x) * nn * amb.M +
                   static_cast<int128>(z.y) * (nn * nn % amb.M_squared);
  return mod_floor(v, amb.M_squared);
}

Rational phase_value(const Ambient& amb, Frequency z, int64_t n) {
  return Rational(phase_residue(amb, z, n), amb.M_squared);
}

std::complex<double> unit_root(int64_t v, int64_t m) {
  return unit_frac(mod_floor(v, m), m);
}

std::complex<double> eval_S(const GridFunction& f, const Ambient& amb,
                            Frequency z) {
  std::complex<long double> acc{};
  for (int64_t n = 1; n <= f.N(); ++n) {
    const cd v = f.at(n);
    if (v == cd{}) continue;
    const cd e = unit_root(phase_residue(amb, z, n), amb.M_squared);
    acc += std::complex<long double>(v) * std::complex<long double>(e);
  }
  return cd(acc / static_cast<long double>(amb.M));
}

std::complex<double> eval_V(const GridFunction& f, const Rational& alpha,
                            const Rational& beta) {
  const int128 b = alpha.den();
  const int128 d = beta.den();
  const int128 m = b * d;
  std::complex<long double> acc{};
  for (int64_t n = 1; n <= f.N(); ++n) {
    const cd v = f.at(n);
    if (v == cd{}) continue;
    const int128 nn = n;
    int128 r = (static_cast<int128>(alpha.num()) * nn % b) * d % m +
               (static_cast<int128>(beta.num()) * (nn * nn % d) % d) * b % m;
    r %= m;
    if (r < 0) r += m;
    acc += std::complex<long double>(v) * std::complex<long double>(unit_frac(r, m));
  }
  return cd(acc);
}

Rational phase_distance(const Ambient& amb, Frequency z, int64_t n1,
                        int64_t n2) {
  const int128 a = n1;
  const int128 b = n2;
  const int128 v = static_cast<int128>(z.x) * (a - b) * amb.M +
                   static_cast<int128>(z.y) * ((a * a - b * b) % amb.M_squared);
  return residue_distance(mod_floor(v, amb.M_squared), amb.M_squared);
}

// --- Rows ------------------------------------------------------------------

SpectrumRows::SpectrumRows(const GridFunction& f, const Ambient& amb,
                           RowMethod method)
    : amb_(amb), method_(method) {
  if (f.N() > amb.N || amb.N >= amb.M) {
    throw Error(ErrorCode::kInvalidParams, "function support exceeds [N]");
  }
  f_.assign(f.values().begin(), f.values().end());
  lin_.resize(static_cast<size_t>(amb.M));
  for (int64_t k = 0; k < amb.M; ++k) lin_[static_cast<size_t>(k)] = unit_root(k, amb.M);
  if (amb.M_squared <= kQuadTableLimit) {
    quad_.resize(static_cast<size_t>(amb.M_squared));
    for (int64_t k = 0; k < amb.M_squared; ++k) {
      quad_[static_cast<size_t>(k)] = unit_root(k, amb.M_squared);
    }
  }
  if (method_ == RowMethod::kAuto) {
    size_t padded = 1;
    while (padded < static_cast<size_t>(2 * amb.M - 1)) padded <<= 1;
    const double chirp_cost = 6.0 * static_cast<double>(padded) *
                              std::log2(static_cast<double>(padded));
    const double direct_cost =
        static_cast<double>(f.N()) * static_cast<double>(amb.M);
    method_ = direct_cost <= chirp_cost ? RowMethod::kDirect : RowMethod::kChirp;
  }
  if (method_ == RowMethod::kChirp) {
    chirp_ = std::make_unique<ChirpDft>(static_cast<size_t>(amb.M));
  }
}

SpectrumRows::~SpectrumRows() = default;
SpectrumRows::SpectrumRows(SpectrumRows&&) noexcept = default;

std::complex<double> SpectrumRows::quad_unit(int64_t v) const {
  if (!quad_.empty()) return quad_[static_cast<size_t>(v)];
  return unit_root(v, amb_.M_squared);
}

void SpectrumRows::row(int64_t y, std::span<cd> out) const {
  const int64_t M = amb_.M;
  const int64_t M2 = amb_.M_squared;
  const auto N = static_cast<int64_t>(f_.size());
  const double inv_M = 1.0 / static_cast<double>(M);
  std::fill(out.begin(), out.end(), cd{});
  if (method_ == RowMethod::kDirect) {
    for (int64_t n = 1; n <= N; ++n) {
      const cd fn = f_[static_cast<size_t>(n - 1)];
      if (fn == cd{}) continue;
      const int64_t v = mod_floor(static_cast<int128>(y) * (n * n % M2), M2);
      const cd g = fn * quad_unit(v) * inv_M;
      int64_t idx = 0;
      for (int64_t x = 0; x < M; ++x) {
        out[static_cast<size_t>(x)] += g * lin_[static_cast<size_t>(idx)];
        idx += n;
        if (idx >= M) idx -= M;
      }
    }
    return;
  }
  std::vector<cd> g(static_cast<size_t>(M), cd{});
  for (int64_t n = 1; n <= N; ++n) {
    const cd fn = f_[static_cast<size_t>(n - 1)];
    if (fn == cd{}) continue;
    const int64_t v = mod_floor(static_cast<int128>(y) * (n * n % M2), M2);
    g[static_cast<size_t>(n % M)] = fn * quad_unit(v);
  }
  chirp_->transform(g, out, +1);
  for (auto& o : out) o *= inv_M;
}

void for_each_row(
    const SpectrumRows& rows, uint64_t budget,
    const std::function<void(size_t, int64_t, std::span<const cd>)>& visit,
    size_t rows_per_block) {
  const Ambient& amb = rows.ambient();
  require_budget(power_estimate(static_cast<long double>(amb.M), 3), budget,
                 "full spectrum (M^3)");
  const auto count = static_cast<size_t>(amb.M_squared);
  parallel_blocks(count, rows_per_block, [&](size_t block, size_t begin, size_t end) {
    std::vector<cd> buf(static_cast<size_t>(amb.M));
    for (size_t y = begin; y < end; ++y) {
      rows.row(static_cast<int64_t>(y), buf);
      visit(block, static_cast<int64_t>(y), buf);
    }
  });
}

Spectrum full_spectrum(const GridFunction& f, const Ambient& amb,
                       uint64_t budget, RowMethod method) {
  SpectrumRows rows(f, amb, method);
  Spectrum spec;
  spec.ambient = amb;
  require_budget(power_estimate(static_cast<long double>(amb.M), 3), budget,
                 "full spectrum (M^3)");
  spec.entries.assign(static_cast<size_t>(amb.M * amb.M_squared), cd{});
  for_each_row(rows, budget, [&](size_t, int64_t y, std::span<const cd> row) {
    std::copy(row.begin(), row.end(),
              spec.entries.begin() + static_cast<std::ptrdiff_t>(y * amb.M));
  });
  return spec;
}

Spectrum top_spectrum(const GridFunction& f, const Ambient& amb, size_t k,
                      uint64_t budget) {
  SpectrumRows rows(f, amb);
  constexpr size_t kRowsPerBlock = 64;
  std::vector<std::vector<SpectrumEntry>> partial(
      block_count(static_cast<size_t>(amb.M_squared), kRowsPerBlock));
  auto trim = [k](std::vector<SpectrumEntry>& v) {
    if (v.size() > 2 * k + 64) {
      std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end(), entry_before);
      v.resize(k);
    }
  };
  for_each_row(
      rows, budget,
      [&](size_t block, int64_t y, std::span<const cd> row) {
        auto& bucket = partial[block];
        for (int64_t x = 0; x < amb.M; ++x) {
          const cd v = row[static_cast<size_t>(x)];
          bucket.push_back(SpectrumEntry{Frequency{x, y}, v, std::abs(v)});
        }
        trim(bucket);
      },
      kRowsPerBlock);
  Spectrum spec;
  spec.ambient = amb;
  for (auto& bucket : partial) {
    spec.top.insert(spec.top.end(), bucket.begin(), bucket.end());
  }
  std::sort(spec.top.begin(), spec.top.end(), entry_before);
  if (spec.top.size() > k) spec.top.resize(k);
  return spec;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spec, size_t top_k) {
  std::vector<SpectrumEntry> rows = spec.top;
  if (spec.is_full()) {
    rows.clear();
    const Ambient& amb = spec.ambient;
    for (int64_t y = 0; y < amb.M_squared; ++y) {
      for (int64_t x = 0; x < amb.M; ++x) {
        const cd v = spec.at(Frequency{x, y});
        rows.push_back(SpectrumEntry{Frequency{x, y}, v, std::abs(v)});
      }
    }
    std::sort(rows.begin(), rows.end(), entry_before);
  }
  if (rows.size() > top_k) rows.resize(top_k);
  out << "x,y,re,im,magnitude\n";
  out.precision(17);
  for (const auto& e : rows) {
    out << e.z.x << ',' << e.z.y << ',' << e.value.real() << ','
        << e.value.imag() << ',' << e.magnitude << '\n';
  }
}

}  // namespace qsys
