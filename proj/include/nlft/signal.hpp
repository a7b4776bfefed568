#ifndef NLFT_SIGNAL_HPP
#define NLFT_SIGNAL_HPP

// Potentials phi = (phi1, phi2) on the unit circle, their Fourier data,
// Sobolev norms and the linear reference map F.
//
// Fourier convention: phi(x) = sum_n c(n) exp(2 pi i n x), x in [0, 1).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "nlft/errors.hpp"

namespace nlft {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// <n> = max(1, |n|)
inline double japanese(int n) { return std::max(1.0, std::abs(static_cast<double>(n))); }

/// Complex sequence indexed by n in [-K, K].
class IndexedSequence {
 public:
  IndexedSequence() = default;
  explicit IndexedSequence(int half_width)
      : half_width_(half_width), values_(static_cast<std::size_t>(2 * half_width + 1)) {}

  int half_width() const noexcept { return half_width_; }
  bool contains(int n) const noexcept { return n >= -half_width_ && n <= half_width_; }

  cplx& operator[](int n) { return values_[static_cast<std::size_t>(n + half_width_)]; }
  const cplx& operator[](int n) const { return values_[static_cast<std::size_t>(n + half_width_)]; }

  /// Zero outside the stored window.
  cplx at_or_zero(int n) const { return contains(n) ? (*this)[n] : cplx{}; }

  const std::vector<cplx>& values() const noexcept { return values_; }

 private:
  int half_width_ = 0;
  std::vector<cplx> values_;
};

struct SequencePair {
  IndexedSequence z1;
  IndexedSequence z2;
  double weight = 0.0;

  int half_width() const noexcept { return z1.half_width(); }
};

class PeriodicPotential {
 public:
  PeriodicPotential() : PeriodicPotential(0) {}

  explicit PeriodicPotential(int band_limit, int grid_size = 0)
      : coeffs1_(checked_band(band_limit)), coeffs2_(band_limit) {
    grid_size_ = grid_size > 0 ? grid_size : default_grid_size(band_limit);
    if ((grid_size_ & (grid_size_ - 1)) != 0)
      throw Error(ErrorKind::InvalidArgument, "grid size must be a power of two");
  }

  static int checked_band(int band_limit) {
    if (band_limit < 0) throw Error(ErrorKind::InvalidArgument, "negative band limit");
    return band_limit;
  }

  static int default_grid_size(int band_limit) {
    int m = std::max(512, 16 * band_limit);
    int p = 1;
    while (p < m) p <<= 1;
    return p;
  }

  int band_limit() const noexcept { return coeffs1_.half_width(); }
  int grid_size() const noexcept { return grid_size_; }

  const IndexedSequence& coeffs1() const noexcept { return coeffs1_; }
  const IndexedSequence& coeffs2() const noexcept { return coeffs2_; }

  cplx coeff1(int n) const { return coeffs1_.at_or_zero(n); }
  cplx coeff2(int n) const { return coeffs2_.at_or_zero(n); }

  void set_coeff1(int n, cplx v) { coeffs1_[n] = v; }
  void set_coeff2(int n, cplx v) { coeffs2_[n] = v; }

  /// Sets phi1 coefficient n and closes under real type: phi2(-n) = conj(phi1(n)).
  void set_real_type_coeff(int n, cplx v) {
    coeffs1_[n] = v;
    coeffs2_[-n] = std::conj(v);
  }

  /// phi2 = conj(phi1) pointwise, checked on coefficients.
  bool real_type(double tol = 0.0) const {
    const int b = band_limit();
    for (int n = -b; n <= b; ++n)
      if (std::abs(coeffs2_[n] - std::conj(coeffs1_[-n])) > tol) return false;
    return true;
  }

  bool is_zero() const {
    for (const auto& v : coeffs1_.values())
      if (v != cplx{}) return false;
    for (const auto& v : coeffs2_.values())
      if (v != cplx{}) return false;
    return true;
  }

  /// (phi1(x), phi2(x)) by direct trigonometric summation.
  std::pair<cplx, cplx> sample(double x) const {
    const int b = band_limit();
    const cplx step = std::polar(1.0, 2.0 * kPi * x);
    cplx up{1.0, 0.0};
    cplx v1 = coeffs1_[0];
    cplx v2 = coeffs2_[0];
    for (int n = 1; n <= b; ++n) {
      up *= step;
      const cplx down = std::conj(up);
      v1 += coeffs1_[n] * up + coeffs1_[-n] * down;
      v2 += coeffs2_[n] * up + coeffs2_[-n] * down;
    }
    return {v1, v2};
  }

  /// Samples of phi1 on the uniform grid x_j = j / grid_size.
  std::vector<cplx> grid_samples1() const {
    std::vector<cplx> out(static_cast<std::size_t>(grid_size_));
    for (int j = 0; j < grid_size_; ++j) out[static_cast<std::size_t>(j)] = sample(double(j) / grid_size_).first;
    return out;
  }

  PeriodicPotential scaled(cplx s) const {
    PeriodicPotential out = *this;
    const int b = band_limit();
    for (int n = -b; n <= b; ++n) {
      out.coeffs1_[n] *= s;
      out.coeffs2_[n] *= std::conj(s);
    }
    return out;
  }

  /// phi(. + theta)
  PeriodicPotential translated(double theta) const {
    PeriodicPotential out = *this;
    const int b = band_limit();
    for (int n = -b; n <= b; ++n) {
      const cplx ph = std::polar(1.0, 2.0 * kPi * n * theta);
      out.coeffs1_[n] *= ph;
      out.coeffs2_[n] *= ph;
    }
    return out;
  }

  /// phi1 -> e^{i alpha} phi1, phi2 -> e^{-i alpha} phi2
  PeriodicPotential gauged(double alpha) const {
    PeriodicPotential out = *this;
    const int b = band_limit();
    const cplx ph = std::polar(1.0, alpha);
    for (int n = -b; n <= b; ++n) {
      out.coeffs1_[n] *= ph;
      out.coeffs2_[n] *= std::conj(ph);
    }
    return out;
  }

  PeriodicPotential with_band_limit(int band_limit) const {
    PeriodicPotential out(band_limit, std::max(grid_size_, default_grid_size(band_limit)));
    const int b = std::min(band_limit, this->band_limit());
    for (int n = -b; n <= b; ++n) {
      out.coeffs1_[n] = coeffs1_[n];
      out.coeffs2_[n] = coeffs2_[n];
    }
    return out;
  }

 private:
  IndexedSequence coeffs1_;
  IndexedSequence coeffs2_;
  int grid_size_ = 512;
};

/// F(phi) = ((-phi1^(-n))_n, (-phi2^(n))_n) on |n| <= K.
inline SequencePair fourier_map(const PeriodicPotential& p, int window) {
  if (window < p.band_limit())
    throw Error(ErrorKind::InvalidArgument, "fourier_map window smaller than band limit");
  SequencePair out{IndexedSequence(window), IndexedSequence(window), 0.0};
  for (int n = -window; n <= window; ++n) {
    out.z1[n] = -p.coeff1(-n);
    out.z2[n] = -p.coeff2(n);
  }
  return out;
}

inline double sobolev_norm(const IndexedSequence& z, double s) {
  double acc = 0.0;
  const int k = z.half_width();
  for (int n = -k; n <= k; ++n) acc += std::pow(japanese(n), 2.0 * s) * std::norm(z[n]);
  return std::sqrt(acc);
}

/// Norm of the pair, (||z1||_s^2 + ||z2||_s^2)^{1/2}.
inline double sobolev_norm(const SequencePair& q, double s) {
  if (s < 0) throw Error(ErrorKind::InvalidArgument, "negative Sobolev exponent");
  return std::hypot(sobolev_norm(q.z1, s), sobolev_norm(q.z2, s));
}

inline double sobolev_norm(const PeriodicPotential& p, double s) {
  if (s < 0) throw Error(ErrorKind::InvalidArgument, "negative Sobolev exponent");
  return std::hypot(sobolev_norm(p.coeffs1(), s), sobolev_norm(p.coeffs2(), s));
}

/// c1 = (1/2pi) int_0^1 phi1 phi2 dx, in Parseval form.
inline cplx c1_invariant(const PeriodicPotential& p) {
  cplx acc{};
  const int b = p.band_limit();
  for (int m = -b; m <= b; ++m) acc += p.coeff1(m) * p.coeff2(-m);
  return acc / (2.0 * kPi);
}

enum class TestPotentialKind { zero, single_mode, band_limited_decay };

struct TestPotentialParams {
  int band_limit = 4;
  int mode = 1;               // single_mode
  cplx amplitude = 0.1;       // single_mode: coefficient; decay: overall scale a
  int decay_order = 1;        // N, |phi1^(n)| = a <n>^{-(N+2)}
  std::uint64_t seed = 0;
  int grid_size = 0;          // 0 -> default
};

/// Deterministic, always real type.
inline PeriodicPotential make_test_potential(TestPotentialKind kind, const TestPotentialParams& prm) {
  switch (kind) {
    case TestPotentialKind::zero:
      return PeriodicPotential(prm.band_limit, prm.grid_size);
    case TestPotentialKind::single_mode: {
      if (std::abs(prm.mode) > prm.band_limit)
        throw Error(ErrorKind::InvalidArgument, "single_mode index outside band");
      PeriodicPotential p(prm.band_limit, prm.grid_size);
      p.set_real_type_coeff(prm.mode, prm.amplitude);
      return p;
    }
    case TestPotentialKind::band_limited_decay: {
      if (prm.decay_order < 1) throw Error(ErrorKind::InvalidArgument, "decay order N must be >= 1");
      if (prm.band_limit < 1) throw Error(ErrorKind::InvalidArgument, "band limit must be >= 1");
      if (!(std::abs(prm.amplitude) > 0.0)) throw Error(ErrorKind::InvalidArgument, "amplitude must be nonzero");
      PeriodicPotential p(prm.band_limit, prm.grid_size);
      std::mt19937_64 rng(prm.seed);
      const double a = std::abs(prm.amplitude);
      for (int n = -prm.band_limit; n <= prm.band_limit; ++n) {
        // raw 53-bit draws keep the phases identical across standard libraries
        const double u = double(rng() >> 11) * 0x1.0p-53;
        const double mag = a * std::pow(japanese(n), -(prm.decay_order + 2.0));
        p.set_coeff1(n, std::polar(mag, 2.0 * kPi * u));
      }
      for (int n = -prm.band_limit; n <= prm.band_limit; ++n) p.set_coeff2(n, std::conj(p.coeff1(-n)));
      return p;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown test potential kind");
}

}  // namespace nlft

#endif  // NLFT_SIGNAL_HPP
