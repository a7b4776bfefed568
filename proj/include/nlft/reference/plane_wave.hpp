#ifndef NLFT_REFERENCE_PLANE_WAVE_HPP
#define NLFT_REFERENCE_PLANE_WAVE_HPP

// Closed-form spectral data for phi1 = a e^{2 pi i m x}, phi2 = conj(a) e^{-2 pi i m x}.
//
// The gauge F = diag(e^{i pi m x}, e^{-i pi m x}) N turns the ZS system into
// N' = B N with the constant trace-free matrix
//   B = [[-i(lambda + pi m), i a], [-i conj(a), i(lambda + pi m)]],
// so M(1, lambda) = (-1)^m exp(B) = (-1)^m (cosh w I + sinh(w)/w B),
// w^2 = |a|^2 - (lambda + pi m)^2. Everything below follows from that formula
// and never touches the numerical integrator.

#include <cmath>
#include <complex>

#include "nlft/signal.hpp"
#include "nlft/zs_ode.hpp"

namespace nlft::reference {

class PlaneWave {
 public:
  PlaneWave(cplx a, int m) : a_(a), m_(m) {}

  PeriodicPotential potential(int band_limit) const {
    PeriodicPotential p(band_limit);
    p.set_real_type_coeff(m_, a_);
    return p;
  }

  Mat2 monodromy(cplx lambda) const {
    const cplx shift = lambda + kPi * m_;
    const cplx w2 = std::norm(a_) - shift * shift;
    cplx c, s;
    if (std::abs(w2) < 1e-8) {
      c = 1.0 + w2 / 2.0;
      s = 1.0 + w2 / 6.0;
    } else {
      const cplx w = std::sqrt(w2);
      c = std::cosh(w);
      s = std::sinh(w) / w;
    }
    const double sign = (m_ % 2 == 0) ? 1.0 : -1.0;
    const Mat2 b{-kI * shift, kI * a_, -kI * std::conj(a_), kI * shift};
    return sign * (Mat2{c, 0.0, 0.0, c} + s * b);
  }

  DiscriminantEval discriminant(cplx lambda) const {
    TransferMatrix t;
    t.lambda = lambda;
    t.m = monodromy(lambda);
    DiscriminantEval e = discriminant_from(t);
    // Delta = (-1)^m 2 cos(nu), nu^2 = (lambda + pi m)^2 - |a|^2
    const cplx shift = lambda + kPi * m_;
    const cplx nu2 = shift * shift - std::norm(a_);
    cplx sinc;
    if (std::abs(nu2) < 1e-8) {
      sinc = 1.0 - nu2 / 6.0;
    } else {
      const cplx nu = std::sqrt(nu2);
      sinc = std::sin(nu) / nu;
    }
    const double sign = (m_ % 2 == 0) ? 1.0 : -1.0;
    e.delta_dot = -2.0 * sign * sinc * shift;
    return e;
  }

  /// Critical point of Delta with index n.
  double lamdot(int n) const {
    const int j = n + m_;
    if (j == 0) return -kPi * m_;
    const double r = std::sqrt(kPi * kPi * j * j + std::norm(a_));
    return -kPi * m_ + (j > 0 ? r : -r);
  }

  double lam_minus(int n) const { return n == -m_ ? -kPi * m_ - std::abs(a_) : lamdot(n); }
  double lam_plus(int n) const { return n == -m_ ? -kPi * m_ + std::abs(a_) : lamdot(n); }
  double mu(int n) const { return n == -m_ ? -kPi * m_ + a_.real() : lamdot(n); }

  /// delta at the Dirichlet eigenvalue of the open gap.
  double delta_at_mu_open_gap() const {
    const double sign = (m_ % 2 == 0) ? 1.0 : -1.0;
    return -2.0 * sign * std::sinh(a_.imag());
  }

  cplx amplitude() const { return a_; }
  int mode() const { return m_; }

 private:
  cplx a_;
  int m_;
};

}  // namespace nlft::reference

#endif  // NLFT_REFERENCE_PLANE_WAVE_HPP
