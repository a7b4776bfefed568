#ifndef NLFT_BIRKHOFF_HPP
#define NLFT_BIRKHOFF_HPP

// Birkhoff coordinates z1(n) = xi_n e^{-i beta_n} z_n^-, z2(n) = xi_n e^{i beta_n} z_n^+
// with z_n^+- = ((tau_n - mu_n) -+ i delta(mu_n) / (2 delta_n(mu_n))) eta_n^+-,
// the leading-order estimator and the residual Phi - F.

#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "nlft/actions_angles.hpp"
#include "nlft/errors.hpp"
#include "nlft/roots_products.hpp"
#include "nlft/signal.hpp"
#include "nlft/spectra.hpp"

namespace nlft {

struct BirkhoffConfig {
  SpectralConfig spectral;
  ProductConfig products;
  AngleConfig angles;
  int n_max = -1;  // assemble |n| <= n_max only; -1 means the whole window
};

enum class Provenance { full, leading_order };

inline const char* to_string(Provenance p) { return p == Provenance::full ? "full" : "leading_order"; }

struct BirkhoffCoefficients {
  int K = 0;
  IndexedSequence z1, z2;
  std::vector<double> I;           // n + K
  std::vector<double> error_bar;   // n + K
  std::vector<std::string> failure;  // n + K; empty when the index succeeded
  std::vector<ActionAngleRecord> records;  // n + K (full provenance only)
  Provenance provenance = Provenance::full;

  BirkhoffCoefficients() = default;
  BirkhoffCoefficients(int k, Provenance p)
      : K(k), z1(k), z2(k), I(std::size_t(2 * k + 1), 0.0), error_bar(std::size_t(2 * k + 1), 0.0),
        failure(std::size_t(2 * k + 1)), provenance(p) {}

  std::size_t slot(int n) const { return static_cast<std::size_t>(n + K); }
  double action(int n) const { return I[slot(n)]; }
  double bar(int n) const { return error_bar[slot(n)]; }
  bool ok(int n) const { return failure[slot(n)].empty(); }
  bool all_ok() const {
    for (const auto& f : failure)
      if (!f.empty()) return false;
    return true;
  }
  /// x(n) = (z1 + z2) / sqrt 2, y(n) = i (z1 - z2) / sqrt 2
  cplx x(int n) const { return (z1[n] + z2[n]) / std::sqrt(2.0); }
  cplx y(int n) const { return kI * (z1[n] - z2[n]) / std::sqrt(2.0); }
  SequencePair pair() const { return {z1, z2, 0.0}; }
};

/// (z_n^-, z_n^+)
inline std::pair<cplx, cplx> z_pm(int n, const SpectralWindow& w, const EtaResult& eta, const ProductConfig& pc = {}) {
  const auto& g = w.at(n);
  const cplx q = kI * g.delta_at_mu / (2.0 * delta_n_at_mu(n, w, pc));
  const cplx d = g.tau - g.mu;
  return {(d + q) * eta.minus, (d - q) * eta.plus};
}

/// Assembles z1, z2 from an angle solver; per-index failures are recorded, not thrown.
inline BirkhoffCoefficients birkhoff_from(const AngleSolver& s, int n_max = -1) {
  const auto& w = s.window();
  const int K = w.K;
  const int top = n_max < 0 ? K : std::min(n_max, K);
  BirkhoffCoefficients out(K, Provenance::full);
  out.records.resize(std::size_t(2 * K + 1));
  for (int n = -top; n <= top; ++n) {
    try {
      const auto rec = s.record(n);
      const auto [zm, zp] = z_pm(n, w, rec.eta, s.products());
      const cplx ph = std::polar(1.0, -rec.beta);
      out.z1[n] = rec.xi * ph * zm;
      out.z2[n] = rec.xi * std::conj(ph) * zp;
      out.I[out.slot(n)] = rec.I;
      // e^{-i beta} moves by at most |beta tail| on the unit circle
      out.error_bar[out.slot(n)] = rec.xi * std::max(std::abs(zm), std::abs(zp)) * rec.beta_tail_bar;
      out.records[out.slot(n)] = rec;
    } catch (const Error& e) {
      out.failure[out.slot(n)] = e.what();
    }
  }
  for (int n = top + 1; n <= K; ++n) {
    out.failure[out.slot(n)] = "not assembled";
    out.failure[out.slot(-n)] = "not assembled";
  }
  return out;
}

inline BirkhoffCoefficients birkhoff_full(const PeriodicPotential& p, int K, const BirkhoffConfig& cfg = {}) {
  const auto w = build_window(p, K, cfg.spectral);
  const AngleSolver s(w, cfg.products, cfg.angles);
  return birkhoff_from(s, cfg.n_max);
}

/// z1(n) ~ (tau_n - mu_n) + i (-1)^n delta(mu_n) / 2, z2(n) ~ (tau_n - mu_n) - i (-1)^n delta(mu_n) / 2.
inline BirkhoffCoefficients birkhoff_leading(const SpectralWindow& w) {
  BirkhoffCoefficients out(w.K, Provenance::leading_order);
  for (int n = -w.K; n <= w.K; ++n) {
    const auto& g = w.at(n);
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    const cplx d = g.tau - g.mu;
    out.z1[n] = d + kI * sgn * g.delta_at_mu / 2.0;
    out.z2[n] = d - kI * sgn * g.delta_at_mu / 2.0;
    out.I[out.slot(n)] = std::norm(out.z1[n]);
  }
  return out;
}

inline BirkhoffCoefficients birkhoff_leading(const PeriodicPotential& p, int K, const BirkhoffConfig& cfg = {}) {
  return birkhoff_leading(build_window(p, K, cfg.spectral));
}

/// (Phi - F)(phi) on |n| <= K; weight carries the largest error bar.
inline SequencePair residual(const PeriodicPotential& p, const BirkhoffCoefficients& z) {
  const auto f = fourier_map(p, z.K);
  SequencePair out{IndexedSequence(z.K), IndexedSequence(z.K), 0.0};
  for (int n = -z.K; n <= z.K; ++n) {
    out.z1[n] = z.z1[n] - f.z1[n];
    out.z2[n] = z.z2[n] - f.z2[n];
    out.weight = std::max(out.weight, z.bar(n));
  }
  return out;
}

inline SequencePair residual(const PeriodicPotential& p, int K, const BirkhoffConfig& cfg = {}) {
  return residual(p, birkhoff_full(p, K, cfg));
}

inline std::string birkhoff_csv(const PeriodicPotential& p, const BirkhoffCoefficients& z) {
  const auto f = fourier_map(p, z.K);
  std::ostringstream os;
  os << "n,re_z1,im_z1,re_z2,im_z2,I,residual,error_bar,provenance\n" << std::setprecision(17);
  for (int n = -z.K; n <= z.K; ++n) {
    if (!z.ok(n)) continue;
    os << n << ',' << z.z1[n].real() << ',' << z.z1[n].imag() << ',' << z.z2[n].real() << ',' << z.z2[n].imag()
       << ',' << z.action(n) << ',' << std::abs(z.z1[n] - f.z1[n]) << ',' << z.bar(n) << ','
       << to_string(z.provenance) << '\n';
  }
  return os.str();
}

// Poisson bracket {F, G} = -i sum_m [dF/du(m) dG/dv(-m) - dF/dv(-m) dG/du(m)],
// u = phi1, v = phi2, on real-type potentials parametrized by Re, Im of u(m).
// Since v(-m) = conj u(m), central differences in Re u(m), Im u(m) give the
// Wirtinger pair dF/du(m) = (d_x - i d_y) F / 2 and dF/dv(-m) = (d_x + i d_y) F / 2.

struct WirtingerGradient {
  int band = 0;
  std::vector<std::vector<cplx>> du, dv;  // [output][m + B]: dF/du(m), dF/dv(-m)
};

using Functional = std::function<std::vector<cplx>(const PeriodicPotential&)>;

inline WirtingerGradient wirtinger_gradient(const Functional& f, const PeriodicPotential& p, double h) {
  if (!p.real_type(1e-14)) throw Error(ErrorKind::InvalidArgument, "bracket evaluator needs a real-type point");
  const int B = p.band_limit();
  WirtingerGradient g;
  g.band = B;
  for (int m = -B; m <= B; ++m) {
    std::vector<cplx> dx, dy;
    for (int axis = 0; axis < 2; ++axis) {
      const cplx dir = axis == 0 ? cplx(1.0, 0.0) : kI;
      PeriodicPotential plus = p, minus = p;
      plus.set_real_type_coeff(m, p.coeff1(m) + h * dir);
      minus.set_real_type_coeff(m, p.coeff1(m) - h * dir);
      const auto fp = f(plus), fm = f(minus);
      auto& d = axis == 0 ? dx : dy;
      d.resize(fp.size());
      for (std::size_t i = 0; i < fp.size(); ++i) d[i] = (fp[i] - fm[i]) / (2.0 * h);
    }
    if (g.du.empty()) {
      g.du.assign(dx.size(), std::vector<cplx>(std::size_t(2 * B + 1)));
      g.dv.assign(dx.size(), std::vector<cplx>(std::size_t(2 * B + 1)));
    }
    for (std::size_t i = 0; i < dx.size(); ++i) {
      g.du[i][std::size_t(m + B)] = 0.5 * (dx[i] - kI * dy[i]);
      g.dv[i][std::size_t(m + B)] = 0.5 * (dx[i] + kI * dy[i]);
    }
  }
  return g;
}

inline cplx poisson_bracket(const WirtingerGradient& F, std::size_t i, const WirtingerGradient& G, std::size_t j) {
  cplx acc{};
  for (std::size_t m = 0; m < F.du[i].size(); ++m) acc += F.du[i][m] * G.dv[j][m] - F.dv[i][m] * G.du[j][m];
  return -kI * acc;
}

/// {F, conj F} from the gradient of F alone, using d conj(F)/du(m) = conj(dF/dv(-m)).
inline cplx bracket_with_conjugate(const WirtingerGradient& F, std::size_t i) {
  cplx acc{};
  for (std::size_t m = 0; m < F.du[i].size(); ++m) acc += std::norm(F.du[i][m]) - std::norm(F.dv[i][m]);
  return -kI * acc;
}

}  // namespace nlft

#endif  // NLFT_BIRKHOFF_HPP
