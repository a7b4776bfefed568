#ifndef NLFT_NLS_EVOLVE_HPP
#define NLFT_NLS_EVOLVE_HPP

// Defocusing NLS  i u_t = -u_xx + 2 |u|^2 u  on [0, 1), Strang split:
// half nonlinear step u <- u e^{-i |u|^2 dt}, linear step u^(n) <- u^(n) e^{-i (2 pi n)^2 dt},
// half nonlinear step. Both substeps are exact, so the L2 norm is conserved
// up to roundoff. Needs FFTW3.

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "nlft/errors.hpp"
#include "nlft/signal.hpp"

namespace nlft {

struct EvolutionConfig {
  double T = 1.0;
  double dt = 1e-4;  // the substeps are exact, so there is no stability bound on dt
  int M = 512;       // grid points, power of two
  double tail_tolerance = 1e-8;   // relative L2 mass allowed beyond |n| = M/4
  double band_tolerance = 1e-24;  // relative mass dropped when choosing the output band
};

struct EvolutionResult {
  PeriodicPotential u;
  int steps = 0;
  double tail_mass = 0.0;  // relative L2 mass beyond |n| = M/4 at time T
  double dropped_mass = 0.0;  // relative mass outside the output band
  double l2_initial = 0.0, l2_final = 0.0;  // int |u|^2 dx on the grid
};

namespace detail {

class FftPair {
 public:
  explicit FftPair(int M) : M_(M), buf_(static_cast<std::size_t>(M)) {
    auto* p = reinterpret_cast<fftw_complex*>(buf_.data());
    fwd_ = fftw_plan_dft_1d(M, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(M, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPair() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  FftPair(const FftPair&) = delete;
  FftPair& operator=(const FftPair&) = delete;

  std::vector<cplx>& data() { return buf_; }
  // grid -> coefficients c(n) at index n mod M
  void forward() {
    fftw_execute(fwd_);
    for (auto& v : buf_) v /= double(M_);
  }
  // coefficients -> grid
  void backward() { fftw_execute(bwd_); }

 private:
  int M_;
  std::vector<cplx> buf_;
  fftw_plan fwd_{}, bwd_{};
};

inline int wrap(int n, int M) { return ((n % M) + M) % M; }

}  // namespace detail

inline EvolutionResult evolve_detailed(const PeriodicPotential& u0, const EvolutionConfig& cfg = {}) {
  const int M = cfg.M;
  if (M < 8 || (M & (M - 1)) != 0) throw Error(ErrorKind::InvalidArgument, "grid M must be a power of two");
  if (!u0.real_type(1e-14)) throw Error(ErrorKind::InvalidArgument, "evolve needs a real-type potential");
  if (u0.band_limit() > M / 4) throw Error(ErrorKind::InvalidArgument, "band limit exceeds M/4");
  if (!(cfg.dt > 0.0) || !(cfg.T >= 0.0)) throw Error(ErrorKind::InvalidArgument, "need dt > 0 and T >= 0");

  detail::FftPair fft(M);
  auto& u = fft.data();
  std::fill(u.begin(), u.end(), cplx{});
  const int B = u0.band_limit();
  for (int n = -B; n <= B; ++n) u[std::size_t(detail::wrap(n, M))] = u0.coeff1(n);
  fft.backward();

  auto l2 = [&](const std::vector<cplx>& g) {
    double s = 0.0;
    for (const auto& v : g) s += std::norm(v);
    return s / M;
  };

  EvolutionResult out;
  out.l2_initial = l2(u);
  const int steps = static_cast<int>(std::llround(cfg.T / cfg.dt));
  const double dt = steps > 0 ? cfg.T / steps : 0.0;
  std::vector<cplx> lin(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j) {
    const int n = j <= M / 2 ? j : j - M;
    const double k = 2.0 * kPi * n;
    lin[std::size_t(j)] = std::polar(1.0, -k * k * dt);
  }
  auto half_nonlinear = [&] {
    for (auto& v : u) v *= std::polar(1.0, -std::norm(v) * dt);
  };
  for (int s = 0; s < steps; ++s) {
    half_nonlinear();
    fft.forward();
    for (int j = 0; j < M; ++j) u[std::size_t(j)] *= lin[std::size_t(j)];
    fft.backward();
    half_nonlinear();
  }
  out.steps = steps;
  out.l2_final = l2(u);

  fft.forward();
  double total = 0.0, beyond = 0.0;
  for (int j = 0; j < M; ++j) {
    const int n = j <= M / 2 ? j : j - M;
    const double m = std::norm(u[std::size_t(j)]);
    total += m;
    if (std::abs(n) > M / 4) beyond += m;
  }
  out.tail_mass = total > 0.0 ? beyond / total : 0.0;
  if (out.tail_mass > cfg.tail_tolerance)
    throw Error(ErrorKind::TailEnergyOverflow,
                "relative L2 mass beyond |n| = M/4 is " + std::to_string(out.tail_mass));

  // smallest band b whose complement carries at most band_tolerance of the mass
  int b = M / 4;
  double outside = beyond;
  while (b > 0) {
    const double drop = std::norm(u[std::size_t(b)]) + std::norm(u[std::size_t(M - b)]);
    if (total > 0.0 && (outside + drop) / total > cfg.band_tolerance) break;
    outside += drop;
    --b;
  }
  out.dropped_mass = total > 0.0 ? outside / total : 0.0;
  PeriodicPotential res(b, std::max(M, PeriodicPotential::default_grid_size(b)));
  for (int n = -b; n <= b; ++n) res.set_real_type_coeff(n, u[std::size_t(detail::wrap(n, M))]);
  out.u = res;
  return out;
}

inline PeriodicPotential evolve(const PeriodicPotential& u0, const EvolutionConfig& cfg = {}) {
  return evolve_detailed(u0, cfg).u;
}

/// H = int |u_x|^2 + |u|^4 dx: gradient term from the coefficients, quartic term on a grid
/// fine enough to integrate |u|^4 exactly.
inline double hamiltonian(const PeriodicPotential& u) {
  if (!u.real_type(1e-12)) throw Error(ErrorKind::InvalidArgument, "hamiltonian needs a real-type potential");
  const int B = u.band_limit();
  double grad = 0.0;
  for (int n = -B; n <= B; ++n) grad += std::pow(2.0 * kPi * n, 2) * std::norm(u.coeff1(n));
  int M = 8;
  while (M <= 4 * B + 1) M <<= 1;
  detail::FftPair fft(M);
  auto& g = fft.data();
  std::fill(g.begin(), g.end(), cplx{});
  for (int n = -B; n <= B; ++n) g[std::size_t(detail::wrap(n, M))] = u.coeff1(n);
  fft.backward();
  double quartic = 0.0;
  for (const auto& v : g) quartic += std::norm(v) * std::norm(v);
  return grad + quartic / M;
}

/// int |u|^2 dx by Parseval.
inline double l2_mass(const PeriodicPotential& u) {
  double s = 0.0;
  for (int n = -u.band_limit(); n <= u.band_limit(); ++n) s += std::norm(u.coeff1(n));
  return s;
}

}  // namespace nlft

#endif  // NLFT_NLS_EVOLVE_HPP
