#ifndef NLFT_ROOTS_PRODUCTS_HPP
#define NLFT_ROOTS_PRODUCTS_HPP

// Square roots with fixed branches and the infinite products built from them.
//
// s-root:  sqrt_s((l_k^+ - l)(l_k^- - l)) = (tau_k - l) sqrt+(1 - (g_k / (tau_k - l))^2),
//          g_k = gamma_k / 2. For a real gap this is analytic off the gap segment.
// c-root:  sqrt_c(Delta^2 - 4) = -2i sin(l) prod_k sqrt_s_k(l) / (k pi - l),
// and on U_n:  sqrt_c = 2i sqrt_s_n(l) delta_n(l).
// All products are taken in ratio-to-closed-form shape so the factors tend to 1.

#include <cmath>
#include <complex>
#include <vector>

#include "nlft/errors.hpp"
#include "nlft/signal.hpp"
#include "nlft/spectra.hpp"

namespace nlft {

enum class TailMode {
  unit,           // factors beyond K_tail set to 1
  sine_resummed,  // ratio to the sine product; with ratio factors this equals unit
  asymptotic      // factors beyond K_tail from the model tau_k = k pi + c1 / k + c3 / k^3, gamma_k = 0
};

struct ProductConfig {
  int K_tail = 0;                          // 0: use the window K
  TailMode tail_mode = TailMode::asymptotic;
  int quad_nodes = 64;
  double branch_tol = 1e-12;
  int K_far = 4096;                        // asymptotic tail summed explicitly up to here

  int tail_index(const SpectralWindow& w) const { return K_tail > 0 ? K_tail : w.K; }
  void validate(const SpectralWindow& w) const {
    if (K_tail != 0 && K_tail < w.K) throw Error(ErrorKind::InvalidArgument, "K_tail must be >= window K");
    if (quad_nodes < 32) throw Error(ErrorKind::InvalidArgument, "quad_nodes must be >= 32");
  }
};

namespace detail {

inline cplx csinc(cplx x) {
  if (std::abs(x) < 1e-4) {
    const cplx x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// Gap data of index k, modelled beyond the window.
struct GapShape {
  double tau, half_gap;
  double lo, hi;
};

inline GapShape gap_shape(int k, const SpectralWindow& w) {
  if (w.contains(k)) {
    const auto& g = w.at(k);
    return {g.tau, 0.5 * g.gamma, g.lam_minus, g.lam_plus};
  }
  const double t = k * kPi + w.c1.real() / k + w.c3 / (double(k) * k * k);
  return {t, 0.0, t, t};
}

inline bool on_segment(cplx lambda, double lo, double hi) {
  const double scale = std::max(1.0, std::abs(lambda));
  return std::abs(lambda.imag()) <= 1e-14 * scale && lambda.real() > lo && lambda.real() < hi;
}

inline cplx standard_root_shape(const GapShape& s, cplx lambda) {
  const cplx u = s.tau - lambda;
  if (s.half_gap == 0.0) return u;
  const cplx r = s.half_gap / u;
  return u * std::sqrt(1.0 - r * r);
}

// log of the model-tail product prod_{K < |k| <= K_far} (tau_k - l) / (k pi - l)
// with tau_k = k pi + c1 / k + c3 / k^3, plus the leading remainder beyond K_far.
inline cplx asymptotic_tail_log(cplx lambda, double c1, double c3, int K, int K_far) {
  if (c1 == 0.0 && c3 == 0.0) return {};
  cplx acc{};
  for (int k = K + 1; k <= K_far; ++k) {
    const double kk = k;
    const double d = c1 / kk + c3 / (kk * kk * kk);
    acc += std::log(1.0 + d / (kk * kPi - lambda));
    acc += std::log(1.0 + d / (kk * kPi + lambda));
  }
  return acc + 2.0 * c1 / (kPi * std::max(K, K_far));
}

inline cplx tail_factor(cplx lambda, const SpectralWindow& w, const ProductConfig& cfg) {
  if (cfg.tail_mode != TailMode::asymptotic) return 1.0;
  return std::exp(asymptotic_tail_log(lambda, w.c1.real(), w.c3, cfg.tail_index(w), cfg.K_far));
}

}  // namespace detail

/// sqrt_s((l_k^+ - l)(l_k^- - l)).
inline cplx standard_root(int k, cplx lambda, const SpectralWindow& w) {
  const auto s = detail::gap_shape(k, w);
  if (s.half_gap > 0.0 && detail::on_segment(lambda, s.lo, s.hi))
    throw Error(ErrorKind::OnCutError, "lambda on gap segment G_" + std::to_string(k));
  return detail::standard_root_shape(s, lambda);
}

/// Boundary value of the s-root on the gap from the upper half plane:
/// -i sqrt((g_k)^2 - (l - tau_k)^2) for real l in the gap.
inline cplx standard_root_upper(int k, double lambda, const SpectralWindow& w) {
  const auto s = detail::gap_shape(k, w);
  const double u = lambda - s.tau;
  if (std::abs(u) <= s.half_gap) return {0.0, -std::sqrt(std::max(0.0, s.half_gap * s.half_gap - u * u))};
  return detail::standard_root_shape(s, lambda);
}

/// Continuous square root along a sampled path by nearest-of-two continuation,
/// starting from the given value at the first node.
inline std::vector<cplx> continue_sqrt(const std::vector<cplx>& squares, cplx start) {
  std::vector<cplx> out(squares.size());
  if (squares.empty()) return out;
  out[0] = start;
  for (std::size_t i = 1; i < squares.size(); ++i) {
    const cplx r = std::sqrt(squares[i]);
    out[i] = std::abs(r - out[i - 1]) <= std::abs(-r - out[i - 1]) ? r : -r;
  }
  return out;
}

/// sqrt_c(Delta^2 - 4) via the sine-resummed product.
inline cplx canonical_root(cplx lambda, const SpectralWindow& w, const ProductConfig& cfg = {}) {
  const int K = cfg.tail_index(w);
  cplx prod = -2.0 * kI * std::sin(lambda);
  for (int k = -K; k <= K; ++k) {
    const cplx denom = k * kPi - lambda;
    const cplx num = standard_root(k, lambda, w);
    if (std::abs(denom) < 1e-300) {
      // sin(l) / (k pi - l) -> -(-1)^k as l -> k pi
      prod = -2.0 * kI * ((k % 2 == 0) ? -1.0 : 1.0) * detail::csinc(lambda - k * kPi) * num;
      for (int j = -K; j <= K; ++j)
        if (j != k) prod *= standard_root(j, lambda, w) / (j * kPi - lambda);
      return prod * detail::tail_factor(lambda, w, cfg);
    }
    prod *= num / denom;
  }
  return prod * detail::tail_factor(lambda, w, cfg);
}

/// delta_n(l) = (-1)^n sinc(l - n pi) prod_{k != n} sqrt_s_k(l) / (k pi - l), so
/// that sqrt_c = 2i sqrt_s_n delta_n on U_n.
inline cplx delta_n(int n, cplx lambda, const SpectralWindow& w, const ProductConfig& cfg = {}) {
  const int K = cfg.tail_index(w);
  cplx prod = ((n % 2 == 0) ? 1.0 : -1.0) * detail::csinc(lambda - n * kPi);
  for (int k = -K; k <= K; ++k) {
    if (k == n) continue;
    prod *= standard_root(k, lambda, w) / (k * kPi - lambda);
  }
  return prod * detail::tail_factor(lambda, w, cfg);
}

inline cplx delta_n_at_mu(int n, const SpectralWindow& w, const ProductConfig& cfg = {}) {
  return delta_n(n, w.at(n).mu, w, cfg);
}

/// chi_n(l) = prod_{k != n} (lamdot_k - l) / sqrt_s_k(l); tail factors are 1.
inline cplx chi_n(cplx lambda, int n, const SpectralWindow& w, const ProductConfig& cfg = {}) {
  (void)cfg;
  cplx prod = 1.0;
  for (int k = -w.K; k <= w.K; ++k) {
    if (k == n) continue;
    prod *= (w.at(k).lamdot - lambda) / standard_root(k, lambda, w);
  }
  return prod;
}

/// Sign relating the *-root on an open gap G_n to the upper boundary value of
/// the s-root: sqrt*_n = eps_n * sqrt_s_n(l + i0) on the gap. Fixed by the anchor
/// 2i sqrt*_n(mu_n) delta_n(mu_n) = delta(mu_n).
inline double star_sign(int n, const SpectralWindow& w, const ProductConfig& cfg = {}) {
  const auto& g = w.at(n);
  if (g.collapsed) throw Error(ErrorKind::InvalidArgument, "star_sign needs an open gap, n = " + std::to_string(n));
  if (std::abs(g.delta_at_mu) < cfg.branch_tol) {
    // mu_n at a gap edge: sqrt*_n(mu_n) = 0 carries no sign, and the *-root
    // integrals from lambda_n^- to mu_n do not depend on it. Take +1.
    return 1.0;
  }
  const double dn = delta_n_at_mu(n, w, cfg).real();
  return (g.delta_at_mu * dn) >= 0 ? 1.0 : -1.0;
}

/// True when the anchor delta(mu_n) is too small to fix the sign of the *-root
/// on an open gap (star_sign then falls back to +1).
inline bool anchor_degenerate(int n, const SpectralWindow& w, const ProductConfig& cfg = {}) {
  const auto& g = w.at(n);
  return !g.collapsed && std::abs(g.delta_at_mu) < cfg.branch_tol;
}

/// eps_n = delta(mu_n) / sqrt_c(Delta^2(mu_n) - 4) for gamma_n = 0, mu_n != tau_n.
/// With the gap closed sqrt_c(mu_n) = 2i (tau_n - mu_n) delta_n(mu_n).
inline cplx epsilon(int n, const SpectralWindow& w, const ProductConfig& cfg = {}) {
  const auto& g = w.at(n);
  const double u = g.tau - g.mu;
  if (u == 0.0) throw Error(ErrorKind::AnchorDegenerate, "mu_n = tau_n, n = " + std::to_string(n));
  return g.delta_at_mu / (2.0 * kI * u * delta_n_at_mu(n, w, cfg));
}

/// sqrt*(Delta^2(l) - 4) on the admissible path from lambda_n^- to mu_n that runs
/// just above G_n: 2i delta_n(l) epsilon_n sqrt_s_n(l + i0). Exact at the anchor.
inline cplx star_root_at(cplx lambda, int n, const SpectralWindow& w, const ProductConfig& cfg = {}) {
  const auto& g = w.at(n);
  if (lambda == cplx(g.mu, 0.0)) return g.delta_at_mu;
  const cplx eps = g.collapsed ? epsilon(n, w, cfg) : cplx(star_sign(n, w, cfg));
  const cplx s = (lambda.imag() == 0.0) ? standard_root_upper(n, lambda.real(), w) : standard_root(n, lambda, w);
  return 2.0 * kI * delta_n(n, lambda, w, cfg) * eps * s;
}

}  // namespace nlft

#endif  // NLFT_ROOTS_PRODUCTS_HPP
