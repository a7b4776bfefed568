#ifndef NLFT_SPECTRA_HPP
#define NLFT_SPECTRA_HPP

// Periodic spectrum lambda_n^+-, Dirichlet spectrum mu_n and critical points
// of Delta for real-type potentials, localized index by index inside
// isolating discs around n pi.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "nlft/detail/roots.hpp"
#include "nlft/errors.hpp"
#include "nlft/signal.hpp"
#include "nlft/zs_ode.hpp"

namespace nlft {

struct SpectralConfig {
  IntegratorConfig integrator;
  detail::RootSettings roots;
  double disc_radius_large = kPi / 4;  // |n| > 2B
  double disc_radius_small = kPi / 3;  // |n| <= 2B
  double gap_collapse_rel = 1e-9;      // gamma_n treated as 0 below gap_collapse_rel * <n>
  double identity_tol = 1e-8;          // delta(mu)^2 = Delta(mu)^2 - 4, relative
  // Below this size both sides are dominated by the root uncertainty of mu
  // (one ulp in mu moves chi_D by ~1e-15), so the ratio is taken against it.
  double identity_floor = 1e-10;

  double collapse_threshold(int n) const { return gap_collapse_rel * japanese(n); }
};

struct GapData {
  int n = 0;
  double lam_minus = 0, lam_plus = 0;
  double mu = 0;
  double lamdot = 0;
  double tau = 0;
  double gamma = 0;
  double disc_center = 0, disc_radius = 0;
  double delta_at_mu = 0;        // delta(mu_n) = m2 + m3 at mu_n
  double delta_at_lamdot = 0;    // Delta(lamdot_n)
  double identity_residual = 0;  // relative |delta^2 - (Delta^2 - 4)| at mu_n
  bool collapsed = false;        // gamma below the collapse threshold
  bool mu_in_gap = false;        // lam_minus - tol <= mu <= lam_plus + tol
};

struct SpectralWindow {
  int K = 0;
  int band_limit = 0;
  cplx c1{};  // tau_k - k pi = c1 / k + c3 / k^3 + ...
  double c3 = 0.0;  // fitted from the outer half of the window
  SpectralConfig config;
  std::vector<GapData> entries;  // n = -K..K

  const GapData& at(int n) const { return entries[static_cast<std::size_t>(n + K)]; }
  GapData& at(int n) { return entries[static_cast<std::size_t>(n + K)]; }
  bool contains(int n) const { return n >= -K && n <= K; }
  double threshold(int n) const { return config.collapse_threshold(n); }
};

namespace detail {

inline int index_steps(const ZsEvaluator& ev, int n) {
  return ev.steps_for(cplx(std::abs(n) * kPi + kPi, 0.0));
}

inline double disc_radius(const SpectralConfig& cfg, int n, int band_limit) {
  return std::abs(n) > 2 * band_limit ? cfg.disc_radius_large : cfg.disc_radius_small;
}

// Finds a sign change of f on [c - r, c + r], widening to the midpoints
// between neighbouring discs if needed.
template <class F>
double root_in_disc(F&& f, int n, double center, double radius, const RootSettings& rs, const char* what) {
  double r = radius;
  for (int attempt = 0; attempt < 3; ++attempt) {
    const double a = center - r, b = center + r;
    const double fa = f(a), fb = f(b);
    if ((fa <= 0) != (fb <= 0) || fa == 0 || fb == 0) return bracketed_root(f, a, b, fa, fb, rs);
    r = attempt == 0 ? std::max(r, kPi / 3) : 0.49 * kPi;
  }
  throw Error(ErrorKind::NoRootInDisc, std::string(what) + " for n = " + std::to_string(n));
}

}  // namespace detail

/// Real zero of Delta-dot near n pi.
inline double locate_critical_point(const ZsEvaluator& ev, int n, const SpectralConfig& cfg = {}) {
  const int steps = detail::index_steps(ev, n);
  auto f = [&](double x) { return ev.discriminant(x, steps).delta_dot.real(); };
  return detail::root_in_disc(f, n, n * kPi, detail::disc_radius(cfg, n, ev.potential().band_limit()), cfg.roots,
                              "critical point");
}

/// Roots of Delta^2 - 4 on either side of the critical point, ordered.
/// Solved as Delta^2/4 - 1 = 0 in the cancellation-free form.
inline std::pair<double, double> locate_periodic_pair(const ZsEvaluator& ev, int n, double lamdot,
                                                      const SpectralConfig& cfg = {}) {
  const int steps = detail::index_steps(ev, n);
  auto f = [&](double x) { return ev.discriminant(x, steps).disc_minus_one.real(); };
  const double f0 = f(lamdot);
  if (f0 <= 0.0 || 2.0 * std::sqrt(f0) < cfg.collapse_threshold(n)) return {lamdot, lamdot};
  const double limit = detail::disc_radius(cfg, n, ev.potential().band_limit());
  auto side = [&](double dir) {
    double step = std::max(4.0 * std::sqrt(f0), 1e-6);
    while (true) {
      step = std::min(step, 0.49 * kPi);
      const double x = lamdot + dir * step;
      const double fx = f(x);
      if (fx <= 0.0) return detail::bracketed_root(f, lamdot, x, f0, fx, cfg.roots);
      if (step >= 0.49 * kPi || step > 2.0 * limit)
        throw Error(ErrorKind::BracketFailure, "Delta^2 - 4 keeps its sign near n = " + std::to_string(n));
      step *= 2.0;
    }
  };
  const double lo = side(-1.0);
  const double hi = side(+1.0);
  return {lo, hi};
}

/// Real zero of the Dirichlet characteristic function chi_D = m1 + m2 - m3 - m4
/// near n pi; for real type chi_D is purely imaginary on the real axis.
inline double locate_dirichlet(const ZsEvaluator& ev, int n, const SpectralConfig& cfg = {}) {
  const int steps = detail::index_steps(ev, n);
  auto g = [&](double x) {
    const auto t = ev.transfer(x, false, steps);
    return (t.m.a + t.m.b - t.m.c - t.m.d).imag();
  };
  return detail::root_in_disc(g, n, n * kPi, detail::disc_radius(cfg, n, ev.potential().band_limit()), cfg.roots,
                              "Dirichlet eigenvalue");
}

/// delta(mu)^2 = Delta(mu)^2 - 4, relative residual.
/// The difference is exactly chi_D (m1 - m4 - m2 + m3), so a root mu known to
/// within a few ulps leaves |chi_D'| * ulps * |m1 - m4 - m2 + m3| behind; that
/// amount and the floor are both counted as noise.
inline double dirichlet_identity_residual(const TransferMatrix& t, double floor, int ulps = 4) {
  const auto e = discriminant_from(t);
  const cplx lhs = e.delta_anti * e.delta_anti;
  const cplx rhs = 4.0 * e.disc_minus_one;
  double slack = 0.0;
  if (t.has_derivative) {
    const cplx chi_dot = t.dm.a + t.dm.b - t.dm.c - t.dm.d;
    const double dmu = ulps * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t.lambda));
    slack = std::abs(chi_dot) * dmu * std::abs(t.m.a - t.m.d - t.m.b + t.m.c);
  }
  const double excess = std::max(0.0, std::abs(lhs - rhs) - slack);
  return excess / std::max({std::abs(lhs), std::abs(rhs), floor});
}

inline GapData locate_gap(const ZsEvaluator& ev, int n, const SpectralConfig& cfg = {}) {
  GapData g;
  g.n = n;
  g.disc_center = n * kPi;
  g.disc_radius = detail::disc_radius(cfg, n, ev.potential().band_limit());
  g.lamdot = locate_critical_point(ev, n, cfg);
  const auto [lo, hi] = locate_periodic_pair(ev, n, g.lamdot, cfg);
  g.lam_minus = lo;
  g.lam_plus = hi;
  g.tau = 0.5 * (lo + hi);
  g.gamma = hi - lo;
  g.collapsed = g.gamma < cfg.collapse_threshold(n);
  const int steps = detail::index_steps(ev, n);
  g.delta_at_lamdot = ev.discriminant(g.lamdot, steps).delta_trace.real();
  g.mu = locate_dirichlet(ev, n, cfg);
  const auto tm = ev.transfer(g.mu, true, steps);
  g.delta_at_mu = (tm.m.b + tm.m.c).real();
  g.identity_residual = dirichlet_identity_residual(tm, cfg.identity_floor);
  if (g.identity_residual > cfg.identity_tol)
    throw Error(ErrorKind::IdentityViolation,
                "delta(mu)^2 != Delta(mu)^2 - 4 at n = " + std::to_string(n) + " (rel " +
                    std::to_string(g.identity_residual) + ")");
  const double tol = std::max(1e-10, 10.0 * cfg.collapse_threshold(n));
  g.mu_in_gap = g.mu >= g.lam_minus - tol && g.mu <= g.lam_plus + tol;
  return g;
}

/// Invariant audit; returns one message per violation.
inline std::vector<std::string> audit_window(const SpectralWindow& w) {
  std::vector<std::string> issues;
  auto note = [&](int n, const std::string& msg) { issues.push_back("n = " + std::to_string(n) + ": " + msg); };
  for (int n = -w.K; n <= w.K; ++n) {
    const auto& g = w.at(n);
    const double tol = 1e-9 * japanese(n);
    if (g.lam_minus > g.lam_plus) note(n, "lambda^- > lambda^+");
    if (g.gamma < 0) note(n, "negative gap length");
    if (g.lamdot < g.lam_minus - tol || g.lamdot > g.lam_plus + tol) note(n, "critical point outside gap");
    for (double v : {g.lam_minus, g.lam_plus, g.mu, g.lamdot})
      if (std::abs(v - g.disc_center) >= 0.5 * kPi) note(n, "spectral point outside isolating disc");
    const double expected = (n % 2 == 0) ? 1.0 : -1.0;
    if (g.delta_at_lamdot * expected <= 0) note(n, "sign(Delta(lamdot)) != (-1)^n");
    if (std::abs(g.delta_at_lamdot) < 2.0 - 1e-9) note(n, "|Delta(lamdot)| < 2");
    if (n < w.K && g.lam_plus > w.at(n + 1).lam_minus) note(n, "gap overlaps its right neighbour");
  }
  return issues;
}

/// All GapData for |n| <= K. Per-index failures are collected and reported
/// together with their indices.
inline SpectralWindow build_window(const PeriodicPotential& p, int K, const SpectralConfig& cfg = {}) {
  if (K < p.band_limit() + 4)
    throw Error(ErrorKind::InvalidArgument,
                "window K = " + std::to_string(K) + " must be >= B + 4 = " + std::to_string(p.band_limit() + 4));
  if (!p.real_type(1e-14)) throw Error(ErrorKind::InvalidArgument, "spectral window requires a real-type potential");
  ZsEvaluator ev(p, cfg.integrator);
  SpectralWindow w;
  w.K = K;
  w.band_limit = p.band_limit();
  w.c1 = c1_invariant(p);
  w.config = cfg;
  w.entries.resize(static_cast<std::size_t>(2 * K + 1));
  std::vector<std::string> failures;
  for (int n = -K; n <= K; ++n) {
    try {
      w.at(n) = locate_gap(ev, n, cfg);
    } catch (const Error& e) {
      failures.push_back("n = " + std::to_string(n) + ": " + e.what());
    }
  }
  if (failures.empty()) {
    // odd part of (tau_k - k pi - c1 / k) k^3 averaged over K/2 <= k <= K
    double acc = 0.0;
    int cnt = 0;
    for (int k = std::max(1, K / 2); k <= K; ++k, ++cnt) {
      const double k3 = double(k) * k * k;
      const double dp = (w.at(k).tau - k * kPi - w.c1.real() / k) * k3;
      const double dm = (w.at(-k).tau + k * kPi + w.c1.real() / k) * k3;
      acc += 0.5 * (dp - dm);
    }
    w.c3 = cnt > 0 ? acc / cnt : 0.0;
    const auto issues = audit_window(w);
    failures.insert(failures.end(), issues.begin(), issues.end());
  }
  if (!failures.empty()) {
    std::string msg = "spectral window failed at " + std::to_string(failures.size()) + " place(s)";
    for (const auto& f : failures) msg += "\n  " + f;
    throw Error(ErrorKind::WindowAudit, msg);
  }
  return w;
}

inline std::string window_csv(const SpectralWindow& w) {
  std::ostringstream os;
  os << "n,lam_minus,lam_plus,mu,lamdot,tau,gamma\n";
  os << std::setprecision(17);
  for (const auto& g : w.entries)
    os << g.n << ',' << g.lam_minus << ',' << g.lam_plus << ',' << g.mu << ',' << g.lamdot << ',' << g.tau << ','
       << g.gamma << '\n';
  return os.str();
}

}  // namespace nlft

#endif  // NLFT_SPECTRA_HPP
