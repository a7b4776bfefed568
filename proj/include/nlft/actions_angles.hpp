#ifndef NLFT_ACTIONS_ANGLES_HPP
#define NLFT_ACTIONS_ANGLES_HPP

// Actions I_n, scale factors xi_n, the normalized differentials psi_n (through
// their zeros sigma_k^n), angle corrections beta_n and the factors eta_n^+-.
//
// Conventions used throughout (real-type potentials):
//   Delta-dot / sqrt_c = -i (lamdot_n - l) / sqrt_s_n(l) chi_n(l)
//   psi_n / sqrt_c     = +i zeta_n(l) / sqrt_s_n(l),  zeta_n = prod_{k != n} (sigma_k - l) / sqrt_s_k(l)
// Circles are run counterclockwise. On a gap, l = tau_k - g_k cos(theta) gives
// dl / sqrt_s_k(l + i0) = i dtheta, which removes the endpoint singularities.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "nlft/errors.hpp"
#include "nlft/roots_products.hpp"
#include "nlft/signal.hpp"
#include "nlft/spectra.hpp"

namespace nlft {

struct AngleConfig {
  int K_psi = 0;              // 0: K - 4
  int K_beta = 0;             // 0: K_psi
  int segment_nodes = 30;     // Gauss-Legendre nodes on gap segments: 20, 30, 40 or 60
  double newton_tol = 1e-9;
  int newton_max_iter = 30;
  double seam_factor = 4.0;   // thresholds straddled within this factor trigger a conflict report
  double richardson_cutoff = 1e-6;
};

struct PsiData {
  int n = 0;
  int K_psi = 0;
  IndexedSequence sigma;      // |k| <= K; sigma_k = tau_k for |k| > K_psi, entry n unused
  IndexedSequence residuals;  // |m| <= K_psi: (1/2pi) int_{Gamma_m} psi_n / sqrt_c - delta_nm
  double self_residual = 0.0;  // |residual at m = n|, not solved for
  double max_residual = 0.0;   // over m != n
  int iterations = 0;
  std::vector<double> history;  // max residual per Newton step
};

struct BetaResult {
  double value = 0.0;
  double tail_bar = 0.0;
  IndexedSequence terms;  // beta_{n,k}, |k| <= K_beta
  double fitted_c = 0.0;  // max |beta_nk| |n - k| / (|tau_k - mu_k| + gamma_k)
};

enum class EtaBranch { open_gap, closed_gap, trivial };

inline const char* to_string(EtaBranch b) {
  switch (b) {
    case EtaBranch::open_gap: return "a";
    case EtaBranch::closed_gap: return "b";
    case EtaBranch::trivial: return "c";
  }
  return "?";
}

struct EtaResult {
  cplx minus{1.0}, plus{1.0};
  EtaBranch branch = EtaBranch::trivial;
  bool conflict = false;  // thresholds straddled; alt_* hold the other branch
  EtaBranch alt_branch = EtaBranch::trivial;
  cplx alt_minus{1.0}, alt_plus{1.0};
  double difference = 0.0;  // |minus - alt_minus|
};

struct ActionAngleRecord {
  int n = 0;
  double I = 0.0;
  double xi = 1.0;
  double beta = 0.0;
  double beta_tail_bar = 0.0;
  cplx eta_minus{1.0}, eta_plus{1.0};
  EtaResult eta;
  double t_n = std::numeric_limits<double>::quiet_NaN();  // (lamdot_n - tau_n) / (gamma_n / 2) for open gaps
  cplx delta_n_mu{};
  cplx epsilon{1.0};
  bool anchor_degenerate = false;
  double psi_max_residual = 0.0;
  double psi_self_residual = 0.0;
};

namespace detail {

struct GLRule {
  std::vector<double> x, w;  // on [-1, 1]
};

template <unsigned N>
GLRule make_gl_rule() {
  using Q = boost::math::quadrature::gauss<double, N>;
  GLRule r;
  const auto& a = Q::abscissa();
  const auto& wt = Q::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      r.x.push_back(0.0);
      r.w.push_back(wt[i]);
      continue;
    }
    r.x.push_back(-a[i]);
    r.w.push_back(wt[i]);
    r.x.push_back(a[i]);
    r.w.push_back(wt[i]);
  }
  return r;
}

inline const GLRule& gauss_legendre(int nodes) {
  static const GLRule r20 = make_gl_rule<20>(), r30 = make_gl_rule<30>(), r40 = make_gl_rule<40>(),
                      r60 = make_gl_rule<60>();
  switch (nodes) {
    case 20: return r20;
    case 30: return r30;
    case 40: return r40;
    case 60: return r60;
  }
  throw Error(ErrorKind::InvalidArgument, "segment_nodes must be 20, 30, 40 or 60");
}

// Quadrature nodes with 1/sqrt_s_j precomputed for every window index j.
// For a gap segment the entry of its own index is left at zero and never used.
struct NodeSet {
  std::vector<cplx> lambda;
  std::vector<cplx> weight;
  std::vector<std::vector<cplx>> inv_s;  // [j + K][i]

  std::size_t size() const { return lambda.size(); }
};

inline void fill_inv_s(NodeSet& ns, const SpectralWindow& w, int skip) {
  ns.inv_s.assign(static_cast<std::size_t>(2 * w.K + 1), std::vector<cplx>(ns.size()));
  for (int j = -w.K; j <= w.K; ++j) {
    if (j == skip) continue;
    auto& row = ns.inv_s[static_cast<std::size_t>(j + w.K)];
    for (std::size_t i = 0; i < ns.size(); ++i) row[i] = 1.0 / standard_root(j, ns.lambda[i], w);
  }
}

}  // namespace detail

class AngleSolver {
 public:
  AngleSolver(SpectralWindow w, ProductConfig pc = {}, AngleConfig ac = {}) : w_(std::move(w)), pc_(pc), ac_(ac) {
    pc_.validate(w_);
    const int K = w_.K;
    K_psi_ = ac_.K_psi > 0 ? ac_.K_psi : K - 4;
    K_beta_ = ac_.K_beta > 0 ? ac_.K_beta : K_psi_;
    if (K_psi_ > K - 2 || K_psi_ < 1)
      throw Error(ErrorKind::InvalidArgument, "K_psi must satisfy 1 <= K_psi <= K - 2");
    if (K_beta_ > K_psi_) throw Error(ErrorKind::InvalidArgument, "K_beta must not exceed K_psi");
    detail::gauss_legendre(ac_.segment_nodes);
    build_contours();
    build_segments();
  }

  const SpectralWindow& window() const noexcept { return w_; }
  const ProductConfig& products() const noexcept { return pc_; }
  const AngleConfig& config() const noexcept { return ac_; }
  int K_psi() const noexcept { return K_psi_; }
  int K_beta() const noexcept { return K_beta_; }

  double contour_radius(int m) const {
    const auto& g = w_.at(m);
    return std::max(g.gamma, g.disc_radius / 4.0);
  }

  /// I_n = (1/pi) oint (l - tau_n) Delta-dot / sqrt_c dl.
  /// With u = tau_n - l and x = (g_n / u)^2 the integrand is
  /// i (lamdot_n - l) chi_n(l) (1 - x)^{-1/2}. The part i (lamdot_n - l) chi_n(l)
  /// is analytic inside Gamma_n and integrates to zero, so it is dropped; what
  /// remains is O(gamma_n^2) and keeps its relative accuracy for tiny gaps.
  double action(int n) const {
    const auto& g = w_.at(n);
    if (g.gamma == 0.0) return 0.0;
    const auto& ns = contour(n);
    const double half = 0.5 * g.gamma;
    cplx acc{};
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const cplx l = ns.lambda[i];
      const cplx u = g.tau - l;
      const cplx x = (half / u) * (half / u);
      const cplx r = std::sqrt(1.0 - x);
      cplx f = kI * (g.lamdot - l) * x / (r * (1.0 + r));
      for (int k = -w_.K; k <= w_.K; ++k)
        if (k != n) f *= (w_.at(k).lamdot - l) * inv_s(ns, k, i);
      acc += ns.weight[i] * f;
    }
    return 2.0 * acc.real();
  }

  /// xi_n^2 by Gauss-Chebyshev on the gap, or chi_n(tau_n) for a collapsed gap.
  cplx xi_squared(int n) const {
    const auto& g = w_.at(n);
    if (g.collapsed) return chi_n(g.tau, n, w_, pc_);
    const double half = 0.5 * g.gamma;
    const double tn = (g.lamdot - g.tau) / half;
    const int N = pc_.quad_nodes;
    cplx acc{};
    for (int j = 1; j <= N; ++j) {
      const double t = std::cos((2.0 * j - 1.0) * kPi / (2.0 * N));
      acc += (t - tn) * (t - tn) * chi_n(g.tau + t * half, n, w_, pc_);
    }
    return 2.0 * acc / double(N);
  }

  double xi(int n) const {
    const cplx x2 = xi_squared(n);
    if (!(x2.real() > 0.0))
      throw Error(ErrorKind::NegativeXiSquared, "xi_n^2 = " + std::to_string(x2.real()) + " at n = " + std::to_string(n));
    return std::sqrt(x2.real());
  }

  /// Zeros sigma_k^n of psi_n from the normalization conditions on Gamma_m, m != n.
  PsiData solve_psi(int n) const {
    PsiData out;
    out.n = n;
    out.K_psi = K_psi_;
    out.sigma = IndexedSequence(w_.K);
    for (int k = -w_.K; k <= w_.K; ++k) out.sigma[k] = std::abs(k) <= K_psi_ ? w_.at(k).lamdot : w_.at(k).tau;
    out.sigma[n] = w_.at(n).tau;

    std::vector<int> idx;
    for (int k = -K_psi_; k <= K_psi_; ++k)
      if (k != n) idx.push_back(k);
    const int dim = static_cast<int>(idx.size());
    Eigen::VectorXcd R(dim);
    Eigen::MatrixXcd J(dim, dim);

    auto evaluate = [&](bool with_jacobian) {
      for (int a = 0; a < dim; ++a) {
        const int m = idx[static_cast<std::size_t>(a)];
        const auto& ns = contour(m);
        cplx acc{};
        if (with_jacobian) J.row(a).setZero();
        for (std::size_t i = 0; i < ns.size(); ++i) {
          const cplx base = ns.weight[i] * kI * zeta_at(n, out.sigma, ns, i) * inv_s(ns, n, i);
          acc += base;
          if (with_jacobian)
            for (int b = 0; b < dim; ++b) J(a, b) += base / (out.sigma[idx[static_cast<std::size_t>(b)]] - ns.lambda[i]);
        }
        R(a) = acc;
      }
      return R.cwiseAbs().maxCoeff();
    };

    double res = dim > 0 ? evaluate(true) : 0.0;
    out.history.push_back(res);
    while (res >= ac_.newton_tol) {
      if (out.iterations >= ac_.newton_max_iter || !std::isfinite(res)) {
        std::string h;
        for (double v : out.history) h += " " + std::to_string(v);
        throw Error(ErrorKind::NewtonDivergence, "psi_" + std::to_string(n) + " residual history:" + h);
      }
      const Eigen::VectorXcd step = J.partialPivLu().solve(R);
      for (int b = 0; b < dim; ++b) out.sigma[idx[static_cast<std::size_t>(b)]] -= step(b);
      ++out.iterations;
      for (int k : idx) {
        if (std::abs(out.sigma[k] - w_.at(k).tau) >= w_.at(k).disc_radius)
          throw Error(ErrorKind::SigmaLeftDisc,
                      "sigma_" + std::to_string(k) + "^" + std::to_string(n) + " left its disc");
      }
      res = evaluate(true);
      out.history.push_back(res);
    }

    out.residuals = IndexedSequence(K_psi_);
    for (int a = 0; a < dim; ++a) out.residuals[idx[static_cast<std::size_t>(a)]] = R(a);
    out.max_residual = res;
    if (std::abs(n) <= K_psi_ || w_.contains(n)) {
      const auto& ns = contour(n);
      cplx acc{};
      for (std::size_t i = 0; i < ns.size(); ++i)
        acc += ns.weight[i] * kI * zeta_at(n, out.sigma, ns, i) * inv_s(ns, n, i);
      if (std::abs(n) <= K_psi_) out.residuals[n] = acc - 1.0;
      out.self_residual = std::abs(acc - 1.0);
    }
    return out;
  }

  /// zeta_n(l) at an arbitrary point of U_n.
  cplx zeta(int n, const PsiData& psi, cplx lambda) const {
    cplx prod = 1.0;
    for (int k = -w_.K; k <= w_.K; ++k)
      if (k != n) prod *= (psi.sigma[k] - lambda) / standard_root(k, lambda, w_);
    return prod;
  }

  BetaResult beta(int n, const PsiData& psi) const {
    BetaResult out;
    out.terms = IndexedSequence(K_beta_);
    for (int k = -K_beta_; k <= K_beta_; ++k) {
      if (k == n) continue;
      const cplx b = beta_term(n, k, psi);
      out.terms[k] = b;
      out.value += b.real();
      const auto& g = w_.at(k);
      const double size = std::abs(g.tau - g.mu) + g.gamma;
      if (size > 0.0) out.fitted_c = std::max(out.fitted_c, std::abs(b) * std::abs(n - k) / size);
    }
    for (int k = -w_.K; k <= w_.K; ++k) {
      if (std::abs(k) <= K_beta_ || k == n) continue;
      const auto& g = w_.at(k);
      out.tail_bar += (std::abs(g.tau - g.mu) + g.gamma) / std::abs(n - k);
    }
    out.tail_bar *= out.fitted_c;
    return out;
  }

  /// beta_{n,k} = int_{l_k^-}^{mu_k} psi_n / sqrt*(Delta^2 - 4) dl.
  cplx beta_term(int n, int k, const PsiData& psi) const {
    const auto& g = w_.at(k);
    if (!g.collapsed) {
      const auto& ns = segment(k);
      if (ns.size() == 0) return {};
      const double eps = star_sign(k, w_, pc_);
      cplx acc{};
      for (std::size_t i = 0; i < ns.size(); ++i) {
        const cplx l = ns.lambda[i];
        cplx f = (psi.sigma[k] - l) * inv_s(ns, n, i);
        for (int j = -w_.K; j <= w_.K; ++j)
          if (j != n && j != k) f *= (psi.sigma[j] - l) * inv_s(ns, j, i);
        acc += ns.weight[i] * f;
      }
      return -eps * acc;
    }
    if (std::abs(g.mu - g.tau) <= w_.threshold(k)) return {};
    // closed gap, mu_k off tau_k: straight segment, no singularity
    const cplx eps = epsilon(k, w_, pc_);
    const auto& rule = detail::gauss_legendre(ac_.segment_nodes);
    const double half = 0.5 * (g.mu - g.tau);
    cplx acc{};
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double l = g.tau + half * (1.0 + rule.x[i]);
      acc += rule.w[i] * half * zeta(n, psi, l) / standard_root(n, l, w_);
    }
    return eps * kI * acc;
  }

  EtaResult eta(int n, const PsiData& psi) const {
    const auto& g = w_.at(n);
    const double thr = w_.threshold(n);
    const double off = std::abs(g.mu - g.tau);
    EtaResult out;
    if (!g.collapsed) {
      out.branch = EtaBranch::open_gap;
      std::tie(out.minus, out.plus) = eta_open(n, psi);
    } else if (off > thr) {
      out.branch = EtaBranch::closed_gap;
      std::tie(out.minus, out.plus) = eta_closed(n, psi);
    }
    const double s = ac_.seam_factor;
    const bool near_gamma = g.gamma > thr / s && g.gamma < thr * s;
    const bool near_off = off > thr / s && off < thr * s;
    if (near_gamma || near_off) {
      out.conflict = true;
      if (out.branch != EtaBranch::closed_gap && off > 0.0) {
        out.alt_branch = EtaBranch::closed_gap;
        std::tie(out.alt_minus, out.alt_plus) = eta_closed(n, psi);
      } else if (out.branch != EtaBranch::open_gap && g.gamma > 0.0) {
        out.alt_branch = EtaBranch::open_gap;
        std::tie(out.alt_minus, out.alt_plus) = eta_open(n, psi);
      } else {
        out.alt_branch = EtaBranch::trivial;
        out.alt_minus = out.alt_plus = 1.0;
      }
      out.difference = std::abs(out.minus - out.alt_minus);
    }
    return out;
  }

  ActionAngleRecord record(int n) const {
    const auto psi = solve_psi(n);
    return record(n, psi);
  }

  ActionAngleRecord record(int n, const PsiData& psi) const {
    ActionAngleRecord r;
    const auto& g = w_.at(n);
    r.n = n;
    r.I = action(n);
    r.xi = xi(n);
    const auto b = beta(n, psi);
    r.beta = b.value;
    r.beta_tail_bar = b.tail_bar;
    r.eta = eta(n, psi);
    r.eta_minus = r.eta.minus;
    r.eta_plus = r.eta.plus;
    if (!g.collapsed) r.t_n = (g.lamdot - g.tau) / (0.5 * g.gamma);
    r.delta_n_mu = delta_n_at_mu(n, w_, pc_);
    if (!g.collapsed) {
      r.epsilon = star_sign(n, w_, pc_);
      r.anchor_degenerate = anchor_degenerate(n, w_, pc_);
    } else if (std::abs(g.mu - g.tau) > 0.0) {
      r.epsilon = epsilon(n, w_, pc_);
    }
    r.psi_max_residual = psi.max_residual;
    r.psi_self_residual = psi.self_residual;
    return r;
  }

 private:
  const detail::NodeSet& contour(int m) const { return contours_[static_cast<std::size_t>(m + w_.K)]; }
  const detail::NodeSet& segment(int k) const { return segments_[static_cast<std::size_t>(k + w_.K)]; }

  cplx inv_s(const detail::NodeSet& ns, int j, std::size_t i) const {
    return ns.inv_s[static_cast<std::size_t>(j + w_.K)][i];
  }

  cplx zeta_at(int n, const IndexedSequence& sigma, const detail::NodeSet& ns, std::size_t i) const {
    const cplx l = ns.lambda[i];
    cplx prod = 1.0;
    for (int k = -w_.K; k <= w_.K; ++k)
      if (k != n) prod *= (sigma[k] - l) * inv_s(ns, k, i);
    return prod;
  }

  void build_contours() {
    const int K = w_.K;
    const int N = pc_.quad_nodes;
    contours_.resize(static_cast<std::size_t>(2 * K + 1));
    for (int m = -K; m <= K; ++m) {
      const auto& g = w_.at(m);
      const double r = contour_radius(m);
      for (int j = -K; j <= K; ++j) {
        if (j == m) continue;
        const auto& h = w_.at(j);
        const double dist = std::max({h.lam_minus - g.tau, g.tau - h.lam_plus, 0.0});
        if (dist <= 1.01 * r)
          throw Error(ErrorKind::ContourTouchesGap,
                      "contour around G_" + std::to_string(m) + " reaches G_" + std::to_string(j));
      }
      auto& ns = contours_[static_cast<std::size_t>(m + K)];
      ns.lambda.resize(static_cast<std::size_t>(N));
      ns.weight.resize(static_cast<std::size_t>(N));
      for (int i = 0; i < N; ++i) {
        const cplx e = std::polar(1.0, 2.0 * kPi * (i + 0.5) / N);
        ns.lambda[static_cast<std::size_t>(i)] = g.tau + r * e;
        // (1/2pi) oint f dl ~ sum weight_i f(l_i)
        ns.weight[static_cast<std::size_t>(i)] = kI * r * e / double(N);
      }
      detail::fill_inv_s(ns, w_, K + 1);
    }
  }

  void build_segments() {
    const int K = w_.K;
    const auto& rule = detail::gauss_legendre(ac_.segment_nodes);
    segments_.resize(static_cast<std::size_t>(2 * K + 1));
    for (int k = -K; k <= K; ++k) {
      const auto& g = w_.at(k);
      if (g.collapsed) continue;
      const double half = 0.5 * g.gamma;
      const double theta = std::acos(std::clamp((g.tau - g.mu) / half, -1.0, 1.0));
      if (theta == 0.0) continue;
      auto& ns = segments_[static_cast<std::size_t>(k + K)];
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double th = 0.5 * theta * (1.0 + rule.x[i]);
        ns.lambda.push_back(g.tau - half * std::cos(th));
        ns.weight.push_back(0.5 * theta * rule.w[i]);
      }
      detail::fill_inv_s(ns, w_, k);
    }
  }

  // branch (a): J = eps_n i int_0^{theta_mu} (zeta_n - 1) dtheta, eta^- = e^J, eta^+ = e^-J
  std::pair<cplx, cplx> eta_open(int n, const PsiData& psi) const {
    const auto& ns = segment(n);
    if (ns.size() == 0) return {1.0, 1.0};
    const double eps = star_sign(n, w_, pc_);
    cplx acc{};
    for (std::size_t i = 0; i < ns.size(); ++i) acc += ns.weight[i] * (zeta_at(n, psi.sigma, ns, i) - 1.0);
    const cplx J = eps * kI * acc;
    return {std::exp(J), std::exp(-J)};
  }

  // branch (b): J = eps_n int_tau^mu (zeta_n(l) - zeta_n(tau)) / (tau - l) dl
  std::pair<cplx, cplx> eta_closed(int n, const PsiData& psi) const {
    const auto& g = w_.at(n);
    if (g.mu == g.tau) return {1.0, 1.0};
    const cplx eps = epsilon(n, w_, pc_);
    const cplx z0 = zeta(n, psi, g.tau);
    auto quotient = [&](double l) -> cplx {
      const double d = g.tau - l;
      if (std::abs(d) >= ac_.richardson_cutoff) return (zeta(n, psi, l) - z0) / d;
      // -zeta'(tau) by Richardson-extrapolated central differences
      const double h = 1e-4;
      auto D = [&](double hh) { return (zeta(n, psi, g.tau + hh) - zeta(n, psi, g.tau - hh)) / (2.0 * hh); };
      return -(4.0 * D(0.5 * h) - D(h)) / 3.0;
    };
    const auto& rule = detail::gauss_legendre(ac_.segment_nodes);
    const double half = 0.5 * (g.mu - g.tau);
    cplx acc{};
    for (std::size_t i = 0; i < rule.x.size(); ++i) acc += rule.w[i] * half * quotient(g.tau + half * (1.0 + rule.x[i]));
    const cplx J = eps * acc;
    return {std::exp(J), std::exp(-J)};
  }

  SpectralWindow w_;
  ProductConfig pc_;
  AngleConfig ac_;
  int K_psi_ = 0, K_beta_ = 0;
  std::vector<detail::NodeSet> contours_;
  std::vector<detail::NodeSet> segments_;
};

// Single-shot forms.

inline double action(int n, const SpectralWindow& w, const ProductConfig& pc = {}) {
  return AngleSolver(w, pc).action(n);
}

inline double xi(int n, const SpectralWindow& w, const ProductConfig& pc = {}) { return AngleSolver(w, pc).xi(n); }

inline PsiData solve_psi(int n, const SpectralWindow& w, const ProductConfig& pc = {}, const AngleConfig& ac = {}) {
  return AngleSolver(w, pc, ac).solve_psi(n);
}

}  // namespace nlft

#endif  // NLFT_ACTIONS_ANGLES_HPP
