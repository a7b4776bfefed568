#ifndef NLFT_HARNESS_HPP
#define NLFT_HARNESS_HPP

// Experiment suites and the claims C1..C10 they check. Everything here is
// deterministic given the config (seeds included); serialization lives in tools/.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nlft/actions_angles.hpp"
#include "nlft/birkhoff.hpp"
#include "nlft/errors.hpp"
#include "nlft/nls_evolve.hpp"
#include "nlft/reference/plane_wave.hpp"
#include "nlft/roots_products.hpp"
#include "nlft/signal.hpp"
#include "nlft/spectra.hpp"
#include "nlft/zs_ode.hpp"

namespace nlft {

// ---------------------------------------------------------------- decay fits

struct DecayFit {
  double slope = 0.0, intercept = 0.0, r2 = 1.0;
  int bins = 0, samples = 0;
};

namespace detail {

inline double median_sorted(const std::vector<double>& v) {
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace detail

/// Least squares of log|value| against log n over the medians of dyadic bins
/// [2^j, 2^{j+1}). Medians are taken of the logs, so exact power laws are
/// reproduced exactly. Zero values carry no decay information and are skipped.
inline DecayFit fit_decay(const std::vector<std::pair<double, double>>& samples, double n_min) {
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> bins;
  int used = 0;
  for (const auto& [n, v] : samples) {
    const double an = std::abs(n);
    if (an < n_min || an < 1.0 || v == 0.0 || !std::isfinite(v)) continue;
    auto& b = bins[static_cast<int>(std::floor(std::log2(an)))];
    b.first.push_back(std::log(an));
    b.second.push_back(std::log(std::abs(v)));
    ++used;
  }
  if (used < 6 || bins.size() < 2)
    throw Error(ErrorKind::InsufficientSamples, "fit_decay needs >= 6 samples in >= 2 dyadic bins, got " +
                                                    std::to_string(used) + " in " + std::to_string(bins.size()));
  std::vector<double> xs, ys;
  for (auto& [j, b] : bins) {
    std::sort(b.first.begin(), b.first.end());
    std::sort(b.second.begin(), b.second.end());
    xs.push_back(detail::median_sorted(b.first));
    ys.push_back(detail::median_sorted(b.second));
  }
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  DecayFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  f.bins = static_cast<int>(xs.size());
  f.samples = used;
  return f;
}

// ---------------------------------------------------------------- config

struct PotentialSpec {
  TestPotentialKind kind = TestPotentialKind::band_limited_decay;
  int band_limit = 32;
  double amplitude = 0.5;
  int decay_order = 1;
  int mode = 1;
  std::uint64_t seed = 11;

  PeriodicPotential make() const {
    TestPotentialParams p;
    p.band_limit = band_limit;
    p.amplitude = amplitude;
    p.decay_order = decay_order;
    p.mode = mode;
    p.seed = seed;
    return make_test_potential(kind, p);
  }
};

struct Tolerances {
  double zero_discriminant = 1e-10;
  double zero_spectrum = 1e-8;
  double zero_birkhoff = 1e-10;
  double plane_wave = 1e-7;
  double wronskian = 1e-10;
  double dirichlet_identity = 1e-8;
  double c_root_square = 1e-6;
  double xi_gamma_action = 1e-6;
  double eta_product = 1e-8;
  double action_modulus = 1e-5;
  double conjugation = 1e-6;
  double halving_ratio = 2.0;
  double halving_spread = 0.25;     // relative
  double envelope_slope = -0.4;
  double boundedness_growth = 4.0;
  double asymptotic_gain = 1.0;     // fitted slope at least this much steeper than the input
  double rate_slope = 0.1;
  double tau_slope = 0.1;
  double spectrum_drift = 1e-7;
  double action_drift = 1e-5;
  double action_floor = 1e-12;
  double l2_drift = 1e-10;
  double bracket = 1e-3;
  double bracket_oracle = 1e-12;
};

struct HarnessConfig {
  PotentialSpec potential;       // the potential written to window.csv / birkhoff.csv
  int window = 40;               // K for every full computation
  int report_max = 32;           // claims look at |n| <= report_max
  int n_min = 8;                 // tails start here
  int small_band = 4;            // desk-scale band for C1, C2, C4, C9, C10
  int zero_samples = 1000;
  double plane_amplitude = 0.1;
  int plane_mode = 1;
  int plane_samples = 400;
  std::vector<double> linear_amplitudes{4e-3, 2e-3, 1e-3};
  std::vector<int> decay_orders{1, 2};
  double decay_amplitude = 0.5;  // C5..C8 test potentials; C5 doubles it
  double conservation_amplitude = 0.05;
  int conservation_decay_order = 2;
  int bracket_window = 16;
  int bracket_max_n = 2;
  double bracket_amplitude = 0.05;
  double bracket_step = 1e-6;
  std::uint64_t seed = 11;
  SpectralConfig spectral;
  ProductConfig products;
  AngleConfig angles;
  EvolutionConfig evolution;
  Tolerances tol;

  BirkhoffConfig birkhoff(int n_max) const { return {spectral, products, angles, n_max}; }
  void validate() const {
    if (report_max > window) throw Error(ErrorKind::ConfigError, "report_max must not exceed window");
    if (n_min < 1 || n_min > report_max) throw Error(ErrorKind::ConfigError, "need 1 <= n_min <= report_max");
    if (window < potential.band_limit + 4) throw Error(ErrorKind::ConfigError, "window must be >= band + 4");
    if (linear_amplitudes.size() < 2) throw Error(ErrorKind::ConfigError, "need >= 2 linear amplitudes");
    if (decay_orders.empty()) throw Error(ErrorKind::ConfigError, "need >= 1 decay order");
  }
};

// ---------------------------------------------------------------- reports

struct Check {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  std::string relation = "<=";  // "<=", ">=" or "in" (bound +- spread, spread in `extra`)
  double extra = 0.0;
  double error_bar = 0.0;
  bool passed = false;
};

enum class ClaimStatus { pass, fail, skipped };

inline const char* to_string(ClaimStatus s) {
  switch (s) {
    case ClaimStatus::pass: return "pass";
    case ClaimStatus::fail: return "fail";
    case ClaimStatus::skipped: return "skipped";
  }
  return "?";
}

struct ClaimRecord {
  std::string id;
  std::string title;
  ClaimStatus status = ClaimStatus::skipped;
  std::vector<Check> checks;
  std::string note;  // failure text when a computation threw
  double seconds = 0.0;

  bool failed() const { return status == ClaimStatus::fail; }
  void add(Check c) { checks.push_back(std::move(c)); }
  void le(const std::string& name, double measured, double bound, double bar = 0.0) {
    add({name, measured, bound, "<=", 0.0, bar, measured <= bound + bar});
  }
  void ge(const std::string& name, double measured, double bound) {
    add({name, measured, bound, ">=", 0.0, 0.0, measured >= bound});
  }
  void within(const std::string& name, double measured, double target, double spread) {
    add({name, measured, target, "in", spread, 0.0, std::abs(measured - target) <= spread});
  }
  void close() {
    bool ok = note.empty() && !checks.empty();
    for (const auto& c : checks) ok = ok && c.passed && std::isfinite(c.measured);
    status = ok ? ClaimStatus::pass : ClaimStatus::fail;
  }
  /// One-line summary: the worst check relative to its bound.
  std::string summary() const {
    std::ostringstream os;
    os.precision(3);
    if (status == ClaimStatus::skipped) return "skipped";
    if (!note.empty()) return "error: " + note;
    const Check* shown = nullptr;
    for (const auto& c : checks)
      if (!c.passed) {
        shown = &c;
        break;
      }
    if (!shown && !checks.empty()) shown = &checks.front();
    if (!shown) return "no checks";
    os << shown->name << " = " << shown->measured << ' ' << shown->relation << ' ' << shown->bound;
    if (shown->relation == "in") os << " +- " << shown->extra;
    if (checks.size() > 1) os << " (" << checks.size() << " checks)";
    return os.str();
  }
};

struct ExperimentReport {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string potential_hash;
  std::vector<ClaimRecord> claims;  // C1..C10, each exactly once
  double seconds = 0.0;

  bool passed() const {
    for (const auto& c : claims)
      if (c.failed()) return false;
    return true;
  }
};

/// FNV-1a over the coefficient bytes, hex.
inline std::string potential_hash(const PeriodicPotential& p) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](const void* data, std::size_t len) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  const int B = p.band_limit();
  mix(&B, sizeof B);
  for (int n = -B; n <= B; ++n) {
    const cplx a = p.coeff1(n), b = p.coeff2(n);
    mix(&a, sizeof a);
    mix(&b, sizeof b);
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

// ---------------------------------------------------------------- claims

namespace detail {

using Samples = std::vector<std::pair<double, double>>;

// One full computation on a potential.
struct Run {
  PeriodicPotential p;
  std::shared_ptr<const AngleSolver> solver;
  BirkhoffCoefficients z;
  SequencePair f;

  const SpectralWindow& window() const { return solver->window(); }
};

inline std::shared_ptr<const Run> full_run(const PeriodicPotential& p, const HarnessConfig& cfg) {
  auto r = std::make_shared<Run>();
  r->p = p;
  r->solver = std::make_shared<AngleSolver>(build_window(p, cfg.window, cfg.spectral), cfg.products, cfg.angles);
  r->z = birkhoff_from(*r->solver, cfg.report_max);
  r->f = fourier_map(p, cfg.window);
  return r;
}

inline Samples tail_samples(int n_min, int n_max, const std::function<double(int)>& f) {
  Samples s;
  for (int n = n_min; n <= n_max; ++n)
    for (int m : {-n, n}) s.emplace_back(double(m), f(m));
  return s;
}

inline void require_ok(const BirkhoffCoefficients& z, int top) {
  std::string bad;
  for (int n = -top; n <= top; ++n)
    if (!z.ok(n)) bad += " n = " + std::to_string(n) + ": " + z.failure[z.slot(n)] + ";";
  if (!bad.empty()) throw Error(ErrorKind::InvalidArgument, "Birkhoff assembly failed at" + bad);
}

inline PeriodicPotential decay_potential(const HarnessConfig& cfg, int N, double amplitude) {
  PotentialSpec s;
  s.band_limit = cfg.potential.band_limit;
  s.decay_order = N;
  s.amplitude = amplitude;
  s.seed = cfg.seed;
  return s.make();
}

inline PeriodicPotential small_potential(const HarnessConfig& cfg, double amplitude, int N) {
  PotentialSpec s;
  s.band_limit = cfg.small_band;
  s.decay_order = N;
  s.amplitude = amplitude;
  s.seed = cfg.seed;
  return s.make();
}

}  // namespace detail

/// Runs the claims and caches the shared computations.
class Harness {
 public:
  explicit Harness(HarnessConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

  const HarnessConfig& config() const noexcept { return cfg_; }

  /// H^N test potential of the tail claims, amplitude multiplied by `scale`.
  std::shared_ptr<const detail::Run> decay_run(int N, double scale = 1.0) {
    const auto key = std::to_string(N) + "/" + std::to_string(scale);
    auto it = runs_.find(key);
    if (it != runs_.end()) return it->second;
    auto r = detail::full_run(detail::decay_potential(cfg_, N, cfg_.decay_amplitude * scale), cfg_);
    runs_.emplace(key, r);
    return r;
  }

  static std::vector<std::string> claim_ids() {
    return {"C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10"};
  }

  ClaimRecord run_claim(const std::string& id) {
    ClaimRecord rec;
    rec.id = id;
    rec.title = title(id);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (id == "C1") c1(rec);
      else if (id == "C2") c2(rec);
      else if (id == "C3") c3(rec);
      else if (id == "C4") c4(rec);
      else if (id == "C5") c5(rec);
      else if (id == "C6") c6(rec);
      else if (id == "C7") c7(rec);
      else if (id == "C8") c8(rec);
      else if (id == "C9") c9(rec);
      else if (id == "C10") c10(rec);
      else throw Error(ErrorKind::InvalidArgument, "unknown claim " + id);
    } catch (const std::exception& e) {
      rec.note = e.what();
    }
    rec.close();
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
  }

  static std::string title(const std::string& id) {
    static const std::map<std::string, std::string> t{
        {"C1", "exactness at zero potential"},
        {"C2", "plane-wave oracle"},
        {"C3", "structural identities"},
        {"C4", "linearization at 0"},
        {"C5", "semi-linearity of Phi - F"},
        {"C6", "asymptotics of tau - mu, delta(mu), gamma"},
        {"C7", "rates of beta, xi, eta, delta_n"},
        {"C8", "fine asymptotics of tau"},
        {"C9", "isospectral NLS flow"},
        {"C10", "canonical relation"}};
    auto it = t.find(id);
    return it == t.end() ? id : it->second;
  }

  // C1: Delta = 2 cos, spectra at n pi, Phi(0) = 0.
  void c1(ClaimRecord& rec) {
    const PeriodicPotential zero(cfg_.small_band);
    const ZsEvaluator ev(zero, cfg_.spectral.integrator);
    const int K = cfg_.report_max;
    double d = 0.0;
    for (int i = 0; i < cfg_.zero_samples; ++i) {
      const double x = -K * kPi + 2.0 * K * kPi * i / (cfg_.zero_samples - 1);
      d = std::max(d, std::abs(ev.discriminant(x).delta_trace - 2.0 * std::cos(x)));
    }
    rec.le("max |Delta - 2 cos|", d, cfg_.tol.zero_discriminant);
    const auto w = build_window(zero, cfg_.window, cfg_.spectral);
    double s = 0.0;
    for (int n = -K; n <= K; ++n) {
      const auto& g = w.at(n);
      for (double v : {g.lam_minus, g.lam_plus, g.mu, g.lamdot}) s = std::max(s, std::abs(v - n * kPi));
    }
    rec.le("max |spectrum - n pi|", s, cfg_.tol.zero_spectrum);
    const AngleSolver solver(w, cfg_.products, cfg_.angles);
    const auto z = birkhoff_from(solver, K);
    detail::require_ok(z, K);
    double m = 0.0;
    for (int n = -K; n <= K; ++n) m = std::max({m, std::abs(z.z1[n]), std::abs(z.z2[n])});
    rec.le("max |Phi(0)|", m, cfg_.tol.zero_birkhoff);
  }

  // C2: plane wave a e^{2 pi i m x} against the closed form.
  void c2(ClaimRecord& rec) {
    const reference::PlaneWave pw(cfg_.plane_amplitude, cfg_.plane_mode);
    const auto p = pw.potential(cfg_.small_band);
    const ZsEvaluator ev(p, cfg_.spectral.integrator);
    const int K = cfg_.report_max;
    double dd = 0.0, da = 0.0, dc = 0.0;
    for (int i = 0; i < cfg_.plane_samples; ++i) {
      const double x = -K * kPi + 2.0 * K * kPi * i / (cfg_.plane_samples - 1);
      for (const cplx lam : {cplx(x, 0.0), cplx(x, 0.5)}) {
        const auto a = ev.discriminant(lam), b = pw.discriminant(lam);
        dd = std::max(dd, std::abs(a.delta_trace - b.delta_trace));
        da = std::max(da, std::abs(a.delta_anti - b.delta_anti));
        dc = std::max(dc, std::abs(a.dirichlet_char - b.dirichlet_char));
      }
    }
    rec.le("max |Delta - oracle|", dd, cfg_.tol.plane_wave);
    rec.le("max |delta - oracle|", da, cfg_.tol.plane_wave);
    rec.le("max |chi_D - oracle|", dc, cfg_.tol.plane_wave);
    const auto w = build_window(p, cfg_.window, cfg_.spectral);
    double lm = 0.0, lp = 0.0, mu = 0.0;
    for (int n = -K; n <= K; ++n) {
      lm = std::max(lm, std::abs(w.at(n).lam_minus - pw.lam_minus(n)));
      lp = std::max(lp, std::abs(w.at(n).lam_plus - pw.lam_plus(n)));
      mu = std::max(mu, std::abs(w.at(n).mu - pw.mu(n)));
    }
    rec.le("max |lambda^- - oracle|", lm, cfg_.tol.plane_wave);
    rec.le("max |lambda^+ - oracle|", lp, cfg_.tol.plane_wave);
    rec.le("max |mu - oracle|", mu, cfg_.tol.plane_wave);
  }

  // C3: identities on the H^1 test potential.
  void c3(ClaimRecord& rec) {
    const auto r = decay_run(cfg_.decay_orders.front());
    const auto& w = r->window();
    const auto& s = *r->solver;
    const int K = cfg_.report_max;
    detail::require_ok(r->z, K);
    const ZsEvaluator ev(r->p, cfg_.spectral.integrator);

    double wr = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double x = -K * kPi + 2.0 * K * kPi * i / 200.0;
      for (const cplx lam : {cplx(x, 0.0), cplx(x, 0.3)}) wr = std::max(wr, std::abs(ev.transfer(lam, false).wronskian() - 1.0));
    }
    rec.le("max |det M - 1|", wr, cfg_.tol.wronskian);

    double id = 0.0;
    for (int n = -w.K; n <= w.K; ++n) id = std::max(id, w.at(n).identity_residual);
    rec.le("max rel |delta(mu)^2 - (Delta(mu)^2 - 4)|", id, cfg_.tol.dirichlet_identity);

    double cr = 0.0;
    for (int n = -K; n <= K; ++n) {
      const double rad = s.contour_radius(n);
      for (int j = 0; j < 8; ++j) {
        const cplx lam = w.at(n).tau + std::polar(rad, 2.0 * kPi * (j + 0.5) / 8.0);
        const cplx c = canonical_root(lam, w, s.products());
        const cplx ref = 4.0 * ev.discriminant(lam).disc_minus_one;
        cr = std::max(cr, std::abs(c * c - ref) / std::abs(ref));
      }
    }
    rec.le("max rel |sqrt_c^2 - (Delta^2 - 4)| on contours", cr, cfg_.tol.c_root_square);

    double xg = 0.0, ep = 0.0, am = 0.0, cj = 0.0, am_bar = 0.0, cj_bar = 0.0;
    for (int n = -K; n <= K; ++n) {
      const auto& rc = r->z.records[r->z.slot(n)];
      const double g = w.at(n).gamma;
      if (rc.I > 0.0) {
        xg = std::max(xg, std::abs(rc.xi * rc.xi * g * g / 4.0 - rc.I) / rc.I);
        const double a = std::abs(std::norm(r->z.z1[n]) - rc.I);
        const double bar = 2.0 * std::abs(r->z.z1[n]) * r->z.bar(n) / rc.I;
        if (a / rc.I - bar > am - am_bar) {
          am = a / rc.I;
          am_bar = bar;
        }
      }
      ep = std::max(ep, std::abs(rc.eta_plus * rc.eta_minus - 1.0));
      const double c = std::abs(r->z.z2[n] - std::conj(r->z.z1[n]));
      if (c - r->z.bar(n) > cj - cj_bar) {
        cj = c;
        cj_bar = r->z.bar(n);
      }
    }
    rec.le("max rel |xi^2 gamma^2 / 4 - I|", xg, cfg_.tol.xi_gamma_action);
    rec.le("max |eta^+ eta^- - 1|", ep, cfg_.tol.eta_product);
    rec.le("max rel ||z1|^2 - I|", am, cfg_.tol.action_modulus, am_bar);
    rec.le("max |z2 - conj z1|", cj, cfg_.tol.conjugation, cj_bar);
  }

  // C4: ||Phi(a phi)/a - F(phi)||_0 / ||phi||_0 halves when a halves.
  void c4(ClaimRecord& rec) {
    PeriodicPotential phi(cfg_.small_band);
    std::mt19937_64 rng(cfg_.seed);
    for (int n = -cfg_.small_band; n <= cfg_.small_band; ++n)
      phi.set_coeff1(n, std::polar(1.0, 2.0 * kPi * (double(rng() >> 11) * 0x1.0p-53)));
    for (int n = -cfg_.small_band; n <= cfg_.small_band; ++n) phi.set_coeff2(n, std::conj(phi.coeff1(-n)));
    const int K = cfg_.report_max;
    const auto f = fourier_map(phi, cfg_.window);
    double fn = 0.0;
    for (int n = -K; n <= K; ++n) fn += std::norm(f.z1[n]) + std::norm(f.z2[n]);
    std::vector<double> rel;
    for (double a : cfg_.linear_amplitudes) {
      const auto z = birkhoff_full(phi.scaled(a), cfg_.window, cfg_.birkhoff(K));
      detail::require_ok(z, K);
      double acc = 0.0;
      for (int n = -K; n <= K; ++n) acc += std::norm(z.z1[n] / a - f.z1[n]) + std::norm(z.z2[n] / a - f.z2[n]);
      rel.push_back(std::sqrt(acc / fn));
      rec.add({"rel ||Phi(a phi)/a - F(phi)||_0 at a = " + fmt(a), rel.back(), 0.0, "info", 0.0, 0.0, true});
    }
    for (std::size_t i = 1; i < rel.size(); ++i) {
      // decrease per halving of a, also when the amplitudes are not exact halvings
      const double steps = std::log2(cfg_.linear_amplitudes[i - 1] / cfg_.linear_amplitudes[i]);
      const double ratio = std::pow(rel[i - 1] / rel[i], 1.0 / steps);
      rec.within("halving ratio " + fmt(cfg_.linear_amplitudes[i - 1]) + " -> " + fmt(cfg_.linear_amplitudes[i]),
                 ratio, cfg_.tol.halving_ratio, cfg_.tol.halving_ratio * cfg_.tol.halving_spread);
    }
  }

  // C5: <n>^{N+1} |(Phi - F)(n)| has a square-summable envelope and grows boundedly.
  void c5(ClaimRecord& rec) {
    const int K = cfg_.report_max;
    for (int N : cfg_.decay_orders) {
      double mx[2] = {0.0, 0.0};
      for (int k = 0; k < 2; ++k) {
        const auto r = decay_run(N, k == 0 ? 1.0 : 2.0);
        detail::require_ok(r->z, K);
        auto env = [&](int n) { return std::pow(japanese(n), N + 1) * std::abs(r->z.z1[n] - r->f.z1[n]); };
        for (int n = cfg_.n_min; n <= K; ++n) mx[k] = std::max({mx[k], env(n), env(-n)});
        if (k == 0) {
          const auto fit = fit_decay(detail::tail_samples(cfg_.n_min, K, env), cfg_.n_min);
          rec.le("N = " + std::to_string(N) + " envelope slope", fit.slope, cfg_.tol.envelope_slope);
        }
      }
      rec.le("N = " + std::to_string(N) + " envelope growth when ||phi|| doubles", mx[1] / mx[0],
             cfg_.tol.boundedness_growth);
    }
  }

  // C6: Theorem 3.1 (i)-(iii).
  void c6(ClaimRecord& rec) {
    const int K = cfg_.report_max;
    for (int N : cfg_.decay_orders) {
      const auto r = decay_run(N);
      const auto& w = r->window();
      const auto& p = r->p;
      const std::string tag = "N = " + std::to_string(N) + " ";
      const auto input = fit_decay(detail::tail_samples(cfg_.n_min, K, [&](int n) { return std::abs(p.coeff1(-n)); }),
                                   cfg_.n_min);
      auto res_i = [&](int n) { return std::abs(w.at(n).tau - w.at(n).mu + 0.5 * (p.coeff1(-n) + p.coeff2(n))); };
      auto res_ii = [&](int n) {
        const double sgn = n % 2 == 0 ? 1.0 : -1.0;
        return std::abs(w.at(n).delta_at_mu - sgn * kI * (p.coeff1(-n) - p.coeff2(n)));
      };
      auto env_iii = [&](int n) { return std::pow(japanese(n), N) * w.at(n).gamma; };
      const double want = input.slope - cfg_.tol.asymptotic_gain;
      rec.le(tag + "slope of (i) tau - mu + (phi1(-n) + phi2(n))/2", fit_decay(detail::tail_samples(cfg_.n_min, K, res_i), cfg_.n_min).slope, want);
      rec.le(tag + "slope of (ii) delta(mu) - (-1)^n i (phi1(-n) - phi2(n))",
             fit_decay(detail::tail_samples(cfg_.n_min, K, res_ii), cfg_.n_min).slope, want);
      rec.le(tag + "slope of (iii) <n>^N gamma", fit_decay(detail::tail_samples(cfg_.n_min, K, env_iii), cfg_.n_min).slope,
             cfg_.tol.envelope_slope);
    }
  }

  // C7: n |beta|, n |xi - 1|, n |eta^+- - 1|, n |(-1)^n / delta_n(mu) - 1| show no growth.
  void c7(ClaimRecord& rec) {
    const int K = cfg_.report_max;
    const auto r = decay_run(cfg_.decay_orders.front());
    detail::require_ok(r->z, K);
    auto rc = [&](int n) -> const ActionAngleRecord& { return r->z.records[r->z.slot(n)]; };
    auto slope = [&](const std::function<double(int)>& f) {
      return fit_decay(detail::tail_samples(cfg_.n_min, K, f), cfg_.n_min).slope;
    };
    rec.le("slope of n |beta_n|", slope([&](int n) { return std::abs(n * rc(n).beta); }), cfg_.tol.rate_slope);
    rec.le("slope of n |xi_n - 1|", slope([&](int n) { return std::abs(n * (rc(n).xi - 1.0)); }), cfg_.tol.rate_slope);
    rec.le("slope of n |eta_n^- - 1|", slope([&](int n) { return std::abs(double(n) * (rc(n).eta_minus - 1.0)); }),
           cfg_.tol.rate_slope);
    rec.le("slope of n |eta_n^+ - 1|", slope([&](int n) { return std::abs(double(n) * (rc(n).eta_plus - 1.0)); }),
           cfg_.tol.rate_slope);
    rec.le("slope of n |(-1)^n / delta_n(mu_n) - 1|", slope([&](int n) {
             const double sgn = n % 2 == 0 ? 1.0 : -1.0;
             return std::abs(double(n) * (sgn / rc(n).delta_n_mu - 1.0));
           }),
           cfg_.tol.rate_slope);
  }

  // C8: n^2 |tau_n - n pi - c1 / n| shows no growth.
  void c8(ClaimRecord& rec) {
    const int K = cfg_.report_max;
    for (int N : cfg_.decay_orders) {
      const auto r = decay_run(N);
      const auto& w = r->window();
      const double c1 = c1_invariant(r->p).real();
      auto f = [&](int n) { return double(n) * n * std::abs(w.at(n).tau - n * kPi - c1 / n); };
      rec.le("N = " + std::to_string(N) + " slope of n^2 |tau_n - n pi - c1/n|",
             fit_decay(detail::tail_samples(cfg_.n_min, K, f), cfg_.n_min).slope, cfg_.tol.tau_slope);
    }
  }

  // C9: spectrum, actions and L2 norm are conserved by the NLS flow.
  void c9(ClaimRecord& rec) {
    const auto u0 = detail::small_potential(cfg_, cfg_.conservation_amplitude, cfg_.conservation_decay_order);
    const auto ev = evolve_detailed(u0, cfg_.evolution);
    rec.le("rel L2 drift", std::abs(ev.l2_final - ev.l2_initial) / ev.l2_initial, cfg_.tol.l2_drift);
    const auto w0 = build_window(u0, cfg_.window, cfg_.spectral);
    const auto w1 = build_window(ev.u, cfg_.window, cfg_.spectral);
    double sp = 0.0;
    for (int n = -w0.K; n <= w0.K; ++n)
      sp = std::max({sp, std::abs(w0.at(n).lam_minus - w1.at(n).lam_minus),
                     std::abs(w0.at(n).lam_plus - w1.at(n).lam_plus)});
    rec.le("max |lambda^+-(T) - lambda^+-(0)|", sp, cfg_.tol.spectrum_drift);
    const AngleSolver s0(w0, cfg_.products, cfg_.angles), s1(w1, cfg_.products, cfg_.angles);
    double ad = 0.0;
    for (int n = -cfg_.report_max; n <= cfg_.report_max; ++n) {
      const double a = s0.action(n), b = s1.action(n);
      ad = std::max(ad, std::abs(b - a) / std::max(a, cfg_.tol.action_floor));
    }
    rec.le("max rel action drift", ad, cfg_.tol.action_drift);
  }

  // C10: {z1(n), conj z1(n)} = -i after the evaluator passes its oracle.
  void c10(ClaimRecord& rec) {
    const auto p = detail::small_potential(cfg_, cfg_.bracket_amplitude, 1);
    const int B = p.band_limit();
    // linear oracle: F = u(m0), G = v(-m0) gives {F, G} = -i
    const int m0 = std::min(1, B);
    Functional lin = [&](const PeriodicPotential& q) { return std::vector<cplx>{q.coeff1(m0), q.coeff2(-m0)}; };
    const auto gl = wirtinger_gradient(lin, p, 1e-3);
    rec.le("|{u(m0), v(-m0)} + i|", std::abs(poisson_bracket(gl, 0, gl, 1) + kI), cfg_.tol.bracket_oracle);
    if (!rec.checks.back().passed) return;

    const int nm = cfg_.bracket_max_n;
    BirkhoffConfig bc = cfg_.birkhoff(nm);
    const int K = cfg_.bracket_window;
    Functional z1 = [&](const PeriodicPotential& q) {
      const auto z = birkhoff_full(q, K, bc);
      detail::require_ok(z, nm);
      std::vector<cplx> out;
      for (int n = -nm; n <= nm; ++n) out.push_back(z.z1[n]);
      return out;
    };
    const auto g = wirtinger_gradient(z1, p, cfg_.bracket_step);
    double worst = 0.0;
    for (int n = -nm; n <= nm; ++n)
      worst = std::max(worst, std::abs(bracket_with_conjugate(g, std::size_t(n + nm)) + kI));
    rec.le("max_{|n| <= " + std::to_string(nm) + "} |{z1(n), conj z1(n)} + i|", worst, cfg_.tol.bracket);
  }

  static std::vector<std::string> suite(const std::string& experiment) {
    if (experiment == "spectrum") return {"C1", "C2"};
    if (experiment == "birkhoff") return {"C3", "C4", "C10"};
    if (experiment == "residual_decay") return {"C5"};
    if (experiment == "conservation") return {"C9"};
    if (experiment == "asymptotics") return {"C6", "C7", "C8"};
    if (experiment == "all") return claim_ids();
    throw Error(ErrorKind::ConfigError, "unknown experiment '" + experiment + "'");
  }

  /// Every claim id appears once; claims outside the suite are marked skipped.
  ExperimentReport run(const std::string& experiment) {
    const auto wanted = suite(experiment);
    ExperimentReport rep;
    rep.experiment = experiment;
    rep.seed = cfg_.seed;
    rep.potential_hash = potential_hash(cfg_.potential.make());
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& id : claim_ids()) {
      if (std::find(wanted.begin(), wanted.end(), id) == wanted.end()) {
        ClaimRecord rec;
        rec.id = id;
        rec.title = title(id);
        rep.claims.push_back(rec);
        continue;
      }
      rep.claims.push_back(run_claim(id));
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  }

 private:
  static std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  }

  HarnessConfig cfg_;
  std::map<std::string, std::shared_ptr<const detail::Run>> runs_;
};

}  // namespace nlft

#endif  // NLFT_HARNESS_HPP
