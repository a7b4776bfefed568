#ifndef NLFT_ZS_ODE_HPP
#define NLFT_ZS_ODE_HPP

// Fundamental solution M(1, lambda) of the Zakharov-Shabat system
//
//   F' = A(x, lambda) F,   A = [[-i lambda, i phi1], [-i phi2, i lambda]],
//   M(0, lambda) = identity,
//
// integrated with the fourth-order commutator-free exponential scheme of
// Blanes and Moan (two exponentials per step at the Gauss nodes). The
// lambda-derivative is propagated through the exact Frechet derivative of
// each exponential, so dM is the derivative of the discrete map itself.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "nlft/errors.hpp"
#include "nlft/signal.hpp"

namespace nlft {

struct Mat2 {
  cplx a{}, b{}, c{}, d{};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
  friend Mat2 operator-(const Mat2& x, const Mat2& y) { return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d}; }
  friend Mat2 operator*(cplx s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }

  cplx det() const { return a * d - b * c; }
  cplx trace() const { return a + d; }
};

struct TransferMatrix {
  cplx lambda{};
  Mat2 m;    // M(1, lambda): m1 = a, m2 = b, m3 = c, m4 = d
  Mat2 dm;   // d/dlambda M(1, lambda), valid when has_derivative
  bool has_derivative = false;
  int steps = 0;

  cplx m1() const { return m.a; }
  cplx m2() const { return m.b; }
  cplx m3() const { return m.c; }
  cplx m4() const { return m.d; }
  cplx wronskian() const { return m.det(); }
};

struct DiscriminantEval {
  cplx lambda{};
  cplx delta_trace{};   // Delta = m1 + m4
  cplx delta_anti{};    // delta = m2 + m3
  cplx delta_dot{};     // d Delta / d lambda
  cplx dirichlet_char{};  // chi_D = m1 + m2 - m3 - m4
  /// Delta^2/4 - 1 assembled as ((m1 - m4)^2 + 4 m2 m3) / 4, which avoids the
  /// cancellation in Delta^2 - 4 near periodic eigenvalues.
  cplx disc_minus_one{};
};

inline DiscriminantEval discriminant_from(const TransferMatrix& t) {
  DiscriminantEval e;
  e.lambda = t.lambda;
  e.delta_trace = t.m.a + t.m.d;
  e.delta_anti = t.m.b + t.m.c;
  e.dirichlet_char = t.m.a + t.m.b - t.m.c - t.m.d;
  e.delta_dot = t.has_derivative ? t.dm.a + t.dm.d : cplx{std::nan(""), 0.0};
  const cplx diff = t.m.a - t.m.d;
  e.disc_minus_one = 0.25 * diff * diff + t.m.b * t.m.c;
  return e;
}

/// Step-count policy: steps = max(base, per_unit * |lambda|), never below 4B.
struct IntegratorConfig {
  int base_steps = 1024;
  double steps_per_unit_lambda = 20.0;

  int steps_for(double abs_lambda) const {
    const double s = std::max<double>(base_steps, std::ceil(steps_per_unit_lambda * abs_lambda));
    // multiples of 64 so nearby lambdas share cached node samples
    return 64 * static_cast<int>(std::ceil(s / 64.0));
  }
};

namespace detail {

// exp of the trace-free matrix X = [[p, q], [r, -p]] together with the
// Frechet derivative in direction Y = diag(y, -y).
struct ExpResult {
  Mat2 e;
  Mat2 de;
};

inline void exp_coefficients(cplx w2, cplx& c, cplx& s, cplx& dcoef) {
  // c = cosh w, s = sinh w / w, dcoef = (cosh w - sinh w / w) / w^2; all even in w.
  if (std::abs(w2) < 0.25) {
    cplx term_c{1.0}, term_s{1.0}, term_d{1.0 / 3.0};
    c = term_c;
    s = term_s;
    dcoef = term_d;
    for (int k = 1; k < 12; ++k) {
      term_c *= w2 / double((2 * k - 1) * (2 * k));
      term_s *= w2 / double((2 * k) * (2 * k + 1));
      // (2k+2)/(2k+3)! from (2k)/(2k+1)!
      term_d *= w2 * double(2 * k + 2) / (double(2 * k) * double(2 * k + 2) * double(2 * k + 3));
      c += term_c;
      s += term_s;
      dcoef += term_d;
    }
    return;
  }
  const cplx w = std::sqrt(w2);
  c = std::cosh(w);
  s = std::sinh(w) / w;
  dcoef = (c - s) / w2;
}

inline ExpResult exp_tracefree(cplx p, cplx q, cplx r, cplx y, bool with_derivative) {
  const cplx w2 = p * p + q * r;
  cplx c, s, dcoef;
  exp_coefficients(w2, c, s, dcoef);
  ExpResult out;
  out.e = {c + s * p, s * q, s * r, c - s * p};
  if (with_derivative) {
    const cplx py = p * y;
    const cplx a0 = s * py;
    const cplx a1 = dcoef * py;
    out.de = {a0 + a1 * p + s * y, a1 * q, a1 * r, a0 - a1 * p - s * y};
  }
  return out;
}

}  // namespace detail

/// Potential values at the two Gauss nodes of every step, combined with the
/// commutator-free weights: for step j, off-diagonal entries of the first and
/// second exponent (without the factor h and the +-i).
struct StepSamples {
  int steps = 0;
  std::vector<std::array<cplx, 4>> w;  // {phi1 first, phi2 first, phi1 second, phi2 second}
};

inline std::shared_ptr<const StepSamples> make_step_samples(const PeriodicPotential& p, int steps) {
  constexpr double r3 = 1.7320508075688772;
  const double c1 = 0.5 - r3 / 6.0, c2 = 0.5 + r3 / 6.0;
  const double wa = 0.25 + r3 / 6.0, wb = 0.25 - r3 / 6.0;
  auto out = std::make_shared<StepSamples>();
  out->steps = steps;
  out->w.resize(static_cast<std::size_t>(steps));
  const double h = 1.0 / steps;
  for (int j = 0; j < steps; ++j) {
    const auto [u1, v1] = p.sample((j + c1) * h);
    const auto [u2, v2] = p.sample((j + c2) * h);
    out->w[static_cast<std::size_t>(j)] = {wa * u1 + wb * u2, wa * v1 + wb * v2, wb * u1 + wa * u2, wb * v1 + wa * v2};
  }
  return out;
}

inline TransferMatrix integrate_samples(const StepSamples& smp, cplx lambda, bool with_derivative) {
  const int steps = smp.steps;
  const double h = 1.0 / steps;
  // diagonal of each exponent: h (wa + wb) (-i lambda) = -i lambda h / 2
  const cplx p = -kI * lambda * (0.5 * h);
  const cplx y = -kI * (0.5 * h);
  Mat2 m = Mat2::identity();
  Mat2 dm{};
  for (int j = 0; j < steps; ++j) {
    const auto& w = smp.w[static_cast<std::size_t>(j)];
    const auto e1 = detail::exp_tracefree(p, kI * h * w[0], -kI * h * w[1], y, with_derivative);
    const auto e2 = detail::exp_tracefree(p, kI * h * w[2], -kI * h * w[3], y, with_derivative);
    if (with_derivative) {
      const Mat2 m1 = e1.e * m;
      const Mat2 dm1 = e1.e * dm + e1.de * m;
      m = e2.e * m1;
      dm = e2.e * dm1 + e2.de * m1;
    } else {
      m = e2.e * (e1.e * m);
    }
  }
  TransferMatrix t;
  t.lambda = lambda;
  t.m = m;
  t.dm = dm;
  t.has_derivative = with_derivative;
  t.steps = steps;
  return t;
}

inline void check_steps(const PeriodicPotential& p, int steps) {
  if (steps < 4 * p.band_limit() || steps < 1)
    throw Error(ErrorKind::StepCountTooSmall,
                "steps = " + std::to_string(steps) + " < 4B = " + std::to_string(4 * p.band_limit()));
}

/// M(1, lambda) (and dM/dlambda) for the given step count.
inline TransferMatrix integrate_transfer(const PeriodicPotential& p, cplx lambda, int steps, bool with_derivative) {
  check_steps(p, steps);
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
    throw Error(ErrorKind::InvalidArgument, "non-finite lambda");
  const auto smp = make_step_samples(p, steps);
  return integrate_samples(*smp, lambda, with_derivative);
}

/// Evaluator bound to one potential; caches the node samples per step count.
/// Safe to share across threads.
class ZsEvaluator {
 public:
  explicit ZsEvaluator(PeriodicPotential p, IntegratorConfig cfg = {}) : p_(std::move(p)), cfg_(cfg) {}

  const PeriodicPotential& potential() const noexcept { return p_; }
  const IntegratorConfig& config() const noexcept { return cfg_; }

  int steps_for(cplx lambda) const {
    return std::max(cfg_.steps_for(std::abs(lambda)), 4 * std::max(1, p_.band_limit()));
  }

  TransferMatrix transfer(cplx lambda, bool with_derivative, int steps = 0) const {
    if (steps == 0) steps = steps_for(lambda);
    check_steps(p_, steps);
    return integrate_samples(*samples(steps), lambda, with_derivative);
  }

  DiscriminantEval discriminant(cplx lambda, int steps = 0) const {
    return discriminant_from(transfer(lambda, true, steps));
  }

 private:
  std::shared_ptr<const StepSamples> samples(int steps) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(steps);
    if (it != cache_.end()) return it->second;
    auto s = make_step_samples(p_, steps);
    cache_.emplace(steps, s);
    return s;
  }

  PeriodicPotential p_;
  IntegratorConfig cfg_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::shared_ptr<const StepSamples>> cache_;
};

inline DiscriminantEval discriminant_bundle(const PeriodicPotential& p, cplx lambda, const IntegratorConfig& cfg = {}) {
  ZsEvaluator ev(p, cfg);
  return ev.discriminant(lambda);
}

}  // namespace nlft

#endif  // NLFT_ZS_ODE_HPP
