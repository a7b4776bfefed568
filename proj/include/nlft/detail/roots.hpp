#ifndef NLFT_DETAIL_ROOTS_HPP
#define NLFT_DETAIL_ROOTS_HPP

#include <cmath>
#include <optional>
#include <utility>

namespace nlft::detail {

struct RootSettings {
  double bisection_tol = 1e-8;  // bracket width before switching to secant
  int secant_steps = 3;         // nominal; continues while the step still shrinks
  int max_secant_steps = 12;
};

/// Root of a real function on a sign-changing bracket [a, b].
/// Bisection until the bracket is narrower than bisection_tol, then secant
/// steps confined to the bracket (bisection fallback when a step leaves it).
template <class F>
double bracketed_root(F&& f, double a, double b, double fa, double fb, const RootSettings& rs = {}) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (a > b) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  while (b - a > rs.bisection_tol) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  // secant polish inside [a, b]
  double x0 = a, f0 = fa, x1 = b, f1 = fb;
  double best = std::abs(fa) < std::abs(fb) ? a : b;
  double best_f = std::min(std::abs(fa), std::abs(fb));
  for (int it = 0; it < rs.max_secant_steps; ++it) {
    if (f1 == f0) break;
    double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!(x2 >= a && x2 <= b)) x2 = 0.5 * (a + b);
    const double f2 = f(x2);
    if (std::abs(f2) < best_f) {
      best = x2;
      best_f = std::abs(f2);
    }
    if (f2 == 0.0) return x2;
    if ((f2 < 0) == (fa < 0)) {
      a = x2;
      fa = f2;
    } else {
      b = x2;
      fb = f2;
    }
    const double step = std::abs(x2 - x1);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    if (it + 1 >= rs.secant_steps && step <= 1e-15 * std::max(1.0, std::abs(x2))) break;
  }
  return best;
}

}  // namespace nlft::detail

#endif  // NLFT_DETAIL_ROOTS_HPP
