#pragma once

// Independent reference computations used to pin expected values.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline double bisect(const std::function<double(double)>& f, double a, double b, double tol = 1e-15) {
  double fa = f(a);
  for (int it = 0; it < 400 && b - a > tol * std::max(1.0, std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

inline double jump_f(double alpha, double beta, double gamma, double dd, double x) {
  return alpha * std::exp(-2.0 * x) + beta * std::exp(-2.0 * x / dd) - gamma;
}

// Positive roots of the jump function from a fine sign-change sweep on [0, x_max].
inline std::vector<double> jump_roots(double alpha, double beta, double gamma, double dd,
                                      double x_max = 60.0, int samples = 60000) {
  std::vector<double> roots;
  auto f = [=](double x) { return jump_f(alpha, beta, gamma, dd, x); };
  double a = 0.0, fa = f(a);
  for (int i = 1; i <= samples; ++i) {
    const double b = x_max * i / samples, fb = f(b);
    if ((fa > 0.0) != (fb > 0.0)) {
      const double r = bisect(f, a, b);
      if (r > 1e-9) roots.push_back(r);  // positive roots only
    }
    a = b;
    fa = fb;
  }
  return roots;
}

// alpha V0 + (beta / D) W0 with V0 = -e^{-2x}, W0 = -e^{-2x/D}.
inline double margin(double alpha, double beta, double dd, double x) {
  return -alpha * std::exp(-2.0 * x) - beta / dd * std::exp(-2.0 * x / dd);
}

}  // namespace oracle
