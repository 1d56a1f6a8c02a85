// Test-only oracles, kept independent of the implementation paths they
// check: Gauss-Legendre quadrature for the TS space average (the library
// uses radial Simpson), baby-step finite differences for kernel partials,
// and brute-force lattice enumeration for fixed points.
#ifndef KANLAB_TESTS_ORACLES_HPP
#define KANLAB_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "kanlab/bump.hpp"
#include "kanlab/geometry.hpp"

namespace kanlab::oracles {

// Nodes/weights for n-point Gauss-Legendre on [-1,1], Newton on Legendre
// polynomials.
inline void gauss_legendre(int n, std::vector<double>& x,
                           std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::fabs(dt) < 1e-16) break;
    }
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) *
                  [&] {
                    double p0 = 1.0, p1 = t;
                    for (int k = 2; k <= n; ++k) {
                      double p2 =
                          ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                      p0 = p1;
                      p1 = p2;
                    }
                    double dp = n * (t * p1 - p0) / (t * t - 1.0);
                    return dp * dp;
                  }());
  }
}

// 2 * iint_{delta disk} log(1 - psi^2/4) da db by radial Gauss-Legendre.
inline double ts_space_average(double delta, int nodes = 400) {
  BumpProfile bump(delta);
  std::vector<double> x, w;
  gauss_legendre(nodes, x, w);
  double acc = 0;
  for (int i = 0; i < nodes; ++i) {
    double r = 0.5 * delta * (x[i] + 1.0);
    double psi = bump.value(r);
    acc += w[i] * std::log1p(-psi * psi / 4.0) * r;
  }
  acc *= 0.5 * delta;  // jacobian of the interval map
  return 2.0 * (2.0 * M_PI) * acc;
}

// Central finite difference with a step adapted to the argument scale.
inline double fd_derivative(const std::function<double(double)>& f, double x,
                            double scale = 1.0) {
  double h = 1e-6 * std::max(1.0, std::fabs(scale));
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// All fixed points of A^n by scanning the full denominator lattice;
// feasible for small n only.
inline std::vector<RationalPoint> fixed_points_bruteforce(int n) {
  CatPower ap = cat_power(n);
  const Mat2i& m = ap.matrix;
  std::int64_t det = (m.a - 1) * (m.d - 1) - m.b * m.c;
  std::int64_t D = det < 0 ? -det : det;
  std::vector<RationalPoint> out;
  for (std::int64_t i = 0; i < D; ++i)
    for (std::int64_t j = 0; j < D; ++j) {
      RationalPoint p{i, j, D};
      if (is_fixed_point(p, m)) out.push_back(p);
    }
  return out;
}

// Largest root of lambda^2 - 3 lambda + 1 (characteristic polynomial of A).
inline double cat_eigenvalue_oracle() {
  return (3.0 + std::sqrt(5.0)) / 2.0;
}

}  // namespace kanlab::oracles

#endif  // KANLAB_TESTS_ORACLES_HPP
