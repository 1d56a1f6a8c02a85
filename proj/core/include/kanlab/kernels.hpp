#ifndef KANLAB_KERNELS_HPP
#define KANLAB_KERNELS_HPP

#include "kanlab/bump.hpp"
#include "kanlab/circle_map.hpp"

namespace kanlab {

// Scalar kernels of the construction. All are written in the additive form
// base + bump * displacement so that the anchored sections (c = 0, 1 for Q;
// d = 0 for P) are preserved exactly in floating point.

struct QPartials {
  double da, db, dc;
};

struct PPartials {
  double da, db, dc, dd, de;
};

struct RPartials {
  double da, db, dc;
};

// Q(a,b,c) = c + psi(sqrt(a^2+b^2)) * (phi(c) - c).
double q_eval(double a, double b, double c, const BumpProfile& bump);
QPartials q_partials(double a, double b, double c, const BumpProfile& bump);
// d/dc Q alone; the hot path of every TS exponent estimate.
double q_dc(double a, double b, double c, const BumpProfile& bump);

// P(a,b,c,d,e) = d + psi(k d) psi(k sqrt(a^2+b^2+c^2+e^2)) (3d/(4 sigma0) - d).
double p_eval(double a, double b, double c, double d, double e, double k,
              double sigma0, const BumpProfile& bump);
PPartials p_partials(double a, double b, double c, double d, double e,
                     double k, double sigma0, const BumpProfile& bump);
double p_dd(double a, double b, double c, double d, double e, double k,
            double sigma0, const BumpProfile& bump);

// R(a,b,c) = c + psi(l c) psi(l sqrt(a^2+b^2)) / l^3.
double r_eval(double a, double b, double c, double ell,
              const BumpProfile& bump);
RPartials r_partials(double a, double b, double c, double ell,
                     const BumpProfile& bump);

}  // namespace kanlab

#endif  // KANLAB_KERNELS_HPP
