#include "kanlab/kernels.hpp"

#include <cmath>

namespace kanlab {

namespace {
constexpr double kTinyRadius = 1e-300;  // below this, psi' factors are 0 anyway
}

double q_eval(double a, double b, double c, const BumpProfile& bump) {
  double rho = std::sqrt(a * a + b * b);
  double w = bump.value(rho);
  if (w == 0.0) return c;
  return c + w * (phi_eval(c) - c);
}

double q_dc(double a, double b, double c, const BumpProfile& bump) {
  double rho = std::sqrt(a * a + b * b);
  double w = bump.value(rho);
  if (w == 0.0) return 1.0;
  return 1.0 + (phi_deriv(c) - 1.0) * w;
}

QPartials q_partials(double a, double b, double c, const BumpProfile& bump) {
  double rho = std::sqrt(a * a + b * b);
  double w = bump.value(rho);
  double wp = bump.deriv(rho);
  QPartials p{};
  p.dc = 1.0 + (phi_deriv(c) - 1.0) * w;
  if (wp != 0.0 && rho > kTinyRadius) {
    double disp = phi_eval(c) - c;
    p.da = wp * (a / rho) * disp;
    p.db = wp * (b / rho) * disp;
  }
  return p;
}

double p_eval(double a, double b, double c, double d, double e, double k,
              double sigma0, const BumpProfile& bump) {
  double u = bump.value(k * d);
  if (u == 0.0) return d;
  double s = std::sqrt(a * a + b * b + c * c + e * e);
  double w = bump.value(k * s);
  if (w == 0.0) return d;
  return d + u * w * (3.0 * d / (4.0 * sigma0) - d);
}

double p_dd(double a, double b, double c, double d, double e, double k,
            double sigma0, const BumpProfile& bump) {
  double u = bump.value(k * d);
  double up = bump.deriv(k * d);
  if (u == 0.0 && up == 0.0) return 1.0;
  double s = std::sqrt(a * a + b * b + c * c + e * e);
  double w = bump.value(k * s);
  if (w == 0.0) return 1.0;
  double m = 3.0 / (4.0 * sigma0) - 1.0;
  return 1.0 + w * m * (u + up * k * d);
}

PPartials p_partials(double a, double b, double c, double d, double e,
                     double k, double sigma0, const BumpProfile& bump) {
  PPartials p{0, 0, 0, 1, 0};
  double u = bump.value(k * d);
  double up = bump.deriv(k * d);
  double s = std::sqrt(a * a + b * b + c * c + e * e);
  double w = bump.value(k * s);
  double wp = bump.deriv(k * s);
  double m = 3.0 / (4.0 * sigma0) - 1.0;
  if (w != 0.0 && (u != 0.0 || up != 0.0)) {
    p.dd = 1.0 + w * m * (u + up * k * d);
  }
  if (u != 0.0 && wp != 0.0 && s > kTinyRadius) {
    double common = u * m * d * wp * k / s;
    p.da = common * a;
    p.db = common * b;
    p.dc = common * c;
    p.de = common * e;
  }
  return p;
}

double r_eval(double a, double b, double c, double ell,
              const BumpProfile& bump) {
  double u = bump.value(ell * c);
  if (u == 0.0) return c;
  double rho = std::sqrt(a * a + b * b);
  double w = bump.value(ell * rho);
  if (w == 0.0) return c;
  return c + u * w / (ell * ell * ell);
}

RPartials r_partials(double a, double b, double c, double ell,
                     const BumpProfile& bump) {
  RPartials p{0, 0, 1};
  double u = bump.value(ell * c);
  double up = bump.deriv(ell * c);
  double rho = std::sqrt(a * a + b * b);
  double w = bump.value(ell * rho);
  double wp = bump.deriv(ell * rho);
  double inv2 = 1.0 / (ell * ell);
  if (up != 0.0 && w != 0.0) p.dc = 1.0 + up * w * inv2;
  if (u != 0.0 && wp != 0.0 && rho > kTinyRadius) {
    double common = u * wp * inv2 / rho;
    p.da = common * a;
    p.db = common * b;
  }
  return p;
}

}  // namespace kanlab
