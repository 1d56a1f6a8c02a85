#ifndef KANLAB_LINALG_HPP
#define KANLAB_LINALG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <cstddef>

namespace kanlab {

struct Vec2 {
  double x = 0, y = 0;
  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::sqrt(x * x + y * y); }
};

// 2x2 integer matrix (cat map powers stay exact).
struct Mat2i {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  Vec2 apply(Vec2 v) const {
    return {static_cast<double>(a) * v.x + static_cast<double>(b) * v.y,
            static_cast<double>(c) * v.x + static_cast<double>(d) * v.y};
  }
  std::int64_t trace() const { return a + d; }
  std::int64_t det() const {
    return a * d - b * c;
  }
};

using Vec5 = std::array<double, 5>;
using Mat5 = std::array<std::array<double, 5>, 5>;
using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline Mat5 mat5_zero() {
  Mat5 m{};
  return m;
}

inline Mat5 mat5_diag(double a, double b, double c, double d, double e) {
  Mat5 m{};
  m[0][0] = a; m[1][1] = b; m[2][2] = c; m[3][3] = d; m[4][4] = e;
  return m;
}

inline Vec5 mat5_apply(const Mat5& m, const Vec5& v) {
  Vec5 r{};
  for (int i = 0; i < 5; ++i) {
    double s = 0;
    for (int j = 0; j < 5; ++j) s += m[i][j] * v[j];
    r[i] = s;
  }
  return r;
}

inline Mat5 mat5_mul(const Mat5& a, const Mat5& b) {
  Mat5 r{};
  for (int i = 0; i < 5; ++i)
    for (int k = 0; k < 5; ++k) {
      double aik = a[i][k];
      if (aik == 0.0) continue;
      for (int j = 0; j < 5; ++j) r[i][j] += aik * b[k][j];
    }
  return r;
}

inline double vec5_norm(const Vec5& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double vec5_dot(const Vec5& a, const Vec5& b) {
  double s = 0;
  for (int i = 0; i < 5; ++i) s += a[i] * b[i];
  return s;
}

// Gaussian elimination with partial pivoting; Jac5 determinants are
// bounded away from zero, so no singular handling beyond the assert-style
// return of NaNs.
inline Mat5 mat5_inverse(const Mat5& m) {
  std::array<std::array<double, 10>, 5> w{};
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) w[i][j] = m[i][j];
    w[i][5 + i] = 1.0;
  }
  for (int col = 0; col < 5; ++col) {
    int piv = col;
    for (int r = col + 1; r < 5; ++r)
      if (std::fabs(w[r][col]) > std::fabs(w[piv][col])) piv = r;
    std::swap(w[piv], w[col]);
    double p = w[col][col];
    for (int j = 0; j < 10; ++j) w[col][j] /= p;
    for (int r = 0; r < 5; ++r) {
      if (r == col) continue;
      double f = w[r][col];
      if (f == 0.0) continue;
      for (int j = 0; j < 10; ++j) w[r][j] -= f * w[col][j];
    }
  }
  Mat5 inv{};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) inv[i][j] = w[i][5 + j];
  return inv;
}

inline double mat5_det(const Mat5& m) {
  Mat5 w = m;
  double det = 1.0;
  for (int col = 0; col < 5; ++col) {
    int piv = col;
    for (int r = col + 1; r < 5; ++r)
      if (std::fabs(w[r][col]) > std::fabs(w[piv][col])) piv = r;
    if (piv != col) {
      std::swap(w[piv], w[col]);
      det = -det;
    }
    det *= w[col][col];
    if (w[col][col] == 0.0) return 0.0;
    for (int r = col + 1; r < 5; ++r) {
      double f = w[r][col] / w[col][col];
      for (int j = col; j < 5; ++j) w[r][j] -= f * w[col][j];
    }
  }
  return det;
}

// max |entry|
inline double mat5_max_abs(const Mat5& m) {
  double mx = 0;
  for (auto& row : m)
    for (double x : row) mx = std::max(mx, std::fabs(x));
  return mx;
}

inline double mat5_frobenius(const Mat5& m) {
  double s = 0;
  for (auto& row : m)
    for (double x : row) s += x * x;
  return std::sqrt(s);
}

}  // namespace kanlab

#endif  // KANLAB_LINALG_HPP
