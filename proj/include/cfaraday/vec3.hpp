#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>

#include "cfaraday/scalar.hpp"

namespace cfaraday {

/// Cartesian 3-vector over an arbitrary scalar ring. The dot product is the
/// bilinear (unconjugated) one, which is what F.F means for F = E + iB.
template <class T>
struct Vec3 {
  T x{};
  T y{};
  T z{};

  T& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }
  const T& operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  friend Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend Vec3 operator-(const Vec3& a) { return {T(-a.x), T(-a.y), T(-a.z)}; }
  friend Vec3 operator*(const T& s, const Vec3& a) { return {T(s * a.x), T(s * a.y), T(s * a.z)}; }
  friend Vec3 operator*(const Vec3& a, const T& s) { return s * a; }
  friend bool operator==(const Vec3& a, const Vec3& b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
};

using Vec3R = Vec3<double>;
using RSVector = Vec3<std::complex<double>>;

template <class T>
T dot(const Vec3<T>& a, const Vec3<T>& b) {
  return T(a.x * b.x + a.y * b.y + a.z * b.z);
}

template <class T>
Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return {T(a.y * b.z - a.z * b.y), T(a.z * b.x - a.x * b.z), T(a.x * b.y - a.y * b.x)};
}

template <class T>
T norm2(const Vec3<T>& a) {
  return dot(a, a);
}

inline double max_abs(const Vec3R& v) {
  return std::max({std::abs(v.x), std::abs(v.y), std::abs(v.z)});
}

inline bool all_finite(const Vec3R& v) {
  return is_finite(v.x) && is_finite(v.y) && is_finite(v.z);
}

inline Vec3<std::complex<double>> to_complex(const Vec3R& v) {
  return {v.x, v.y, v.z};
}

inline Vec3R real_part(const RSVector& v) { return {v.x.real(), v.y.real(), v.z.real()}; }
inline Vec3R imag_part(const RSVector& v) { return {v.x.imag(), v.y.imag(), v.z.imag()}; }

inline Vec3<Rational> to_rational(const Vec3R& v) {
  return {Rational(v.x), Rational(v.y), Rational(v.z)};
}

}  // namespace cfaraday
