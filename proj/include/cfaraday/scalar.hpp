#pragma once

#include <cmath>
#include <complex>
#include <ostream>
#include <string>

#include <gmpxx.h>

namespace cfaraday {

using Rational = mpq_class;

/// Exact complex number over the rationals. Only the field operations the
/// tensor algebra needs; there is no square root in this domain.
struct RationalComplex {
  Rational re;
  Rational im;

  RationalComplex() : re(0), im(0) {}
  RationalComplex(const Rational& r) : re(r), im(0) {}  // NOLINT(implicit)
  RationalComplex(const Rational& r, const Rational& i) : re(r), im(i) {}
  RationalComplex(long v) : re(v), im(0) {}  // NOLINT(implicit)

  RationalComplex& operator+=(const RationalComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  RationalComplex& operator-=(const RationalComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  RationalComplex& operator*=(const RationalComplex& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = r;
    im = i;
    return *this;
  }
  RationalComplex& operator/=(const RationalComplex& o) {
    Rational den = o.re * o.re + o.im * o.im;
    Rational r = (re * o.re + im * o.im) / den;
    Rational i = (im * o.re - re * o.im) / den;
    re = r;
    im = i;
    return *this;
  }

  friend RationalComplex operator+(RationalComplex a, const RationalComplex& b) { return a += b; }
  friend RationalComplex operator-(RationalComplex a, const RationalComplex& b) { return a -= b; }
  friend RationalComplex operator*(RationalComplex a, const RationalComplex& b) { return a *= b; }
  friend RationalComplex operator/(RationalComplex a, const RationalComplex& b) { return a /= b; }
  friend RationalComplex operator-(const RationalComplex& a) { return {Rational(-a.re), Rational(-a.im)}; }
  friend bool operator==(const RationalComplex& a, const RationalComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const RationalComplex& a, const RationalComplex& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const RationalComplex& z) {
    return os << "(" << z.re.get_str() << "," << z.im.get_str() << ")";
  }
};

enum class ScalarDomain { FloatComplex, ExactRationalComplex };

template <class R>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  using Real = double;
  using Complex = std::complex<double>;
  static constexpr ScalarDomain domain = ScalarDomain::FloatComplex;
  static constexpr bool exact = false;
};

template <>
struct ScalarTraits<Rational> {
  using Real = Rational;
  using Complex = RationalComplex;
  static constexpr ScalarDomain domain = ScalarDomain::ExactRationalComplex;
  static constexpr bool exact = true;
};

template <>
struct ScalarTraits<std::complex<double>> : ScalarTraits<double> {};

template <>
struct ScalarTraits<RationalComplex> : ScalarTraits<Rational> {};

template <class R>
using ComplexOf = typename ScalarTraits<R>::Complex;

template <class R>
using RealOf = typename ScalarTraits<R>::Real;

template <class S>
inline constexpr bool is_exact_v = ScalarTraits<S>::exact;

inline std::complex<double> make_complex(double re, double im) { return {re, im}; }
inline RationalComplex make_complex(const Rational& re, const Rational& im) { return {re, im}; }

inline double real_part(double v) { return v; }
inline double real_part(const std::complex<double>& v) { return v.real(); }
inline Rational real_part(const Rational& v) { return v; }
inline Rational real_part(const RationalComplex& v) { return v.re; }

inline double imag_part(double) { return 0.0; }
inline double imag_part(const std::complex<double>& v) { return v.imag(); }
inline Rational imag_part(const Rational&) { return Rational(0); }
inline Rational imag_part(const RationalComplex& v) { return v.im; }

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.get_d(); }
inline std::complex<double> to_complex_double(const std::complex<double>& v) { return v; }
inline std::complex<double> to_complex_double(double v) { return {v, 0.0}; }
inline std::complex<double> to_complex_double(const RationalComplex& v) {
  return {v.re.get_d(), v.im.get_d()};
}
inline std::complex<double> to_complex_double(const Rational& v) { return {v.get_d(), 0.0}; }

/// Magnitude as a double, for residual reporting in either domain.
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }
inline double magnitude(const Rational& v) { return std::abs(v.get_d()); }
inline double magnitude(const RationalComplex& v) { return std::abs(to_complex_double(v)); }

inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(const std::complex<double>& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}
inline bool is_finite(const Rational&) { return true; }
inline bool is_finite(const RationalComplex&) { return true; }

inline std::string to_text(double v) { return std::to_string(v); }
inline std::string to_text(const Rational& v) { return v.get_str(); }

}  // namespace cfaraday
