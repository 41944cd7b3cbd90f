#include "cfaraday/field_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cfaraday/error.hpp"

namespace cfaraday {

namespace {

template <class R>
void require_finite(const Vec3<R>& v, const char* what) {
  if constexpr (!is_exact_v<R>) {
    if (!all_finite(v)) throw Error(ErrorCode::NonFinite, std::string(what) + " has non-finite components");
  }
}

template <class R>
double scale_of(const Vec3<R>& e, const Vec3<R>& b) {
  return to_double(R(norm2(e) + norm2(b)));
}

template <class S>
IdentityCheck compare(std::string name, const S& expected, const S& actual, double scale, double tolerance) {
  IdentityCheck check;
  check.name = std::move(name);
  check.expected = to_complex_double(expected);
  check.actual = to_complex_double(actual);
  if constexpr (is_exact_v<S>) {
    check.pass = (expected == actual);
    check.residual = check.pass ? 0.0 : magnitude(S(actual - expected));
  } else {
    const double diff = std::abs(check.actual - check.expected);
    check.residual = diff == 0.0 ? 0.0 : diff / std::max(scale, std::numeric_limits<double>::min());
    check.pass = check.residual <= tolerance;
  }
  return check;
}

}  // namespace

template <class R>
Tensor4<R> build_faraday(const Vec3<R>& e, const Vec3<R>& b) {
  require_finite(e, "E");
  require_finite(b, "B");
  Tensor4<R> t;
  for (int i = 0; i < 3; ++i) {
    t(0, i + 1) = R(-e[i]);
    t(i + 1, 0) = e[i];
  }
  t(1, 2) = R(-b.z);
  t(2, 1) = b.z;
  t(1, 3) = b.y;
  t(3, 1) = R(-b.y);
  t(2, 3) = R(-b.x);
  t(3, 2) = b.x;
  return t;
}

template <class R>
Vec3<R> electric_part(const Tensor4<R>& t) {
  return {R(-t(0, 1)), R(-t(0, 2)), R(-t(0, 3))};
}

template <class R>
Vec3<R> magnetic_part(const Tensor4<R>& t) {
  return {R(-t(2, 3)), t(1, 3), R(-t(1, 2))};
}

template <class R>
Tensor4<R> hodge_dual(const Tensor4<R>& t) {
  if (!t.is_antisymmetric()) {
    throw Error(ErrorCode::NotAntisymmetric, "hodge_dual requires an antisymmetric tensor");
  }
  const Vec3<R> e = electric_part(t);
  const Vec3<R> b = magnetic_part(t);
  return build_faraday(b, Vec3<R>(-e));
}

template <class R>
Vec3<ComplexOf<R>> rs_vector(const Vec3<R>& e, const Vec3<R>& b) {
  require_finite(e, "E");
  require_finite(b, "B");
  return {make_complex(e.x, b.x), make_complex(e.y, b.y), make_complex(e.z, b.z)};
}

template <class R>
Tensor4<ComplexOf<R>> build_complex_faraday(const Vec3<R>& e, const Vec3<R>& b) {
  using C = ComplexOf<R>;
  const Vec3<C> f = rs_vector(e, b);
  const C i = make_complex(R(0), R(1));
  Tensor4<C> t;
  for (int n = 0; n < 3; ++n) {
    t(0, n + 1) = C(-f[n]);
    t(n + 1, 0) = f[n];
  }
  t(1, 2) = C(i * f.z);
  t(2, 1) = C(-t(1, 2));
  t(1, 3) = C(-(i * f.y));
  t(3, 1) = C(-t(1, 3));
  t(2, 3) = C(i * f.x);
  t(3, 2) = C(-t(2, 3));
  return t;
}

template <class R>
InvariantPair<R> lorentz_invariants(const Vec3<R>& e, const Vec3<R>& b) {
  require_finite(e, "E");
  require_finite(b, "B");
  return {R(norm2(e) - norm2(b)), dot(e, b)};
}

std::complex<double> branch_corrected_sqrt(std::complex<double> value, std::complex<double> reference) {
  const std::complex<double> root = std::sqrt(value);
  return std::abs(root - reference) <= std::abs(root + reference) ? root : -root;
}

bool IdentityReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.pass; });
}

const IdentityCheck* IdentityReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

template <class R>
IdentityReport verify_det_identities(const Vec3<R>& e, const Vec3<R>& b, const R& k,
                                     const IdentityOptions& options) {
  using C = ComplexOf<R>;
  if (!(k > 0)) throw Error(ErrorCode::InvalidArgument, "k must be positive");

  const double tol = options.tolerance;
  const double s = scale_of(e, b);
  const double quartic = s * s;
  const double kd = to_double(k);
  const double metric_scale = (1.0 + s / (kd * kd)) * (1.0 + s / (kd * kd));

  const Tensor4<R> f = build_faraday(e, b);
  const Tensor4<R> fd = hodge_dual(f);
  Tensor4<C> fc = build_complex_faraday(e, b);
  if (options.inject_dual_sign_fault) {
    fc = complexify(f) - complexify(fd) * make_complex(R(0), R(1));
  }

  const C f2 = rs_square(rs_vector(e, b));
  const R eb = dot(e, b);
  const R eb2 = R(eb * eb);

  IdentityReport report;
  report.domain = ScalarTraits<R>::domain;
  report.checks.push_back(compare("det_faraday", eb2, det4(f), quartic, tol));
  report.checks.push_back(compare("det_dual", eb2, det4(fd), quartic, tol));

  const C det_fc = det4(fc);
  report.checks.push_back(compare("det_complex_faraday", C(-(f2 * f2)), det_fc, quartic, tol));

  if constexpr (is_exact_v<R>) {
    // No square root over Q: certify F^2 as a root of -det F_C.
    const C minus_det = C(-det_fc);
    IdentityCheck check = compare("sqrt_minus_det_complex", C(f2 * f2), minus_det, quartic, tol);
    check.expected = to_complex_double(f2);
    check.actual = check.pass ? check.expected : std::sqrt(to_complex_double(minus_det));
    report.checks.push_back(check);
  } else {
    const std::complex<double> root = branch_corrected_sqrt(-det_fc, f2);
    report.checks.push_back(compare("sqrt_minus_det_complex", f2, root, s, tol));
  }

  Tensor4<C> m = Tensor4<C>::metric();
  m += fc * C(R(R(1) / k));
  const C w = C(C(1) - f2 / C(R(k * k)));
  report.checks.push_back(compare("det_metric_plus", C(-(w * w)), det4(m), metric_scale, tol));

  report.checks.push_back(compare("pfaffian_faraday", eb, pfaffian4(f), s, tol));
  report.checks.push_back(
      compare("pfaffian_complex_faraday", C(-(make_complex(R(0), R(1)) * f2)), pfaffian4(fc), s, tol));
  return report;
}

#define CFARADAY_INSTANTIATE(R)                                                                  \
  template Tensor4<R> build_faraday<R>(const Vec3<R>&, const Vec3<R>&);                          \
  template Vec3<R> electric_part<R>(const Tensor4<R>&);                                          \
  template Vec3<R> magnetic_part<R>(const Tensor4<R>&);                                          \
  template Tensor4<R> hodge_dual<R>(const Tensor4<R>&);                                          \
  template Tensor4<ComplexOf<R>> build_complex_faraday<R>(const Vec3<R>&, const Vec3<R>&);       \
  template Vec3<ComplexOf<R>> rs_vector<R>(const Vec3<R>&, const Vec3<R>&);                      \
  template InvariantPair<R> lorentz_invariants<R>(const Vec3<R>&, const Vec3<R>&);               \
  template IdentityReport verify_det_identities<R>(const Vec3<R>&, const Vec3<R>&, const R&,     \
                                                   const IdentityOptions&);

CFARADAY_INSTANTIATE(double)
CFARADAY_INSTANTIATE(Rational)

#undef CFARADAY_INSTANTIATE

}  // namespace cfaraday
