#pragma once

#include <complex>
#include <string_view>

#include "cfaraday/field_core.hpp"
#include "cfaraday/scalar.hpp"
#include "cfaraday/vec3.hpp"

namespace cfaraday {

struct FieldPoint {
  Vec3R e;
  Vec3R b;
};

struct SourcePoint {
  double rho = 0.0;
  Vec3R j;
  double phi = 0.0;
  Vec3R a;
};

/// Born-Infeld field-strength scale k > 0.
class BIParameter {
 public:
  explicit BIParameter(double k);
  double value() const noexcept { return k_; }

 private:
  double k_;
};

enum class LagrangianKind { Maxwell, BornInfeld, Complex, ComplexBornInfeld };

std::string_view to_string(LagrangianKind kind);
LagrangianKind parse_lagrangian_kind(std::string_view name);

/// Root selection for sqrt(-det(...)). ReductionConsistent follows the root
/// continuously from the zero-field value along the ray t -> t (E, B).
enum class Branch { Principal, ReductionConsistent };

struct LagrangianValue {
  std::complex<double> value;
  /// Set when the principal root and the continued root disagree, i.e. the
  /// determinant form only reproduces the closed form on the non-principal
  /// sheet (or the continuation passed too close to a branch point).
  bool branch_ambiguous = false;
};

/// -rho phi + j.A, the coupling shared by every density.
double source_coupling(const SourcePoint& s);

/// 1/2 (E^2 - B^2) - rho phi + j.A
LagrangianValue l_maxwell(const FieldPoint& p, const SourcePoint& s);
/// -1/4 F_{mu nu} F^{mu nu} - j_mu A^mu with j^mu = (rho, j), A^mu = (phi, A).
LagrangianValue l_maxwell_tensor(const FieldPoint& p, const SourcePoint& s);
/// +1/4 F*_{mu nu} F*^{mu nu} - j_mu A^mu
LagrangianValue l_maxwell_dual_tensor(const FieldPoint& p, const SourcePoint& s);

/// Invariant form -k^2 (sqrt(1 - (E^2-B^2)/k^2 - (E.B)^2/k^4) - 1), free part.
/// Throws NegativeRadicand outside the Born-Infeld bound.
LagrangianValue l_bi_invariant(const FieldPoint& p, BIParameter k);
/// Determinant form -k^2 (sqrt(-det(g + F/k)) - sqrt(-det g)), free part.
/// The prefactor is k^2, not k^2/2: only that normalisation reproduces the
/// invariant form and the weak-field Maxwell limit (see README).
LagrangianValue l_bi_det(const FieldPoint& p, BIParameter k);
/// Determinant form with the k^2/2 prefactor as printed; equals half of
/// l_bi_invariant. Kept to document the normalisation discrepancy.
LagrangianValue l_bi_det_literal(const FieldPoint& p, BIParameter k);

/// 1/2 F^2 - rho phi + j.A with F = E + iB.
LagrangianValue l_c(const FieldPoint& p, const SourcePoint& s);
/// Literal -1/4 F_{C mu nu} F_C^{mu nu}. Evaluates to F^2, twice the free part
/// of l_c, under the pinned convention.
std::complex<double> l_c_tensor_contraction(const FieldPoint& p);
/// 1/2 sqrt(-det F_C) - j_mu A^mu with the root sign-corrected to F^2.
LagrangianValue l_c_det(const FieldPoint& p, const SourcePoint& s);

/// -k^2/2 (sqrt(-det(g + F_C/k)) - 1), free part.
LagrangianValue l_bic_det(const FieldPoint& p, BIParameter k, Branch branch = Branch::ReductionConsistent);
/// 1/2 F^2; independent of k.
LagrangianValue l_bic_closed(const FieldPoint& p, BIParameter k);

struct ComparisonReport {
  double re_l_bic = 0.0;
  double l_bi = 0.0;
  double difference = 0.0;  // l_bi - Re(l_bic)
  /// ((E^2-B^2)^2/8 + (E.B)^2/2) / k^2, the leading term of the difference.
  double leading_order_estimate = 0.0;
  bool differs = false;
};

ComparisonReport compare_real_vs_complex_bi(const FieldPoint& p, BIParameter k);

/// Free-part density value and its partial derivatives with respect to the
/// real field components. d_e[i] = dL/dE_i, d_b[i] = dL/dB_i; both complex
/// for the complex densities.
struct LagrangianJet {
  std::complex<double> value;
  Vec3<std::complex<double>> d_e;
  Vec3<std::complex<double>> d_b;
  bool branch_ambiguous = false;
};

/// Maxwell and Complex use their closed forms; BornInfeld differentiates the
/// invariant form; ComplexBornInfeld differentiates the determinant form by
/// Jacobi's formula, never touching the 1/2 F^2 reduction.
LagrangianJet lagrangian_jet(LagrangianKind kind, const FieldPoint& p, BIParameter k);

/// Quadratic free parts, generic over the real domain for exact checks.
template <class R>
R maxwell_free(const Vec3<R>& e, const Vec3<R>& b) {
  return R((norm2(e) - norm2(b)) / R(2));
}

template <class R>
ComplexOf<R> complex_free(const Vec3<R>& e, const Vec3<R>& b) {
  // 1/2 F^2 = 1/2 (E^2 - B^2) + i E.B, assembled so the real part is
  // bit-identical to maxwell_free.
  return make_complex(maxwell_free(e, b), dot(e, b));
}

/// Cross-form equivalences of the densities at one point:
///   maxwell_tensor_forms      -1/4 F.F = +1/4 F*.F* = l_maxwell
///   bi_det_vs_invariant       determinant and invariant Born-Infeld forms
///   lc_sqrt_det_vs_canonical  1/2 sqrt(-det F_C) form = canonical l_c
///   bic_det_half_f2           l_bic_det (reduction branch) = 1/2 F^2
///   re_lc_maxwell             Re(l_c) = l_maxwell
/// and the annotated ratios lc_contraction_ratio (= 2) and
/// bi_det_literal_prefactor_ratio (= 1/2). In the rational domain square roots
/// are certified (candidate^2 equals the radicand exactly) rather than taken.
/// bi_det_vs_invariant is only evaluated inside the Born-Infeld bound.
template <class R>
IdentityReport verify_lagrangian_identities(const Vec3<R>& e, const Vec3<R>& b, const R& k,
                                            const R& rho, const R& phi, const Vec3<R>& j, const Vec3<R>& a,
                                            double tolerance = 1e-12);

}  // namespace cfaraday
