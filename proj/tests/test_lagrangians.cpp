#include <cmath>
#include <complex>
#include <random>

#include "cfaraday/error.hpp"
#include "cfaraday/lagrangians.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cfaraday;
using Cd = std::complex<double>;
using Q = Rational;

namespace {

FieldPoint fp(Vec3R e, Vec3R b) { return {e, b}; }

FieldPoint random_bounded_field(std::mt19937_64& rng, double k) {
  return {oracle::random_ball(rng, 0.6 * k), oracle::random_ball(rng, 0.6 * k)};
}

SourcePoint random_source(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), oracle::random_vec(rng), u(rng), oracle::random_vec(rng)};
}

}  // namespace

TEST_CASE("l_maxwell and its tensor forms") {
  CHECK(l_maxwell(fp({}, {}), {}).value == Cd(0, 0));
  CHECK(l_maxwell(fp({1, 0, 0}, {}), {}).value == Cd(0.5, 0));
  const SourcePoint s{1.0, {1, 0, 0}, 2.0, {3, 0, 0}};
  CHECK(l_maxwell(fp({}, {}), s).value == Cd(1, 0));

  CHECK(l_maxwell_tensor(fp({}, {}), {}).value == Cd(0, 0));
  CHECK(l_maxwell_tensor(fp({1, 0, 0}, {}), {}).value.real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(l_maxwell_dual_tensor(fp({1, 0, 0}, {}), {}).value.real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(l_maxwell_tensor(fp({}, {}), s).value.real() == doctest::Approx(1.0));

  std::mt19937_64 rng(101);
  for (int n = 0; n < 500; ++n) {
    const FieldPoint p{oracle::random_vec(rng, 2.0), oracle::random_vec(rng, 2.0)};
    const SourcePoint src = random_source(rng);
    const double ref = l_maxwell(p, src).value.real();
    const double scale = 1.0 + std::abs(ref);
    CHECK(std::abs(l_maxwell_tensor(p, src).value.real() - ref) <= 1e-12 * scale);
    CHECK(std::abs(l_maxwell_dual_tensor(p, src).value.real() - ref) <= 1e-12 * scale);
    CHECK(l_maxwell_tensor(p, src).value.imag() == 0.0);
  }
}

TEST_CASE("l_bi_invariant") {
  const BIParameter k(2.0);
  CHECK(l_bi_invariant(fp({}, {}), k).value == Cd(0, 0));
  CHECK(l_bi_invariant(fp({2.0, 0, 0}, {}), k).value.real() == doctest::Approx(4.0).epsilon(1e-15));
  CHECK_THROWS_AS(l_bi_invariant(fp({2.5, 0, 0}, {}), k), Error);
  try {
    l_bi_invariant(fp({3.0, 0, 0}, {}), k);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeRadicand);
  }
  CHECK_THROWS_AS(BIParameter(0.0), Error);
  CHECK_THROWS_AS(BIParameter(-1.0), Error);

  // Small-field limit: |L_BI - 1/2 (E^2 - B^2)| = O(k^-2); log-log slope -2.
  const FieldPoint p{{0.6, -0.3, 0.2}, {0.1, 0.5, -0.4}};
  const double x = norm2(p.e) - norm2(p.b);
  std::vector<double> lk;
  std::vector<double> lerr;
  for (double kv : {10.0, 100.0, 1000.0}) {
    const double err = std::abs(l_bi_invariant(p, BIParameter(kv)).value.real() - 0.5 * x);
    lk.push_back(std::log(kv));
    lerr.push_back(std::log(err));
    CHECK(err <= 1.0 / (kv * kv));
  }
  const double slope = (lerr[2] - lerr[0]) / (lk[2] - lk[0]);
  CHECK(slope == doctest::Approx(-2.0).epsilon(0.01));
}

TEST_CASE("l_bi_det equals l_bi_invariant") {
  CHECK(l_bi_det(fp({}, {}), BIParameter(1.0)).value == Cd(0, 0));
  CHECK(l_bi_det(fp({0, 1, 0}, {0, 0, 1}), BIParameter(1.0)).value.real() == doctest::Approx(0.0));
  CHECK(l_bi_invariant(fp({0, 1, 0}, {0, 0, 1}), BIParameter(1.0)).value.real() == 0.0);
  CHECK_THROWS_AS(l_bi_det(fp({3.0, 0, 0}, {}), BIParameter(2.0)), Error);

  std::mt19937_64 rng(103);
  for (double kv : {0.5, 1.0, 10.0}) {
    for (int n = 0; n < 2000; ++n) {
      const FieldPoint p = random_bounded_field(rng, kv);
      const double inv = l_bi_invariant(p, BIParameter(kv)).value.real();
      const double det = l_bi_det(p, BIParameter(kv)).value.real();
      CHECK(std::abs(inv - det) <= 1e-12 * (1.0 + std::abs(inv)));
      // The k^2/2 prefactor as printed gives exactly half.
      if (inv != 0.0) CHECK(l_bi_det_literal(p, BIParameter(kv)).value.real() / inv == doctest::Approx(0.5));
    }
  }
}

TEST_CASE("l_c, its contraction and determinant forms") {
  CHECK(l_c(fp({}, {}), {}).value == Cd(0, 0));
  CHECK(l_c(fp({1, 0, 0}, {1, 0, 0}), {}).value == Cd(0, 1));

  CHECK(l_c_tensor_contraction(fp({}, {})) == Cd(0, 0));
  CHECK(l_c_tensor_contraction(fp({1, 0, 0}, {})).real() == doctest::Approx(1.0));
  CHECK(l_c(fp({1, 0, 0}, {}), {}).value.real() == 0.5);

  CHECK(l_c_det(fp({}, {}), {}).value == Cd(0, 0));
  CHECK(std::abs(l_c_det(fp({1, 0, 0}, {}), {}).value - Cd(0.5, 0)) <= 1e-15);

  std::mt19937_64 rng(107);
  for (int n = 0; n < 2000; ++n) {
    const FieldPoint p{oracle::random_vec(rng, 2.0), oracle::random_vec(rng, 2.0)};
    const SourcePoint s = random_source(rng);
    const Cd lc = l_c(p, s).value;
    const double scale = 0.5 * (norm2(p.e) + norm2(p.b)) + 2.0;
    CHECK(lc.real() == l_maxwell(p, s).value.real());
    CHECK(std::abs(l_c_det(p, s).value - lc) <= 1e-12 * scale);
    const Cd f2 = rs_square(rs_vector(p.e, p.b));
    CHECK(std::abs(l_c_tensor_contraction(p) - f2) <= 1e-12 * scale);
  }
}

TEST_CASE("l_bic_det reduces to 1/2 F^2") {
  CHECK(l_bic_det(fp({}, {}), BIParameter(1.0)).value == Cd(0, 0));
  const auto v = l_bic_det(fp({1, 0, 0}, {}), BIParameter(2.0));
  CHECK(std::abs(v.value - Cd(0.5, 0)) <= 1e-15);
  CHECK_FALSE(v.branch_ambiguous);

  std::mt19937_64 rng(109);
  for (double kv : {0.5, 1.0, 10.0, 1000.0}) {
    for (int n = 0; n < 1000; ++n) {
      const FieldPoint p{oracle::random_vec(rng, 0.4 * kv), oracle::random_vec(rng, 0.4 * kv)};
      const auto closed = l_bic_closed(p, BIParameter(kv)).value;
      const auto det = l_bic_det(p, BIParameter(kv));
      const double scale = 0.5 * (norm2(p.e) + norm2(p.b));
      CHECK(std::abs(det.value - closed) <= 1e-12 * scale);
    }
  }

  // Beyond Re(1 - F^2/k^2) = 0 the principal root sits on the other sheet.
  const FieldPoint strong{{2.0, 0, 0}, {}};  // F^2 = 4, k = 1
  const auto reduced = l_bic_det(strong, BIParameter(1.0), Branch::ReductionConsistent);
  const auto principal = l_bic_det(strong, BIParameter(1.0), Branch::Principal);
  CHECK(reduced.branch_ambiguous);
  CHECK(std::abs(reduced.value - Cd(2.0, 0)) <= 1e-14);
  CHECK(std::abs(principal.value - Cd(-1.0, 0)) <= 1e-14);
}

TEST_CASE("l_bic_closed is independent of k") {
  CHECK(l_bic_closed(fp({}, {}), BIParameter(1.0)).value == Cd(0, 0));
  CHECK(l_bic_closed(fp({1, 0, 0}, {0, 1, 0}), BIParameter(1.0)).value == Cd(0, 0));
  const FieldPoint p{{0.3, -1.2, 0.7}, {2.0, 0.1, -0.5}};
  const Cd ref = l_bic_closed(p, BIParameter(0.5)).value;
  CHECK(l_bic_closed(p, BIParameter(1.0)).value == ref);
  CHECK(l_bic_closed(p, BIParameter(1e3)).value == ref);
}

TEST_CASE("compare_real_vs_complex_bi") {
  auto r = compare_real_vs_complex_bi(fp({}, {}), BIParameter(1.0));
  CHECK(r.l_bi == 0.0);
  CHECK(r.re_l_bic == 0.0);
  CHECK(r.difference == 0.0);
  CHECK_FALSE(r.differs);

  r = compare_real_vs_complex_bi(fp({1, 0, 0}, {1, 0, 0}), BIParameter(1.0));
  CHECK(r.l_bi == doctest::Approx(1.0));
  CHECK(r.re_l_bic == 0.0);
  CHECK(r.difference == doctest::Approx(1.0));
  CHECK(r.differs);

  // Leading-order estimate captures the difference as k grows.
  const FieldPoint p{{0.5, 0.2, -0.1}, {0.3, -0.4, 0.2}};
  double previous_gap = 1.0;
  for (double kv : {10.0, 100.0, 1000.0}) {
    const auto c = compare_real_vs_complex_bi(p, BIParameter(kv));
    const double gap = std::abs(c.difference / c.leading_order_estimate - 1.0);
    CHECK(gap < previous_gap);
    CHECK(gap <= 10.0 / (kv * kv));
    previous_gap = gap;
  }
}

TEST_CASE("lagrangian_jet derivatives match finite differences") {
  std::mt19937_64 rng(113);
  const BIParameter k(3.0);
  for (auto kind : {LagrangianKind::Maxwell, LagrangianKind::BornInfeld, LagrangianKind::Complex,
                    LagrangianKind::ComplexBornInfeld}) {
    CAPTURE(to_string(kind));
    for (int n = 0; n < 50; ++n) {
      const FieldPoint p{oracle::random_ball(rng, 1.2), oracle::random_ball(rng, 1.2)};
      const auto jet = lagrangian_jet(kind, p, k);
      CHECK(std::abs(jet.value - lagrangian_jet(kind, p, k).value) == 0.0);
      for (int i = 0; i < 3; ++i) {
        auto along_e = [&](double t) {
          FieldPoint q = p;
          q.e[i] = t;
          return lagrangian_jet(kind, q, k).value;
        };
        auto along_b = [&](double t) {
          FieldPoint q = p;
          q.b[i] = t;
          return lagrangian_jet(kind, q, k).value;
        };
        const Cd fd_e = oracle::richardson_derivative(along_e, p.e[i], 1e-3);
        const Cd fd_b = oracle::richardson_derivative(along_b, p.b[i], 1e-3);
        CHECK(std::abs(fd_e - jet.d_e[i]) <= 1e-8 * (1.0 + std::abs(jet.d_e[i])));
        CHECK(std::abs(fd_b - jet.d_b[i]) <= 1e-8 * (1.0 + std::abs(jet.d_b[i])));
      }
    }
  }
  CHECK(parse_lagrangian_kind("COMPLEX_BI") == LagrangianKind::ComplexBornInfeld);
  CHECK_THROWS_AS(parse_lagrangian_kind("nope"), Error);
}

TEST_CASE("verify_lagrangian_identities") {
  std::mt19937_64 rng(127);
  SUBCASE("exact in the rational domain") {
    for (int n = 0; n < 500; ++n) {
      const auto e = oracle::random_rational_vec(rng, 5, 7);
      const auto b = oracle::random_rational_vec(rng, 5, 7);
      const auto j = oracle::random_rational_vec(rng, 5, 7);
      const auto a = oracle::random_rational_vec(rng, 5, 7);
      const Q rho = oracle::random_rational(rng, 5, 7);
      const Q phi = oracle::random_rational(rng, 5, 7);
      Q k(std::uniform_int_distribution<int>(1, 20)(rng), 2);
      k.canonicalize();
      const auto r = verify_lagrangian_identities(e, b, k, rho, phi, j, a);
      REQUIRE(r.all_pass());
      for (const auto& c : r.checks)
        if (!c.informational) CHECK(c.residual == 0.0);
      const auto* ratio = r.find("lc_contraction_ratio");
      REQUIRE(ratio != nullptr);
      CHECK(ratio->informational);
      if (!std::isnan(ratio->actual.real())) CHECK(ratio->actual == Cd(2, 0));
    }
  }
  SUBCASE("float domain") {
    for (int n = 0; n < 500; ++n) {
      const double kv = 1.0;
      const FieldPoint p = random_bounded_field(rng, kv);
      const SourcePoint s = random_source(rng);
      const auto r = verify_lagrangian_identities(p.e, p.b, kv, s.rho, s.phi, s.j, s.a);
      CHECK(r.all_pass());
      REQUIRE(r.find("bi_det_literal_prefactor_ratio") != nullptr);
      CHECK(r.find("bi_det_literal_prefactor_ratio")->actual.real() == doctest::Approx(0.5));
    }
  }
}
