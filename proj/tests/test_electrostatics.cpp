#include <cfloat>
#include <cmath>
#include <numbers>
#include <vector>

#include "cfaraday/electrostatics.hpp"
#include "cfaraday/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cfaraday;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> log_radii(double lo, double hi, int n) {
  std::vector<double> r(n);
  for (int i = 0; i < n; ++i) r[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return r;
}

}  // namespace

TEST_CASE("constitutive law") {
  const BIParameter k(1.7);
  // D = dL/dE at B = 0, against a finite difference of the invariant density.
  for (const double e : {-1.5, -0.9, 0.01, 0.3, 1.2, 1.6}) {
    const double numeric = oracle::richardson_derivative(
        [&](double x) { return l_bi_invariant(FieldPoint{{x, 0, 0}, {}}, k).value.real(); }, e, 1e-3);
    CHECK(std::abs(bi_displacement(e, k) - numeric) <= 1e-8 * std::abs(numeric));
  }
  // Round trip on the range where the inverse is well conditioned (D/k <= 10).
  for (const double ratio : log_radii(1e-3, 10.0, 60)) {
    for (const double sign : {1.0, -1.0}) {
      const double d = sign * ratio * k.value();
      CHECK(std::abs(bi_displacement(bi_field(d, k), k) - d) <= 1e-12 * std::abs(d));
    }
  }
  // u = D E - L_BI(E)
  for (const double d : {0.01, 0.5, 3.0, 40.0}) {
    const double e = bi_field(d, k);
    const double lbi = l_bi_invariant(FieldPoint{{e, 0, 0}, {}}, k).value.real();
    CHECK(bi_energy_density(d, k) == doctest::Approx(d * e - lbi).epsilon(1e-10));
  }
  CHECK_THROWS_AS(bi_displacement(1.7, k), Error);
}

TEST_CASE("point-charge profile") {
  const BIParameter k(1.0);
  const double q = 1.0;
  const double r0 = bi_radius(q, k);
  CHECK(r0 == doctest::Approx(std::sqrt(1.0 / (4 * kPi))));

  ChargeProfile c{q, k, log_radii(1e-6 * r0, 1e4 * r0, 400)};
  const auto prof = bi_pointcharge_profile(c);
  REQUIRE(prof.size() == 400);
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const auto& p = prof[i];
    CHECK(p.d == doctest::Approx(q / (4 * kPi * p.r * p.r)));
    CHECK(std::abs(p.e) <= k.value());
    CHECK(p.saturation_gap > 0.0);
    // k - E cancels, so the agreement is only absolute, at the eps k level.
    CHECK(std::abs(p.saturation_gap - (k.value() - p.e)) <= 4 * DBL_EPSILON * k.value());
    if (i > 0) {
      CHECK(p.e <= prof[i - 1].e);
      CHECK(p.saturation_gap > prof[i - 1].saturation_gap);
    }
    CHECK(p.u_maxwell == doctest::Approx(0.5 * p.d * p.d));
    CHECK(p.u_bi <= p.u_maxwell);
    const double x = p.d / k.value();
    // The quotient E/D is itself rounded, hence the 4 eps floor.
    if (x < 0.1) CHECK(std::abs(p.e / p.d - 1.0) <= 0.5 * x * x * 1.1 + 4 * DBL_EPSILON);
    // E -> k (1 - (k/D)^2 / 2 + ...)
    if (x > 1e3) CHECK(std::abs(p.saturation_gap * 2 * x * x / k.value() - 1.0) <= 1.0 / (x * x) + 4 * DBL_EPSILON);
  }
  // Far field at D/k = 1e-3.
  const double r_far = std::sqrt(q / (4 * kPi * 1e-3));
  const auto far = bi_pointcharge_profile(ChargeProfile{q, k, {r_far}});
  CHECK(std::abs(far[0].e / far[0].d - 1.0) <= 1e-6);

  // Negative charge: mirrored field, same magnitudes.
  const auto neg = bi_pointcharge_profile(ChargeProfile{-q, k, {0.1, 1.0}});
  CHECK(neg[0].e < 0.0);
  CHECK(std::abs(neg[0].e) < k.value());

  CHECK_THROWS_AS(bi_pointcharge_profile(ChargeProfile{0.0, k, {1.0}}), Error);
  CHECK_THROWS_AS(bi_pointcharge_profile(ChargeProfile{q, k, {1.0, 1.0}}), Error);
  CHECK_THROWS_AS(bi_pointcharge_profile(ChargeProfile{q, k, {-1.0}}), Error);
}

TEST_CASE("electrostatic energy") {
  const BIParameter k(1.0);
  ChargeProfile c{1.0, k, {}};
  const double r0 = bi_radius(1.0, k);
  const double r_max = 100 * r0;
  const auto study = bi_electrostatic_energy(c, 1e-5 * r0, r_max);

  REQUIRE(study.series.size() == 5);
  for (const auto& pt : study.series) {
    CHECK(std::abs(pt.u_maxwell - pt.u_maxwell_exact) <= 1e-10 * pt.u_maxwell_exact);
    CHECK(pt.u_bi < pt.u_maxwell);
  }
  CHECK(study.maxwell_slope == doctest::Approx(-1.0).epsilon(0.05));
  CHECK(study.bi_converged);
  for (std::size_t i = 1; i < study.bi_differences.size(); ++i) {
    CHECK(study.bi_differences[i] <= 0.2 * study.bi_differences[i - 1]);
  }
  const double last = study.series.back().u_bi;
  CHECK(study.bi_differences.back() <= 1e-3 * last);
  CHECK(study.at_r_min.u_bi == doctest::Approx(last));

  // Near the origin the BI density tends to k |D|, so the missing piece of
  // the integral below r_min is about k |q| r_min.
  const auto& s4 = study.series[3];
  const auto& s5 = study.series[4];
  CHECK((s5.u_bi - s4.u_bi) == doctest::Approx(k.value() * (s4.r_min - s5.r_min)).epsilon(0.05));

  // Zero charge.
  const auto zero = bi_electrostatic_energy(ChargeProfile{0.0, k, {}}, 0.1, 1.0);
  CHECK(zero.at_r_min.u_bi == 0.0);
  CHECK(zero.at_r_min.u_maxwell == 0.0);
  CHECK(zero.bi_converged);

  CHECK_THROWS_AS(bi_electrostatic_energy(c, 1.0, 1.0), Error);
  CHECK_THROWS_AS(bi_electrostatic_energy(c, 0.0, 1.0), Error);
  CHECK_THROWS_AS(bi_electrostatic_energy(c, 2.0, 1.0), Error);
}
