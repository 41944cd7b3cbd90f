#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "cfaraday/error.hpp"
#include "cfaraday/lattice_action.hpp"
#include "doctest.h"

using namespace cfaraday;
using Cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

LatticeSpec cube(int n, double h = 1.0) { return {n, n, n, n, h, h, h, h}; }

PotentialLattice random_potentials(const LatticeSpec& spec, double amplitude, std::uint64_t seed) {
  PotentialInit init;
  init.kind = "random";
  init.amplitude = amplitude;
  init.seed = seed;
  return make_potentials(spec, init);
}

PotentialLattice smooth(const LatticeSpec& spec, double amplitude, std::uint64_t seed) {
  PotentialInit init;
  init.kind = "smooth_random";
  init.amplitude = amplitude;
  init.seed = seed;
  return make_potentials(spec, init);
}

/// Independent finite-difference oracle: one degree of freedom at a time,
/// Richardson-extrapolated central differences of the selected action part.
PotentialGradient fd_oracle(const PotentialLattice& p, const SourceLattice& s, LagrangianKind kind, BIParameter k,
                            ActionPart part) {
  PotentialLattice work = p;
  PotentialGradient g{p.spec, std::vector<double>(p.spec.size()), std::vector<Vec3R>(p.spec.size())};
  auto pick = [&](Cd v) { return part == ActionPart::Real ? v.real() : v.imag(); };
  auto probe = [&](double& slot) {
    const double saved = slot;
    auto d = [&](double h) {
      slot = saved + h;
      const double plus = pick(action(work, s, kind, k));
      slot = saved - h;
      const double minus = pick(action(work, s, kind, k));
      slot = saved;
      return (plus - minus) / (2.0 * h);
    };
    const double h = 1e-3;
    return (4.0 * d(h / 2) - d(h)) / 3.0;
  };
  for (std::size_t n = 0; n < p.spec.size(); ++n) {
    g.phi[n] = probe(work.phi[n]);
    for (std::size_t c = 0; c < 3; ++c) g.a[n][c] = probe(work.a[n][c]);
  }
  return g;
}

}  // namespace

TEST_CASE("LatticeSpec") {
  const LatticeSpec spec{4, 5, 6, 7, 0.5, 1, 1, 1};
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.size() == 4u * 5 * 6 * 7);
  CHECK(spec.index(-1, 5, 0, 0) == spec.index(3, 0, 0, 0));
  for (std::size_t n = 0; n < spec.size(); n += 37) {
    const auto c = spec.coords(n);
    CHECK(spec.index(c[0], c[1], c[2], c[3]) == n);
    CHECK(spec.neighbor(spec.neighbor(n, 2, 1), 2, -1) == n);
  }
  CHECK_THROWS_AS((LatticeSpec{3, 4, 4, 4, 1, 1, 1, 1}.validate()), Error);
  CHECK_THROWS_AS((LatticeSpec{4, 4, 4, 4, 1, 0, 1, 1}.validate()), Error);
}

TEST_CASE("fields_from_potentials") {
  SUBCASE("constant potentials give zero fields") {
    PotentialInit init;
    init.kind = "constant";
    init.scalar = 2.5;
    init.vector = {1, -2, 3};
    const auto f = fields_from_potentials(make_potentials(cube(4), init));
    CHECK(f.scale() == 0.0);
  }
  SUBCASE("A = (a t, 0, 0) gives E = (-a, 0, 0) on interior slices") {
    const LatticeSpec spec{6, 4, 4, 4, 0.25, 1, 1, 1};
    PotentialInit init;
    init.kind = "linear_in_t";
    init.vector = {0.75, 0, 0};
    const auto f = fields_from_potentials(make_potentials(spec, init));
    for (std::size_t n = 0; n < spec.size(); ++n) {
      const int it = spec.coords(n)[0];
      if (it == 0 || it == spec.nt - 1) continue;
      CHECK(std::abs(f.e[n].x + 0.75) <= 1e-14);
      CHECK(f.e[n].y == 0.0);
      CHECK(max_abs(f.b[n]) == 0.0);
    }
  }
  SUBCASE("A = (0, sin(2 pi x / L), 0): B_z converges at second order") {
    std::vector<double> errors;
    for (const int nx : {8, 16, 32}) {
      const double length = 1.0;
      const LatticeSpec spec{4, nx, 4, 4, 1, length / nx, 1, 1};
      PotentialInit init;
      init.kind = "sine_curl";
      const auto f = fields_from_potentials(make_potentials(spec, init));
      double err = 0.0;
      for (std::size_t n = 0; n < spec.size(); ++n) {
        const double x = spec.coords(n)[1] * spec.dx;
        err = std::max(err, std::abs(f.b[n].z - 2 * kPi * std::cos(2 * kPi * x)));
        CHECK(f.b[n].x == 0.0);
        CHECK(f.b[n].y == 0.0);
      }
      errors.push_back(err);
    }
    CHECK(std::log2(errors[0] / errors[1]) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(std::log2(errors[1] / errors[2]) == doctest::Approx(2.0).epsilon(0.05));
  }
  SUBCASE("complex view") {
    const auto f = fields_from_potentials(random_potentials(cube(4), 1.0, 3));
    const auto rs = f.rs();
    for (std::size_t n = 0; n < rs.size(); ++n) CHECK((rs[n] == rs_vector(f.e[n], f.b[n])));
    const auto back = FieldLattice::from_rs(f.spec, rs);
    CHECK(back.e == f.e);
    CHECK(back.b == f.b);
  }
}

TEST_CASE("homogeneous identities hold at roundoff") {
  const auto zero = homogeneous_identity_check(fields_from_potentials(PotentialLattice::zero(cube(4))));
  CHECK(zero.div_b == 0.0);
  CHECK(zero.faraday == 0.0);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const LatticeSpec spec{5, 6, 4, 7, 0.3, 0.7, 1.1, 0.9};
    const auto r = homogeneous_identity_check(fields_from_potentials(random_potentials(spec, 3.0, seed)));
    CHECK(r.field_scale > 1.0);
    CHECK(r.div_b <= 1e-12 * r.field_scale);
    CHECK(r.faraday <= 1e-12 * r.field_scale);
  }
  // Refinement does not turn the identities into truncation errors.
  for (const int n : {4, 8, 12}) {
    const auto r = homogeneous_identity_check(fields_from_potentials(smooth(cube(n, 2.0 / n), 1.0, 9)));
    CHECK(r.div_b <= 1e-12 * r.field_scale);
    CHECK(r.faraday <= 1e-12 * r.field_scale);
  }
}

TEST_CASE("gauge probe leaves fields and actions unchanged") {
  const auto spec = cube(4);
  const auto p = random_potentials(spec, 0.2, 21);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> chi(spec.size());
  for (auto& c : chi) c = u(rng);
  const auto q = apply_gauge(p, chi);
  const auto f = fields_from_potentials(p);
  const auto g = fields_from_potentials(q);
  for (std::size_t n = 0; n < spec.size(); ++n) {
    CHECK(max_abs(f.e[n] - g.e[n]) <= 1e-14);
    CHECK(max_abs(f.b[n] - g.b[n]) <= 1e-14);
  }
  const auto s = SourceLattice::zero(spec);
  const BIParameter k(3.0);
  for (auto kind : {LagrangianKind::Maxwell, LagrangianKind::BornInfeld, LagrangianKind::Complex,
                    LagrangianKind::ComplexBornInfeld}) {
    CHECK(std::abs(action(p, s, kind, k) - action(q, s, kind, k)) <= 1e-12);
  }
}

TEST_CASE("action") {
  const auto spec = cube(4);
  const BIParameter k(2.0);
  const auto zero_p = PotentialLattice::zero(spec);
  const auto zero_s = SourceLattice::zero(spec);
  for (auto kind : {LagrangianKind::Maxwell, LagrangianKind::BornInfeld, LagrangianKind::Complex,
                    LagrangianKind::ComplexBornInfeld}) {
    CHECK(action(zero_p, zero_s, kind, k) == Cd(0, 0));
  }

  SourceInit si;
  si.kind = "random_conserved";
  si.seed = 8;
  const auto s = make_sources(spec, si);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto p = random_potentials(spec, 0.3, seed);
    const Cd sm = action(p, s, LagrangianKind::Maxwell, k);
    CHECK(sm.imag() == 0.0);
    CHECK(action(p, s, LagrangianKind::Complex, k).real() == sm.real());
    CHECK(action(p, s, LagrangianKind::BornInfeld, k).imag() == 0.0);

    const Cd sc = action(p, zero_s, LagrangianKind::Complex, k);
    for (const double kk : {0.5, 2.0, 50.0}) {
      const Cd sbic = action(p, zero_s, LagrangianKind::ComplexBornInfeld, BIParameter(kk));
      CHECK(std::abs(sbic - sc) <= 1e-12 * std::max(1.0, std::abs(sc)));
    }
  }

  const auto strong = random_potentials(spec, 5.0, 2);
  CHECK_THROWS_AS(action(strong, zero_s, LagrangianKind::BornInfeld, BIParameter(0.1)), Error);
  CHECK_THROWS_AS(action(zero_p, SourceLattice::zero(cube(5)), LagrangianKind::Maxwell, k), Error);
}

TEST_CASE("action_gradient matches finite differences") {
  const auto spec = cube(4);
  const BIParameter k(10.0);
  SourceInit si;
  si.kind = "random_conserved";
  si.amplitude = 0.1;
  const auto s = make_sources(spec, si);

  const auto zero = action_gradient(PotentialLattice::zero(spec), SourceLattice::zero(spec), LagrangianKind::Maxwell,
                                    k, ActionPart::Real);
  CHECK(zero.max_abs() == 0.0);

  const auto p = random_potentials(spec, 0.1, 77);
  for (auto kind : {LagrangianKind::Maxwell, LagrangianKind::BornInfeld, LagrangianKind::Complex,
                    LagrangianKind::ComplexBornInfeld}) {
    for (auto part : {ActionPart::Real, ActionPart::Imag}) {
      CAPTURE(to_string(kind));
      const auto g = action_gradient(p, s, kind, k, part);
      const auto fd = fd_oracle(p, s, kind, k, part);
      if (kind == LagrangianKind::Maxwell || kind == LagrangianKind::BornInfeld) {
        if (part == ActionPart::Imag) {
          CHECK(g.max_abs() == 0.0);
          continue;
        }
      }
      const double scale = std::max(g.max_abs(), 1e-300);
      if (part == ActionPart::Imag) {
        // The imaginary gradient is a roundoff-level quantity here.
        CHECK(g.max_abs_diff(fd) <= 1e-9);
      } else {
        CHECK(g.max_abs_diff(fd) / scale <= 1e-6);
      }
    }
  }
  // The library's own finite-difference helper agrees with the oracle.
  const auto lib_fd = finite_difference_gradient(p, s, LagrangianKind::BornInfeld, k, ActionPart::Real);
  const auto g = action_gradient(p, s, LagrangianKind::BornInfeld, k, ActionPart::Real);
  CHECK(lib_fd.max_abs_diff(g) / g.max_abs() <= 1e-6);
}

TEST_CASE("Maxwell gradient at a discrete plane wave converges at second order") {
  std::vector<double> norms;
  for (const int nx : {8, 16, 32}) {
    const double dx = 2 * kPi / nx;
    const LatticeSpec spec{2 * nx, nx, 4, 4, dx / 2, dx, 1, 1};
    PotentialInit init;
    init.kind = "plane_wave";
    init.amplitude = 0.5;
    const auto p = make_potentials(spec, init);
    const auto g = action_gradient(p, SourceLattice::zero(spec), LagrangianKind::Maxwell, BIParameter(1),
                                   ActionPart::Real);
    norms.push_back(g.max_abs() / spec.cell_volume());
  }
  CHECK(norms[0] > norms[1]);
  CHECK(std::log2(norms[0] / norms[1]) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::log2(norms[1] / norms[2]) == doctest::Approx(2.0).epsilon(0.05));

  PotentialInit bad;
  bad.kind = "plane_wave";
  CHECK_THROWS_AS(make_potentials(LatticeSpec{5, 8, 4, 4, 1, 1, 1, 1}, bad), Error);
}

TEST_CASE("maxwell_residual") {
  SUBCASE("vacuum zero field") {
    const auto spec = cube(4);
    const auto r = maxwell_residual(fields_from_potentials(PotentialLattice::zero(spec)), SourceLattice::zero(spec));
    CHECK(r.max_r1() == 0.0);
    CHECK(r.max_r2() == 0.0);
  }
  SUBCASE("sampled plane wave F = (0, cos(x-t), i cos(x-t))") {
    std::vector<double> res;
    for (const int nx : {8, 16, 32}) {
      const double dx = 2 * kPi / nx;
      const LatticeSpec spec{2 * nx, nx, 4, 4, dx / 2, dx, 1, 1};
      std::vector<RSVector> f(spec.size());
      for (std::size_t n = 0; n < f.size(); ++n) {
        const auto c = spec.coords(n);
        const double v = std::cos(c[1] * spec.dx - c[0] * spec.dt);
        f[n] = {Cd(0, 0), Cd(v, 0), Cd(0, v)};
      }
      const auto r = maxwell_residual(FieldLattice::from_rs(spec, f), SourceLattice::zero(spec));
      CHECK(r.max_r1() <= 1e-14);
      res.push_back(r.max_r2());
    }
    CHECK(std::log2(res[0] / res[1]) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(std::log2(res[1] / res[2]) == doctest::Approx(2.0).epsilon(0.05));
  }
  SUBCASE("point charge with discrete Coulomb field") {
    const LatticeSpec spec{4, 8, 8, 8, 1, 0.5, 0.5, 0.5};
    SourceInit si;
    si.kind = "point_charge";
    si.amplitude = 1.0;
    const auto s = make_sources(spec, si);
    const auto gauss = solve_discrete_gauss(spec, s.rho);
    // Already projected: a second projection changes nothing.
    for (std::size_t n = 0; n < spec.size(); ++n) CHECK(std::abs(gauss.rho[n] - s.rho[n]) <= 1e-12);
    PotentialLattice p = PotentialLattice::zero(spec);
    p.phi = gauss.phi;
    const auto f = fields_from_potentials(p);
    CHECK(f.scale() > 0.1);
    const auto r = maxwell_residual(f, s);
    CHECK(r.max_r1() <= 1e-12);
    CHECK(r.max_r2() <= 1e-12);
    CHECK(continuity_residual(spec, s) == 0.0);
  }
  SUBCASE("residual is the Maxwell gradient up to the volume factor") {
    const auto spec = cube(4);
    SourceInit si;
    si.kind = "random_conserved";
    const auto s = make_sources(spec, si);
    const auto p = random_potentials(spec, 1.0, 5);
    const auto r = maxwell_residual(fields_from_potentials(p), s);
    const auto g = action_gradient(p, s, LagrangianKind::Maxwell, BIParameter(1), ActionPart::Real);
    for (std::size_t n = 0; n < spec.size(); ++n) {
      CHECK(std::abs(r.r1[n].real() - g.phi[n]) <= 1e-12);
      // curl B - dE/dt - j = -(grad_A)
      const Vec3R im = imag_part(r.r2[n]);
      CHECK(max_abs(im + g.a[n]) <= 1e-12);
    }
  }
}

TEST_CASE("sources") {
  const LatticeSpec spec{4, 5, 4, 6, 0.5, 1, 1, 1};
  SourceInit si;
  si.kind = "random_conserved";
  si.amplitude = 2.0;
  const auto s = make_sources(spec, si);
  CHECK(continuity_residual(spec, s) <= 1e-13);
  si.kind = "nope";
  CHECK_THROWS_AS(make_sources(spec, si), Error);
  PotentialInit pi;
  pi.kind = "nope";
  CHECK_THROWS_AS(make_potentials(spec, pi), Error);

  // Identical seeds give identical lattices.
  CHECK(random_potentials(spec, 1, 4).a == random_potentials(spec, 1, 4).a);
  CHECK_FALSE(random_potentials(spec, 1, 4).a == random_potentials(spec, 1, 5).a);
}

TEST_CASE("stationarity_equivalence_report") {
  const auto spec = cube(4);
  const BIParameter k(1.0);
  SourceInit si;
  si.kind = "random_conserved";
  si.amplitude = 0.1;
  const auto s = make_sources(spec, si);

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto p = smooth(spec, 0.3, seed);
    StationarityOptions opt;
    opt.refine = [seed](int n) { return smooth(cube(n, 4.0 / n), 0.3, seed); };
    const auto r = stationarity_equivalence_report(p, s, k, opt);
    CHECK(r.re_complex_vs_maxwell == 0.0);
    CHECK(r.bic_vs_complex_rel <= 1e-12);
    CHECK(r.bic_vs_complex <= 1e-12);
    REQUIRE(r.sweep.size() == 4);
    CHECK(r.sweep_slope == doctest::Approx(3.0).epsilon(0.2 / 3.0));
    for (const auto& pt : r.sweep) CHECK(pt.difference > 0.0);
    REQUIRE(r.imag_trend.size() == 3);
    for (const auto& pt : r.imag_trend) CHECK(pt.imag_gradient <= 1e-12);
  }

  // Strong complex fields: the reduction-consistent branch still tracks 1/2 F^2.
  const auto strong = random_potentials(spec, 2.0, 4);
  StationarityOptions no_sweep;
  no_sweep.amplitude_factors.clear();
  const auto r = stationarity_equivalence_report(strong, s, BIParameter(0.5), no_sweep);
  CHECK(r.bic_vs_complex_rel <= 1e-12);
}

TEST_CASE("loglog_slope") {
  CHECK(loglog_slope({1, 2, 4}, {1, 8, 64}) == doctest::Approx(3.0));
  CHECK_THROWS_AS(loglog_slope({1}, {1}), Error);
}
