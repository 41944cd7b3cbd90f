#include <cmath>
#include <complex>

#include "cfaraday/complex_variational.hpp"
#include "cfaraday/error.hpp"
#include "doctest.h"

using namespace cfaraday;
using Cd = std::complex<double>;

namespace {

ComplexVector point(Cd z) { return ComplexVector{z}; }

HolomorphicFn without_derivative(HolomorphicFn f) {
  f.derivative = nullptr;
  return f;
}

bool throws_code(ErrorCode code, auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST_CASE("holomorphic_derivative") {
  const auto z2 = builtin_function("z2");
  const auto d = holomorphic_derivative(z2, point({3, 4}));
  CHECK(std::abs(d[0] - Cd(6, 8)) <= 1e-9);

  // Against the analytic derivative wherever it is provided.
  for (const auto& name : {"z2", "cubic", "exp_minus_z"}) {
    const auto f = builtin_function(name);
    for (const Cd z : {Cd(0.3, -0.2), Cd(-1.5, 2.0), Cd(4.0, 1.0)}) {
      const auto numeric = holomorphic_derivative(f, point(z));
      const auto exact = f.derivative(point(z));
      CHECK(std::abs(numeric[0] - exact[0]) <= 1e-8 * std::max(1.0, std::abs(exact[0])));
    }
  }

  const auto s = builtin_function("sum_squares");
  const ComplexVector z{Cd(1, 2), Cd(-3, 0.5)};
  const auto ds = holomorphic_derivative(s, z);
  CHECK(std::abs(ds[0] - 2.0 * z[0]) <= 1e-9);
  CHECK(std::abs(ds[1] - 2.0 * z[1]) <= 1e-9);

  // A jump between h/2 and h makes the two step sizes disagree.
  HolomorphicFn jump{"jump", 1, [](ComplexSpan w) { return Cd(w[0].real() > 4e-6 ? 1.0 : 0.0, 0.0); }, {}};
  CHECK(throws_code(ErrorCode::NumericallyUnstable, [&] { holomorphic_derivative(jump, point({0, 0})); }));
}

TEST_CASE("cauchy_riemann_check") {
  CHECK(cauchy_riemann_check(builtin_function("z2"), point({1, 1})) <= 1e-8);
  CHECK(cauchy_riemann_check(builtin_function("exp_minus_z"), point({0.5, -2})) <= 1e-8);
  // conj: P = x, Q = -y, so |P_x - Q_y| = 2.
  CHECK(std::abs(cauchy_riemann_check(builtin_function("conj"), point({0.7, 0.2})) - 2.0) <= 1e-8);
  CHECK(cauchy_riemann_check(builtin_function("abs2"), point({1, 0})) > 1.0);
}

TEST_CASE("find_stationary") {
  SUBCASE("z^2 from 1+i") {
    const auto r = find_stationary(builtin_function("z2"), point({1, 1}));
    CHECK(std::abs(r.z0[0]) <= 1e-10);
    CHECK(r.derivative_norm <= 1e-10);
    CHECK(r.saddle_verified);
    CHECK(r.minimax_gap <= r.saddle.allowance);
  }
  SUBCASE("(z - (2-3i))^2") {
    const Cd c(2, -3);
    const auto r = find_stationary(builtin_function("shifted_z2", c), point({0, 0}));
    CHECK(std::abs(r.z0[0] - c) <= 1e-10);
    CHECK(r.saddle_verified);
  }
  SUBCASE("z^3 - 3z from 0.9 reaches 1") {
    const auto r = find_stationary(builtin_function("cubic"), point({0.9, 0}));
    CHECK(std::abs(r.z0[0] - 1.0) <= 1e-10);
    CHECK(r.saddle_verified);
  }
  SUBCASE("numerical derivative path") {
    const auto r = find_stationary(without_derivative(builtin_function("cubic")), point({-1.2, 0.3}));
    CHECK(std::abs(r.z0[0] + 1.0) <= 1e-9);
    const auto e = find_stationary(without_derivative(builtin_function("exp_minus_z")), point({0.4, 0.4}));
    CHECK(std::abs(e.z0[0]) <= 1e-9);
  }
  SUBCASE("two variables") {
    const ComplexVector start{Cd(0.5, 1), Cd(-1, 0.25)};
    StationaryOptions opt;
    opt.saddle_samples = 12;
    const auto r = find_stationary(builtin_function("sum_squares"), start, opt);
    CHECK(std::abs(r.z0[0]) <= 1e-10);
    CHECK(std::abs(r.z0[1]) <= 1e-10);
    CHECK(r.saddle_verified);
  }
  SUBCASE("non-analytic input is refused") {
    CHECK(throws_code(ErrorCode::NonAnalytic, [] { find_stationary(builtin_function("conj"), point({1, 1})); }));
    CHECK(throws_code(ErrorCode::NonAnalytic, [] { find_stationary(builtin_function("abs2"), point({1, 1})); }));
  }
  SUBCASE("iteration budget") {
    StationaryOptions opt;
    opt.max_iter = 1;
    CHECK(throws_code(ErrorCode::NoConvergence, [&] { find_stationary(builtin_function("exp_minus_z"), point({3, 3}), opt); }));
  }
}

TEST_CASE("verify_saddle") {
  SUBCASE("gap shrinks under refinement") {
    const auto f = builtin_function("cubic");
    double previous = INFINITY;
    for (const int m : {8, 16, 32}) {
      const auto rep = verify_saddle(f, point({1, 0}), 0.1, m);
      CHECK(rep.verified);
      CHECK(rep.gap <= previous);
      previous = rep.gap;
    }
    const auto z2 = builtin_function("z2");
    for (const int m : {8, 16, 32}) CHECK(verify_saddle(z2, point({0, 0}), 1.0, m).verified);
  }
  SUBCASE("a non-stationary point is rejected") {
    const auto rep = verify_saddle(builtin_function("z2"), point({1, 0}), 1.0, 33);
    CHECK_FALSE(rep.verified);
    CHECK(rep.gap > 0.5);
  }
  SUBCASE("argument validation") {
    const auto f = builtin_function("z2");
    CHECK_THROWS_AS(verify_saddle(f, point({0, 0}), 0.0, 16), Error);
    CHECK_THROWS_AS(verify_saddle(f, point({0, 0}), 1.0, 4), Error);
  }
  CHECK_THROWS_AS(builtin_function("nope"), Error);
}
