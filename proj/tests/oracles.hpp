#pragma once

// Test-only oracles, independent of the library's evaluation paths.

#include <algorithm>
#include <array>
#include <complex>
#include <random>

#include "cfaraday/scalar.hpp"
#include "cfaraday/tensor4.hpp"
#include "cfaraday/vec3.hpp"

namespace oracle {

/// Leibniz expansion over all 24 permutations.
template <class S>
S leibniz_det(const cfaraday::Tensor4<S>& a) {
  std::array<int, 4> perm{0, 1, 2, 3};
  S total(0);
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (perm[i] > perm[j]) ++inversions;
    S term(1);
    for (int i = 0; i < 4; ++i) term *= a(i, perm[i]);
    if (inversions % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline cfaraday::Rational random_rational(std::mt19937_64& rng, int max_num = 20, int max_den = 9) {
  std::uniform_int_distribution<int> num(-max_num, max_num);
  std::uniform_int_distribution<int> den(1, max_den);
  cfaraday::Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline cfaraday::Vec3<cfaraday::Rational> random_rational_vec(std::mt19937_64& rng, int max_num = 20, int max_den = 9) {
  return {random_rational(rng, max_num, max_den), random_rational(rng, max_num, max_den),
          random_rational(rng, max_num, max_den)};
}

inline cfaraday::Vec3R random_vec(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

/// Uniform in the ball of the given radius (rejection sampling).
inline cfaraday::Vec3R random_ball(std::mt19937_64& rng, double radius) {
  for (;;) {
    cfaraday::Vec3R v = random_vec(rng, radius);
    if (cfaraday::norm2(v) <= radius * radius) return v;
  }
}

/// Central difference of a scalar function of one variable with
/// Richardson extrapolation (fourth order).
template <class F>
auto richardson_derivative(F&& f, double x, double h) {
  auto d = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
  return (4.0 * d(h / 2) - d(h)) / 3.0;
}

}  // namespace oracle
