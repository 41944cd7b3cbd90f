#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace cfaraday {

using ComplexVector = std::vector<std::complex<double>>;
using ComplexSpan = std::span<const std::complex<double>>;

/// f: C^n -> C, f(x + iy) = P(x, y) + i Q(x, y). Analyticity is checked by
/// cauchy_riemann_check, never assumed.
struct HolomorphicFn {
  std::string name;
  std::size_t dimension = 1;
  std::function<std::complex<double>(ComplexSpan)> value;
  /// Optional analytic gradient df/dz_j.
  std::function<ComplexVector(ComplexSpan)> derivative;

  std::complex<double> operator()(ComplexSpan z) const { return value(z); }
};

struct DerivativeOptions {
  /// Richardson cross-check: |D(h) - D(h/2)| <= tolerance * max(1, |D|).
  double tolerance = 1e-6;
};

/// df/dz_j by central differences along the real direction with step
/// h = max(1, |z_j|) * eps^(1/3), Richardson-extrapolated from h and h/2.
/// Throws NumericallyUnstable when the two estimates disagree.
ComplexVector holomorphic_derivative(const HolomorphicFn& f, ComplexSpan z, const DerivativeOptions& options = {});

/// max_j |dP/dx_j - dQ/dy_j| + |dP/dy_j + dQ/dx_j|, by central differences.
double cauchy_riemann_check(const HolomorphicFn& f, ComplexSpan z);

struct MinimaxReport {
  double p0 = 0.0;       // P(z0)
  double min_max = 0.0;  // min_x max_y P over the sampled box
  double max_min = 0.0;  // max_y min_x P over the sampled box
  double gap = 0.0;      // max(|min_max - p0|, |max_min - p0|)
  double scale = 0.0;    // max |P - p0| over the box
  double allowance = 0.0;
  bool verified = false;
  double radius = 0.0;
  int samples = 0;
};

/// Sampled min-max surrogate for the saddle definition of a complex minimum:
/// a box of half-width `radius` around z0 with `samples` points per real
/// axis (not necessarily hitting z0). Verified iff both deviations are within
/// (tolerance + (2/(samples-1))^2) * scale; the second term is the grid
/// resolution allowance for a quadratic saddle.
MinimaxReport verify_saddle(const HolomorphicFn& f, ComplexSpan z0, double radius, int samples,
                            double tolerance = 1e-9);

struct StationaryOptions {
  int max_iter = 100;
  double derivative_tolerance = 1e-10;
  double cr_tolerance = 1e-6;  // relative to max(1, |f|)
  double saddle_radius = 1.0;
  int saddle_samples = 33;
};

struct SaddleResult {
  ComplexVector z0;
  double derivative_norm = 0.0;
  bool saddle_verified = false;
  double minimax_gap = 0.0;
  int iterations = 0;
  MinimaxReport saddle;
};

/// Damped Newton on f'(z) = 0 with a finite-difference Jacobian, followed by
/// verify_saddle at the converged point. Throws NoConvergence after max_iter
/// and NonAnalytic when an iterate fails the Cauchy-Riemann check.
SaddleResult find_stationary(const HolomorphicFn& f, ComplexSpan z_start, const StationaryOptions& options = {});

/// Built-in analytic (and two non-analytic) test functions, by name:
/// z2, shifted_z2 (center c), cubic (z^3 - 3z), exp_minus_z (e^z - z),
/// sum_squares (z1^2 + z2^2), conj, abs2.
HolomorphicFn builtin_function(const std::string& name, std::complex<double> center = {0.0, 0.0});
std::vector<std::string> builtin_function_names();

}  // namespace cfaraday
