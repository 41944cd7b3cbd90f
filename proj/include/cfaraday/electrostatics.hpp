#pragma once

#include <vector>

#include "cfaraday/lagrangians.hpp"

namespace cfaraday {

// Born-Infeld point charge in natural units (div D = rho), radial problem.
// With B = 0 the invariant density gives D = dL/dE = E / sqrt(1 - E^2/k^2),
// inverted as E = D / sqrt(1 + D^2/k^2).

/// D(E) = E / sqrt(1 - E^2/k^2) for |E| < k.
double bi_displacement(double e, BIParameter k);
/// E(D) = D / sqrt(1 + D^2/k^2).
double bi_field(double d, BIParameter k);
/// k - |E(D)| = k / (s (s + |D|/k)) with s = sqrt(1 + D^2/k^2); stays
/// positive after E itself has rounded to k.
double bi_saturation_gap(double d, BIParameter k);
/// D E - L_BI(E) = k^2 (sqrt(1 + D^2/k^2) - 1), written as D^2 / (1 + s).
double bi_energy_density(double d, BIParameter k);

/// r0 = sqrt(|q| / (4 pi k)), where |D| = k. Falls back to 1 when q = 0.
double bi_radius(double q, BIParameter k);

struct ChargeProfile {
  double q = 1.0;
  BIParameter k{1.0};
  std::vector<double> r_samples;

  /// Throws InvalidArgument unless r_samples is strictly increasing and
  /// positive.
  void validate() const;
};

struct ProfilePoint {
  double r = 0.0;
  double d = 0.0;
  double e = 0.0;
  double saturation_gap = 0.0;  // k - |E|
  double u_bi = 0.0;
  double u_maxwell = 0.0;
};

/// Requires q != 0.
std::vector<ProfilePoint> bi_pointcharge_profile(const ChargeProfile& c);

struct EnergyPoint {
  double r_min = 0.0;
  double u_bi = 0.0;
  double u_maxwell = 0.0;
  double u_maxwell_exact = 0.0;  // (q^2 / 8 pi) (1/r_min - 1/r_max)
  double error_bi = 0.0;         // quadrature error estimates
  double error_maxwell = 0.0;
};

struct EnergyStudy {
  EnergyPoint at_r_min;        // the requested interval
  std::vector<EnergyPoint> series;  // r_min = 10^-1 .. 10^-5 r0, same r_max
  double maxwell_slope = 0.0;  // d log U_Maxwell / d log r_min over the series
  /// |U_BI(r_min_i) - U_BI(r_min_{i-1})| for consecutive entries.
  std::vector<double> bi_differences;
  bool bi_converged = false;   // differences shrink and the last is <= 1e-3 U_BI
  double r0 = 0.0;
};

struct EnergyOptions {
  double tolerance = 1e-12;  // relative, per integral
  std::vector<double> series_factors{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
};

/// U = integral of u(r) 4 pi r^2 dr on [r_min, r_max] by adaptive
/// Gauss-Kronrod in log r. Throws QuadratureToleranceNotMet when the error
/// estimate exceeds the tolerance, InvalidArgument unless 0 < r_min < r_max.
EnergyStudy bi_electrostatic_energy(const ChargeProfile& c, double r_min, double r_max,
                                    const EnergyOptions& options = {});

}  // namespace cfaraday
