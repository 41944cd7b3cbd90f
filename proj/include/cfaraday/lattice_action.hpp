#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cfaraday/lagrangians.hpp"
#include "cfaraday/vec3.hpp"

namespace cfaraday {

/// Periodic space-time lattice. Axis 0 is t, axes 1..3 are x, y, z.
/// Node (it, ix, iy, iz) sits at (it dt, ix dx, iy dy, iz dz).
struct LatticeSpec {
  int nt = 8;
  int nx = 8;
  int ny = 8;
  int nz = 8;
  double dt = 1.0;
  double dx = 1.0;
  double dy = 1.0;
  double dz = 1.0;

  /// Throws InvalidArgument unless every extent is >= 4 and every spacing
  /// is positive and finite.
  void validate() const;

  std::size_t size() const;
  int extent(int axis) const;
  double spacing(int axis) const;
  double length(int axis) const { return extent(axis) * spacing(axis); }
  double cell_volume() const { return dt * dx * dy * dz; }
  double courant() const { return dt / dx; }

  /// Coordinates are wrapped periodically.
  std::size_t index(int it, int ix, int iy, int iz) const;
  std::array<int, 4> coords(std::size_t node) const;
  std::size_t neighbor(std::size_t node, int axis, int delta) const;

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

struct PotentialLattice {
  LatticeSpec spec;
  std::vector<double> phi;
  std::vector<Vec3R> a;

  static PotentialLattice zero(const LatticeSpec& spec);
  /// Throws InvalidArgument on a shape mismatch and NonFinite on bad entries.
  void validate() const;
};

struct SourceLattice {
  std::vector<double> rho;
  std::vector<Vec3R> j;

  static SourceLattice zero(const LatticeSpec& spec);
};

struct FieldLattice {
  LatticeSpec spec;
  std::vector<Vec3R> e;
  std::vector<Vec3R> b;

  /// F = E + iB per node.
  std::vector<RSVector> rs() const;
  static FieldLattice from_rs(const LatticeSpec& spec, const std::vector<RSVector>& f);
  /// Largest |E_i| or |B_i| on the lattice.
  double scale() const;
};

// Centered differences on the periodic lattice, (f(n+1) - f(n-1)) / 2h.
// Their transpose is their negative, and all four commute.

template <class T>
std::vector<T> lattice_diff(const LatticeSpec& spec, const std::vector<T>& f, int axis) {
  std::vector<T> out(f.size());
  const double inv = 1.0 / (2.0 * spec.spacing(axis));
  for (std::size_t n = 0; n < f.size(); ++n) {
    out[n] = (f[spec.neighbor(n, axis, +1)] - f[spec.neighbor(n, axis, -1)]) * inv;
  }
  return out;
}

template <class T>
std::vector<T> lattice_div(const LatticeSpec& spec, const std::vector<Vec3<T>>& v) {
  std::vector<T> out(v.size());
  for (int axis = 1; axis <= 3; ++axis) {
    const double inv = 1.0 / (2.0 * spec.spacing(axis));
    for (std::size_t n = 0; n < v.size(); ++n) {
      out[n] += (v[spec.neighbor(n, axis, +1)][axis - 1] - v[spec.neighbor(n, axis, -1)][axis - 1]) * inv;
    }
  }
  return out;
}

template <class T>
std::vector<Vec3<T>> lattice_curl(const LatticeSpec& spec, const std::vector<Vec3<T>>& v) {
  std::vector<Vec3<T>> out(v.size());
  auto d = [&](std::size_t n, int axis, int comp) {
    return (v[spec.neighbor(n, axis, +1)][comp] - v[spec.neighbor(n, axis, -1)][comp]) *
           (1.0 / (2.0 * spec.spacing(axis)));
  };
  for (std::size_t n = 0; n < v.size(); ++n) {
    out[n].x = d(n, 2, 2) - d(n, 3, 1);
    out[n].y = d(n, 3, 0) - d(n, 1, 2);
    out[n].z = d(n, 1, 1) - d(n, 2, 0);
  }
  return out;
}

template <class T>
std::vector<Vec3<T>> lattice_grad(const LatticeSpec& spec, const std::vector<T>& f) {
  std::vector<Vec3<T>> out(f.size());
  for (int axis = 1; axis <= 3; ++axis) {
    const auto d = lattice_diff(spec, f, axis);
    for (std::size_t n = 0; n < f.size(); ++n) out[n][axis - 1] = d[n];
  }
  return out;
}

/// E = -grad phi - dA/dt, B = curl A.
FieldLattice fields_from_potentials(const PotentialLattice& p);

struct HomogeneousResidual {
  double div_b = 0.0;    // max |div B|
  double faraday = 0.0;  // max |curl E + dB/dt|
  double field_scale = 0.0;
};

HomogeneousResidual homogeneous_identity_check(const FieldLattice& f);

/// Riemann sum of the density over all nodes times dt dx dy dz. The
/// COMPLEX_BI density is the determinant form on the reduction-consistent
/// branch, not the 1/2 F^2 shortcut. Throws NegativeRadicand for BORN_INFELD
/// outside the bound.
std::complex<double> action(const PotentialLattice& p, const SourceLattice& s, LagrangianKind kind, BIParameter k);

enum class ActionPart { Real, Imag };

struct PotentialGradient {
  LatticeSpec spec;
  std::vector<double> phi;
  std::vector<Vec3R> a;

  double max_abs() const;
  /// max |this - other| over every degree of freedom.
  double max_abs_diff(const PotentialGradient& other) const;
};

/// Exact gradient of Re or Im of `action` with respect to every phi and A
/// entry, by the chain rule through the lattice operators:
///   d/dphi = V (div G_E - rho),  d/dA = V (D_t G_E + curl G_B + j)
/// where G_E = dL/dE and G_B = dL/dB at each node and V = dt dx dy dz.
PotentialGradient action_gradient(const PotentialLattice& p, const SourceLattice& s, LagrangianKind kind,
                                  BIParameter k, ActionPart part);

/// Central finite differences of `action` itself, one degree of freedom at a
/// time, step h relative to max(1, |value|). Costs 2 * 4 * nodes action
/// evaluations.
PotentialGradient finite_difference_gradient(const PotentialLattice& p, const SourceLattice& s, LagrangianKind kind,
                                             BIParameter k, ActionPart part, double h = 1e-5);

struct MaxwellResidual {
  std::vector<std::complex<double>> r1;  // div F - rho
  std::vector<RSVector> r2;              // curl F - i dF/dt - i j
  double max_r1() const;
  double max_r2() const;
};

MaxwellResidual maxwell_residual(const FieldLattice& f, const SourceLattice& s);

/// max |d rho/dt + div j|.
double continuity_residual(const LatticeSpec& spec, const SourceLattice& s);

/// (phi, A) -> (phi - d chi/dt, A + grad chi).
PotentialLattice apply_gauge(const PotentialLattice& p, const std::vector<double>& chi);

/// Solves the discrete Gauss law -div grad phi = rho on every time slice by
/// FFT. The part of rho in the null space of the centered Laplacian (the
/// mean and the per-axis Nyquist modes) has no solution on a periodic lattice
/// and is dropped; the returned `rho` is the projected, solvable charge.
struct GaussSolution {
  std::vector<double> phi;
  std::vector<double> rho;
};
GaussSolution solve_discrete_gauss(const LatticeSpec& spec, const std::vector<double>& rho);

// Closed-form initializers, selected by name.

struct PotentialInit {
  /// zero | constant | linear_in_t | sine_curl | plane_wave | random | smooth_random
  std::string kind = "zero";
  double amplitude = 1.0;
  Vec3R vector{1.0, 0.0, 0.0};  // constant: A; linear_in_t: dA/dt
  double scalar = 0.0;          // constant: phi
  int mode = 1;                 // sine_curl, plane_wave: wavenumber index along x
  int modes = 4;                // smooth_random: Fourier modes per component
  std::uint64_t seed = 1;
};

PotentialLattice make_potentials(const LatticeSpec& spec, const PotentialInit& init);

struct SourceInit {
  /// zero | random_conserved | point_charge
  std::string kind = "zero";
  double amplitude = 1.0;
  std::uint64_t seed = 1;
};

SourceLattice make_sources(const LatticeSpec& spec, const SourceInit& init);

struct AmplitudePoint {
  double amplitude = 0.0;  // max field component
  double difference = 0.0; // max |grad S_BI - grad S_Maxwell|
};

struct RefinementPoint {
  int n = 0;
  double imag_gradient = 0.0;  // max |grad Im S_C|
};

struct StationarityReport {
  // (a) max |grad Re S_C - grad S_Maxwell|, absolute and relative to max |grad S_Maxwell|
  double re_complex_vs_maxwell = 0.0;
  double re_complex_vs_maxwell_rel = 0.0;
  // (b) max |grad S_BIC - grad S_C| over both parts
  double bic_vs_complex = 0.0;
  double bic_vs_complex_rel = 0.0;
  std::size_t ambiguous_nodes = 0;
  // (c)
  std::vector<AmplitudePoint> sweep;
  double sweep_slope = 0.0;
  // (d)
  double imag_gradient = 0.0;
  std::vector<RefinementPoint> imag_trend;
};

struct StationarityOptions {
  /// Amplitudes in units of k for item (c).
  std::vector<double> amplitude_factors{0.01, 0.0215, 0.0464, 0.1};
  /// Builds the same smooth configuration at n^4 resolution for item (d);
  /// skipped when empty.
  std::function<PotentialLattice(int)> refine;
  std::vector<int> refine_levels{4, 8, 12};
};

StationarityReport stationarity_equivalence_report(const PotentialLattice& p, const SourceLattice& s, BIParameter k,
                                                   const StationarityOptions& options = {});

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cfaraday
