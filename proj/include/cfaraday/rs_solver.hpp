#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "cfaraday/vec3.hpp"

namespace cfaraday {

/// Periodic spatial grid; node (ix, iy, iz) sits at (ix dx, iy dy, iz dz).
struct GridSpec {
  int nx = 16;
  int ny = 16;
  int nz = 16;
  double dx = 1.0;
  double dy = 1.0;
  double dz = 1.0;

  void validate() const;
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny * nz; }
  int extent(int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }
  double spacing(int axis) const { return axis == 0 ? dx : (axis == 1 ? dy : dz); }
  double cell_volume() const { return dx * dy * dz; }
  std::size_t index(int ix, int iy, int iz) const;
  std::array<int, 3> coords(std::size_t node) const;
  std::size_t neighbor(std::size_t node, int axis, int delta) const;
  Vec3R position(std::size_t node) const;

  /// Cube of n^3 nodes spanning [0, length)^3.
  static GridSpec cube(int n, double length);
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct RSState {
  GridSpec grid;
  std::vector<RSVector> f;
  double t = 0.0;

  static RSState zero(const GridSpec& grid);
  static RSState sample(const GridSpec& grid, const std::function<RSVector(const Vec3R&)>& fn, double t = 0.0);
};

/// Closed-form charge and current densities. An empty source means vacuum.
struct SourceField {
  std::function<double(double, const Vec3R&)> rho;
  std::function<Vec3R(double, const Vec3R&)> j;

  explicit operator bool() const { return static_cast<bool>(rho) || static_cast<bool>(j); }
  double rho_at(double t, const Vec3R& x) const { return rho ? rho(t, x) : 0.0; }
  Vec3R j_at(double t, const Vec3R& x) const { return j ? j(t, x) : Vec3R{}; }
};

/// Relative residual of d rho/dt + div j at the grid nodes, by central
/// differences of the closed forms with a step well below the grid spacing.
double source_continuity_residual(const SourceField& s, const GridSpec& grid, double t);

enum class RSScheme { Rk4Spectral, Rk4Fd };

/// Largest stable dt for RK4 on dF/dt = -i curl F: the RK4 stability interval
/// on the imaginary axis is |lambda dt| <= 2 sqrt(2), and the curl's largest
/// eigenvalue is |k|max (spectral, Nyquist modes dropped) or
/// sqrt(sum 1/h^2) (centered differences).
double rs_stable_dt(const GridSpec& grid, RSScheme scheme);

struct RSOptions {
  /// Snapshot every `record_stride` steps (0: initial and final only).
  int record_stride = 0;
  /// Energy and Gauss residual every `diagnostic_stride` steps.
  int diagnostic_stride = 1;
  double continuity_tolerance = 1e-6;
};

struct RSTrajectory {
  std::vector<RSState> snapshots;
  std::vector<double> times;  // diagnostic times, parallel to energy and gauss
  std::vector<double> energy;
  std::vector<double> gauss;  // max |div F - rho|
  RSState final_state;

  /// max |energy(t) - energy(0)| / energy(0), or the absolute drift if
  /// energy(0) = 0.
  double energy_drift() const;
  /// max |gauss(t) - gauss(0)| / scale.
  double gauss_drift(double scale) const;
};

/// dF/dt = -i curl F - j by classical RK4. The curl is spectral (FFT, with the
/// Nyquist wavenumber removed) or second-order centered. Throws UnstableStep
/// when dt exceeds rs_stable_dt and NonconservedSources when the sources fail
/// the continuity check at any stage time.
RSTrajectory evolve_rs(const RSState& s0, const SourceField& sources, double dt, int steps, RSScheme scheme,
                       const RSOptions& options = {});

double energy(const RSState& s);
/// max |div F - rho(t)| with the scheme's divergence.
double gauss_residual(const RSState& s, const SourceField& sources, RSScheme scheme);

/// Yee-staggered (E, B): E_x lives at (i + 1/2, j, k), B_x at (i, j + 1/2, k + 1/2),
/// and cyclically for the other components. Both are stored at integer times.
struct TwoFieldState {
  GridSpec grid;
  std::vector<Vec3R> e;
  std::vector<Vec3R> b;
  double t = 0.0;

  static Vec3R e_offset(int component);
  static Vec3R b_offset(int component);
  static TwoFieldState sample(const GridSpec& grid, const std::function<std::pair<Vec3R, Vec3R>(const Vec3R&)>& fn,
                              double t = 0.0);
};

/// Leapfrog CFL limit 1 / sqrt(sum 1/h^2).
double two_field_stable_dt(const GridSpec& grid);

struct TwoFieldTrajectory {
  std::vector<TwoFieldState> snapshots;
  TwoFieldState final_state;
};

/// Synchronised leapfrog: half kick of B, full step of E, half kick of B.
/// Second order in space and time. Throws UnstableStep above the CFL limit.
TwoFieldTrajectory evolve_two_field(const TwoFieldState& s0, const SourceField& sources, double dt, int steps,
                                    int record_stride = 0);

/// max over components of |Re F - E| and |Im F - B|, with F moved to each
/// staggered location by exact Fourier interpolation.
double scheme_deviation(const RSState& rs, const TwoFieldState& two);

/// Discrete L2 norm sqrt(sum |a - b|^2 dV).
double l2_distance(const RSState& a, const RSState& b);
double max_norm(const RSState& s);

}  // namespace cfaraday
