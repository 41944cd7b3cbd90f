#include "cfaraday/rs_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "cfaraday/error.hpp"

namespace cfaraday {

namespace {

using Cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Signed wavenumber index for FFT slot m.
int signed_mode(int m, int n) { return m <= n / 2 ? m : m - n; }
bool is_nyquist(int m, int n) { return n % 2 == 0 && m == n / 2; }

class Spectral {
 public:
  explicit Spectral(const GridSpec& grid) : grid_(grid), size_(grid.size()) {
    buffer_ = fftw_alloc_complex(size_);
    forward_ = fftw_plan_dft_3d(grid.nx, grid.ny, grid.nz, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_3d(grid.nx, grid.ny, grid.nz, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
    for (int axis = 0; axis < 3; ++axis) {
      const int n = grid.extent(axis);
      auto& k = wavenumber_[axis];
      k.resize(n);
      for (int m = 0; m < n; ++m) {
        k[m] = is_nyquist(m, n) ? 0.0 : kTwoPi * signed_mode(m, n) / (n * grid.spacing(axis));
      }
    }
  }
  ~Spectral() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(buffer_);
  }
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  std::vector<Cd> forward(const std::vector<Cd>& in) { return run(in, forward_, 1.0); }
  std::vector<Cd> backward(const std::vector<Cd>& in) { return run(in, backward_, 1.0 / static_cast<double>(size_)); }

  std::vector<RSVector> curl(const std::vector<RSVector>& f) {
    std::array<std::vector<Cd>, 3> hat;
    for (int c = 0; c < 3; ++c) hat[c] = forward(component(f, c));
    std::array<std::vector<Cd>, 3> out_hat;
    for (auto& v : out_hat) v.resize(size_);
    const Cd i(0.0, 1.0);
    for (std::size_t n = 0; n < size_; ++n) {
      const auto k = wave(n);
      out_hat[0][n] = i * (k[1] * hat[2][n] - k[2] * hat[1][n]);
      out_hat[1][n] = i * (k[2] * hat[0][n] - k[0] * hat[2][n]);
      out_hat[2][n] = i * (k[0] * hat[1][n] - k[1] * hat[0][n]);
    }
    std::vector<RSVector> out(size_);
    for (int c = 0; c < 3; ++c) {
      const auto v = backward(out_hat[c]);
      for (std::size_t n = 0; n < size_; ++n) out[n][c] = v[n];
    }
    return out;
  }

  std::vector<Cd> div(const std::vector<RSVector>& f) {
    std::vector<Cd> acc(size_);
    const Cd i(0.0, 1.0);
    for (int c = 0; c < 3; ++c) {
      const auto hat = forward(component(f, c));
      for (std::size_t n = 0; n < size_; ++n) acc[n] += i * wave(n)[c] * hat[n];
    }
    return backward(acc);
  }

  /// Values at x + offset * h by Fourier interpolation; Nyquist content dropped.
  std::vector<Cd> shift(const std::vector<Cd>& values, const Vec3R& offset) {
    auto hat = forward(values);
    for (std::size_t n = 0; n < size_; ++n) {
      const auto c = grid_.coords(n);
      double phase = 0.0;
      bool nyquist = false;
      for (int axis = 0; axis < 3; ++axis) {
        const int ne = grid_.extent(axis);
        nyquist = nyquist || is_nyquist(c[axis], ne);
        phase += kTwoPi * signed_mode(c[axis], ne) * offset[axis] / ne;
      }
      hat[n] = nyquist ? Cd(0.0, 0.0) : hat[n] * std::polar(1.0, phase);
    }
    return backward(hat);
  }

  static std::vector<Cd> component(const std::vector<RSVector>& f, int c) {
    std::vector<Cd> out(f.size());
    for (std::size_t n = 0; n < f.size(); ++n) out[n] = f[n][c];
    return out;
  }

 private:
  std::array<double, 3> wave(std::size_t n) const {
    const auto c = grid_.coords(n);
    return {wavenumber_[0][c[0]], wavenumber_[1][c[1]], wavenumber_[2][c[2]]};
  }

  std::vector<Cd> run(const std::vector<Cd>& in, fftw_plan plan, double scale) {
    for (std::size_t n = 0; n < size_; ++n) {
      buffer_[n][0] = in[n].real();
      buffer_[n][1] = in[n].imag();
    }
    fftw_execute(plan);
    std::vector<Cd> out(size_);
    for (std::size_t n = 0; n < size_; ++n) out[n] = Cd(buffer_[n][0], buffer_[n][1]) * scale;
    return out;
  }

  GridSpec grid_;
  std::size_t size_;
  fftw_complex* buffer_;
  fftw_plan forward_;
  fftw_plan backward_;
  std::array<std::vector<double>, 3> wavenumber_;
};

template <class T>
T centered(const GridSpec& g, const std::vector<Vec3<T>>& v, std::size_t n, int axis, int comp) {
  return (v[g.neighbor(n, axis, +1)][comp] - v[g.neighbor(n, axis, -1)][comp]) * (0.5 / g.spacing(axis));
}

std::vector<RSVector> fd_curl(const GridSpec& g, const std::vector<RSVector>& f) {
  std::vector<RSVector> out(f.size());
  for (std::size_t n = 0; n < f.size(); ++n) {
    out[n].x = centered(g, f, n, 1, 2) - centered(g, f, n, 2, 1);
    out[n].y = centered(g, f, n, 2, 0) - centered(g, f, n, 0, 2);
    out[n].z = centered(g, f, n, 0, 1) - centered(g, f, n, 1, 0);
  }
  return out;
}

std::vector<Cd> fd_div(const GridSpec& g, const std::vector<RSVector>& f) {
  std::vector<Cd> out(f.size());
  for (std::size_t n = 0; n < f.size(); ++n) {
    out[n] = centered(g, f, n, 0, 0) + centered(g, f, n, 1, 1) + centered(g, f, n, 2, 2);
  }
  return out;
}

Vec3R staggered_position(const GridSpec& g, std::size_t n, const Vec3R& offset) {
  const auto c = g.coords(n);
  return {(c[0] + offset.x) * g.dx, (c[1] + offset.y) * g.dy, (c[2] + offset.z) * g.dz};
}

void check_step(double dt, int steps, double limit) {
  if (!(dt > 0.0) || !std::isfinite(dt) || steps < 0) {
    throw Error(ErrorCode::InvalidArgument, "time step must be positive and the step count non-negative");
  }
  if (dt > limit * (1.0 + 1e-12)) {
    throw Error(ErrorCode::UnstableStep,
                "dt = " + std::to_string(dt) + " exceeds the stability limit " + std::to_string(limit));
  }
}

}  // namespace

void GridSpec::validate() const {
  for (int axis = 0; axis < 3; ++axis) {
    if (extent(axis) < 4) throw Error(ErrorCode::InvalidArgument, "grid extents must be at least 4");
    const double h = spacing(axis);
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidArgument, "grid spacings must be positive");
  }
}

std::size_t GridSpec::index(int ix, int iy, int iz) const {
  auto wrap = [](int i, int n) { return ((i % n) + n) % n; };
  return (static_cast<std::size_t>(wrap(ix, nx)) * ny + wrap(iy, ny)) * nz + wrap(iz, nz);
}

std::array<int, 3> GridSpec::coords(std::size_t node) const {
  const int iz = static_cast<int>(node % nz);
  node /= nz;
  const int iy = static_cast<int>(node % ny);
  return {static_cast<int>(node / ny), iy, iz};
}

std::size_t GridSpec::neighbor(std::size_t node, int axis, int delta) const {
  auto c = coords(node);
  c[axis] += delta;
  return index(c[0], c[1], c[2]);
}

Vec3R GridSpec::position(std::size_t node) const {
  const auto c = coords(node);
  return {c[0] * dx, c[1] * dy, c[2] * dz};
}

GridSpec GridSpec::cube(int n, double length) {
  const double h = length / n;
  return {n, n, n, h, h, h};
}

RSState RSState::zero(const GridSpec& grid) {
  grid.validate();
  return {grid, std::vector<RSVector>(grid.size()), 0.0};
}

RSState RSState::sample(const GridSpec& grid, const std::function<RSVector(const Vec3R&)>& fn, double t) {
  RSState s = zero(grid);
  s.t = t;
  for (std::size_t n = 0; n < s.f.size(); ++n) s.f[n] = fn(grid.position(n));
  return s;
}

double source_continuity_residual(const SourceField& s, const GridSpec& grid, double t) {
  if (!s) return 0.0;
  const double h_min = std::min({grid.dx, grid.dy, grid.dz});
  const double delta = 1e-4 * h_min;
  double residual = 0.0;
  double scale = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Vec3R x = grid.position(n);
    const double drho = (s.rho_at(t + delta, x) - s.rho_at(t - delta, x)) / (2.0 * delta);
    double divj = 0.0;
    for (std::size_t axis = 0; axis < 3; ++axis) {
      Vec3R xp = x;
      Vec3R xm = x;
      xp[axis] += delta;
      xm[axis] -= delta;
      divj += (s.j_at(t, xp)[axis] - s.j_at(t, xm)[axis]) / (2.0 * delta);
    }
    residual = std::max(residual, std::abs(drho + divj));
    scale = std::max({scale, std::abs(drho), std::abs(divj)});
  }
  return scale > 0.0 ? residual / scale : residual;
}

double rs_stable_dt(const GridSpec& grid, RSScheme scheme) {
  grid.validate();
  double sum = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    const int n = grid.extent(axis);
    const double h = grid.spacing(axis);
    if (scheme == RSScheme::Rk4Spectral) {
      const int m = n % 2 == 0 ? n / 2 - 1 : (n - 1) / 2;
      const double k = kTwoPi * m / (n * h);
      sum += k * k;
    } else {
      sum += 1.0 / (h * h);
    }
  }
  return 2.0 * std::numbers::sqrt2 / std::sqrt(sum);
}

double RSTrajectory::energy_drift() const {
  if (energy.empty()) return 0.0;
  double m = 0.0;
  for (const double e : energy) m = std::max(m, std::abs(e - energy.front()));
  return energy.front() > 0.0 ? m / energy.front() : m;
}

double RSTrajectory::gauss_drift(double scale) const {
  if (gauss.empty()) return 0.0;
  double m = 0.0;
  for (const double g : gauss) m = std::max(m, std::abs(g - gauss.front()));
  return scale > 0.0 ? m / scale : m;
}

double energy(const RSState& s) {
  double sum = 0.0;
  for (const auto& v : s.f) sum += std::norm(v.x) + std::norm(v.y) + std::norm(v.z);
  return 0.5 * sum * s.grid.cell_volume();
}

double gauss_residual(const RSState& s, const SourceField& sources, RSScheme scheme) {
  std::vector<Cd> div;
  if (scheme == RSScheme::Rk4Spectral) {
    Spectral sp(s.grid);
    div = sp.div(s.f);
  } else {
    div = fd_div(s.grid, s.f);
  }
  double m = 0.0;
  for (std::size_t n = 0; n < div.size(); ++n) {
    m = std::max(m, std::abs(div[n] - sources.rho_at(s.t, s.grid.position(n))));
  }
  return m;
}

RSTrajectory evolve_rs(const RSState& s0, const SourceField& sources, double dt, int steps, RSScheme scheme,
                       const RSOptions& options) {
  s0.grid.validate();
  if (s0.f.size() != s0.grid.size()) throw Error(ErrorCode::InvalidArgument, "state does not match its grid");
  for (const auto& v : s0.f) {
    if (!is_finite(v.x) || !is_finite(v.y) || !is_finite(v.z)) throw Error(ErrorCode::NonFinite, "non-finite field");
  }
  check_step(dt, steps, rs_stable_dt(s0.grid, scheme));

  const GridSpec& grid = s0.grid;
  const std::size_t size = grid.size();
  Spectral spectral(grid);
  const Cd i(0.0, 1.0);

  auto rhs = [&](double t, const std::vector<RSVector>& f) {
    std::vector<RSVector> out = scheme == RSScheme::Rk4Spectral ? spectral.curl(f) : fd_curl(grid, f);
    for (std::size_t n = 0; n < size; ++n) {
      out[n] = -i * out[n];
      if (sources) out[n] -= to_complex(sources.j_at(t, grid.position(n)));
    }
    return out;
  };
  auto gauss = [&](const RSState& s) {
    const auto div = scheme == RSScheme::Rk4Spectral ? spectral.div(s.f) : fd_div(grid, s.f);
    double m = 0.0;
    for (std::size_t n = 0; n < size; ++n) m = std::max(m, std::abs(div[n] - sources.rho_at(s.t, grid.position(n))));
    return m;
  };
  auto check_sources = [&](double t) {
    if (!sources) return;
    const double r = source_continuity_residual(sources, grid, t);
    if (r > options.continuity_tolerance) {
      throw Error(ErrorCode::NonconservedSources,
                  "continuity residual " + std::to_string(r) + " at t = " + std::to_string(t));
    }
  };
  auto axpy = [&](const std::vector<RSVector>& f, double h, const std::vector<RSVector>& k) {
    std::vector<RSVector> out(size);
    for (std::size_t n = 0; n < size; ++n) out[n] = f[n] + Cd(h, 0.0) * k[n];
    return out;
  };

  RSTrajectory traj;
  RSState state = s0;
  auto diagnose = [&] {
    traj.times.push_back(state.t);
    traj.energy.push_back(energy(state));
    traj.gauss.push_back(gauss(state));
  };
  traj.snapshots.push_back(state);
  diagnose();

  const int diag_stride = std::max(1, options.diagnostic_stride);
  for (int step = 1; step <= steps; ++step) {
    const double t = state.t;
    check_sources(t);
    const auto k1 = rhs(t, state.f);
    const auto k2 = rhs(t + 0.5 * dt, axpy(state.f, 0.5 * dt, k1));
    const auto k3 = rhs(t + 0.5 * dt, axpy(state.f, 0.5 * dt, k2));
    const auto k4 = rhs(t + dt, axpy(state.f, dt, k3));
    const Cd w(dt / 6.0, 0.0);
    for (std::size_t n = 0; n < size; ++n) {
      state.f[n] += w * (k1[n] + Cd(2.0, 0.0) * (k2[n] + k3[n]) + k4[n]);
    }
    state.t = s0.t + step * dt;
    if (step % diag_stride == 0 || step == steps) diagnose();
    if (options.record_stride > 0 && step % options.record_stride == 0 && step != steps) {
      traj.snapshots.push_back(state);
    }
  }
  if (steps > 0) traj.snapshots.push_back(state);
  traj.final_state = state;
  return traj;
}

Vec3R TwoFieldState::e_offset(int component) {
  Vec3R o;
  o[component] = 0.5;
  return o;
}

Vec3R TwoFieldState::b_offset(int component) {
  Vec3R o{0.5, 0.5, 0.5};
  o[component] = 0.0;
  return o;
}

TwoFieldState TwoFieldState::sample(const GridSpec& grid,
                                    const std::function<std::pair<Vec3R, Vec3R>(const Vec3R&)>& fn, double t) {
  grid.validate();
  TwoFieldState s{grid, std::vector<Vec3R>(grid.size()), std::vector<Vec3R>(grid.size()), t};
  for (std::size_t n = 0; n < grid.size(); ++n) {
    for (int c = 0; c < 3; ++c) {
      s.e[n][c] = fn(staggered_position(grid, n, e_offset(c))).first[c];
      s.b[n][c] = fn(staggered_position(grid, n, b_offset(c))).second[c];
    }
  }
  return s;
}

double two_field_stable_dt(const GridSpec& grid) {
  grid.validate();
  return 1.0 / std::sqrt(1.0 / (grid.dx * grid.dx) + 1.0 / (grid.dy * grid.dy) + 1.0 / (grid.dz * grid.dz));
}

TwoFieldTrajectory evolve_two_field(const TwoFieldState& s0, const SourceField& sources, double dt, int steps,
                                    int record_stride) {
  const GridSpec& g = s0.grid;
  g.validate();
  if (s0.e.size() != g.size() || s0.b.size() != g.size()) {
    throw Error(ErrorCode::InvalidArgument, "state does not match its grid");
  }
  check_step(dt, steps, two_field_stable_dt(g));
  const std::size_t size = g.size();

  // Forward differences: curl E lands on the B locations.
  auto curl_e = [&](const std::vector<Vec3R>& e) {
    std::vector<Vec3R> out(size);
    for (std::size_t n = 0; n < size; ++n) {
      const auto px = g.neighbor(n, 0, 1), py = g.neighbor(n, 1, 1), pz = g.neighbor(n, 2, 1);
      out[n].x = (e[py].z - e[n].z) / g.dy - (e[pz].y - e[n].y) / g.dz;
      out[n].y = (e[pz].x - e[n].x) / g.dz - (e[px].z - e[n].z) / g.dx;
      out[n].z = (e[px].y - e[n].y) / g.dx - (e[py].x - e[n].x) / g.dy;
    }
    return out;
  };
  // Backward differences: curl B lands on the E locations.
  auto curl_b = [&](const std::vector<Vec3R>& b) {
    std::vector<Vec3R> out(size);
    for (std::size_t n = 0; n < size; ++n) {
      const auto mx = g.neighbor(n, 0, -1), my = g.neighbor(n, 1, -1), mz = g.neighbor(n, 2, -1);
      out[n].x = (b[n].z - b[my].z) / g.dy - (b[n].y - b[mz].y) / g.dz;
      out[n].y = (b[n].x - b[mz].x) / g.dz - (b[n].z - b[mx].z) / g.dx;
      out[n].z = (b[n].y - b[mx].y) / g.dx - (b[n].x - b[my].x) / g.dy;
    }
    return out;
  };

  TwoFieldTrajectory traj;
  TwoFieldState state = s0;
  traj.snapshots.push_back(state);
  for (int step = 1; step <= steps; ++step) {
    const double t_half = state.t + 0.5 * dt;
    auto c = curl_e(state.e);
    for (std::size_t n = 0; n < size; ++n) state.b[n] -= (0.5 * dt) * c[n];
    const auto cb = curl_b(state.b);
    for (std::size_t n = 0; n < size; ++n) {
      Vec3R rate = cb[n];
      if (sources) {
        for (int comp = 0; comp < 3; ++comp) {
          rate[comp] -= sources.j_at(t_half, staggered_position(g, n, TwoFieldState::e_offset(comp)))[comp];
        }
      }
      state.e[n] += dt * rate;
    }
    c = curl_e(state.e);
    for (std::size_t n = 0; n < size; ++n) state.b[n] -= (0.5 * dt) * c[n];
    state.t = s0.t + step * dt;
    if (record_stride > 0 && step % record_stride == 0 && step != steps) traj.snapshots.push_back(state);
  }
  if (steps > 0) traj.snapshots.push_back(state);
  traj.final_state = state;
  return traj;
}

double scheme_deviation(const RSState& rs, const TwoFieldState& two) {
  if (!(rs.grid == two.grid)) throw Error(ErrorCode::InvalidArgument, "scheme comparison needs identical grids");
  if (std::abs(rs.t - two.t) > 1e-9 * std::max(1.0, std::abs(rs.t))) {
    throw Error(ErrorCode::InvalidArgument, "scheme comparison needs identical times");
  }
  Spectral sp(rs.grid);
  double m = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto comp = Spectral::component(rs.f, c);
    std::vector<Cd> re(comp.size()), im(comp.size());
    for (std::size_t n = 0; n < comp.size(); ++n) {
      re[n] = comp[n].real();
      im[n] = comp[n].imag();
    }
    const auto e_at = sp.shift(re, TwoFieldState::e_offset(c));
    const auto b_at = sp.shift(im, TwoFieldState::b_offset(c));
    for (std::size_t n = 0; n < comp.size(); ++n) {
      m = std::max({m, std::abs(e_at[n].real() - two.e[n][c]), std::abs(b_at[n].real() - two.b[n][c])});
    }
  }
  return m;
}

double l2_distance(const RSState& a, const RSState& b) {
  if (a.f.size() != b.f.size()) throw Error(ErrorCode::InvalidArgument, "state sizes differ");
  double sum = 0.0;
  for (std::size_t n = 0; n < a.f.size(); ++n) {
    const RSVector d = a.f[n] - b.f[n];
    sum += std::norm(d.x) + std::norm(d.y) + std::norm(d.z);
  }
  return std::sqrt(sum * a.grid.cell_volume());
}

double max_norm(const RSState& s) {
  double m = 0.0;
  for (const auto& v : s.f) m = std::max({m, std::abs(v.x), std::abs(v.y), std::abs(v.z)});
  return m;
}

}  // namespace cfaraday
