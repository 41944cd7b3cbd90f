#include "cfaraday/lattice_action.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fftw3.h>

#include "cfaraday/error.hpp"

namespace cfaraday {

namespace {

using Cd = std::complex<double>;

double unit_uniform(std::mt19937_64& rng) {
  // Fixed bit recipe, so streams are identical across standard libraries.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double symmetric_uniform(std::mt19937_64& rng, double amplitude) {
  return amplitude * (2.0 * unit_uniform(rng) - 1.0);
}

Vec3R part_of(const Vec3<Cd>& v, ActionPart part) {
  return part == ActionPart::Real ? real_part(v) : imag_part(v);
}

double part_of(Cd v, ActionPart part) { return part == ActionPart::Real ? v.real() : v.imag(); }

double relative(double diff, double ref) { return ref > 0.0 ? diff / ref : diff; }

void check_shape(const LatticeSpec& spec, const SourceLattice& s) {
  if (s.rho.size() != spec.size() || s.j.size() != spec.size()) {
    throw Error(ErrorCode::InvalidArgument, "source lattice does not match the potential lattice");
  }
}

FieldPoint field_at(const FieldLattice& f, std::size_t n) { return {f.e[n], f.b[n]}; }

SourcePoint source_at(const PotentialLattice& p, const SourceLattice& s, std::size_t n) {
  return {s.rho[n], s.j[n], p.phi[n], p.a[n]};
}

PotentialGradient gradient_impl(const PotentialLattice& p, const SourceLattice& s, LagrangianKind kind,
                                BIParameter k, ActionPart part, std::size_t* ambiguous) {
  p.validate();
  check_shape(p.spec, s);
  const auto& spec = p.spec;
  const FieldLattice f = fields_from_potentials(p);
  const std::size_t size = spec.size();

  std::vector<Vec3R> ge(size);
  std::vector<Vec3R> gb(size);
  std::size_t flagged = 0;
  for (std::size_t n = 0; n < size; ++n) {
    const LagrangianJet jet = lagrangian_jet(kind, field_at(f, n), k);
    ge[n] = part_of(jet.d_e, part);
    gb[n] = part_of(jet.d_b, part);
    if (jet.branch_ambiguous) ++flagged;
  }
  if (ambiguous != nullptr) *ambiguous = flagged;

  const double volume = spec.cell_volume();
  const auto div_ge = lattice_div(spec, ge);
  const auto dt_ge = lattice_diff(spec, ge, 0);
  const auto curl_gb = lattice_curl(spec, gb);

  PotentialGradient g{spec, std::vector<double>(size), std::vector<Vec3R>(size)};
  const bool with_sources = part == ActionPart::Real;
  for (std::size_t n = 0; n < size; ++n) {
    g.phi[n] = volume * (with_sources ? div_ge[n] - s.rho[n] : div_ge[n]);
    Vec3R ga = dt_ge[n] + curl_gb[n];
    if (with_sources) ga += s.j[n];
    g.a[n] = volume * ga;
  }
  return g;
}

}  // namespace

void LatticeSpec::validate() const {
  for (int axis = 0; axis < 4; ++axis) {
    if (extent(axis) < 4) throw Error(ErrorCode::InvalidArgument, "lattice extents must be at least 4");
    const double h = spacing(axis);
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidArgument, "lattice spacings must be positive");
  }
}

std::size_t LatticeSpec::size() const {
  return static_cast<std::size_t>(nt) * nx * ny * nz;
}

int LatticeSpec::extent(int axis) const {
  switch (axis) {
    case 0: return nt;
    case 1: return nx;
    case 2: return ny;
    default: return nz;
  }
}

double LatticeSpec::spacing(int axis) const {
  switch (axis) {
    case 0: return dt;
    case 1: return dx;
    case 2: return dy;
    default: return dz;
  }
}

std::size_t LatticeSpec::index(int it, int ix, int iy, int iz) const {
  auto wrap = [](int i, int n) { return ((i % n) + n) % n; };
  return ((static_cast<std::size_t>(wrap(it, nt)) * nx + wrap(ix, nx)) * ny + wrap(iy, ny)) * nz + wrap(iz, nz);
}

std::array<int, 4> LatticeSpec::coords(std::size_t node) const {
  std::array<int, 4> c{};
  c[3] = static_cast<int>(node % nz);
  node /= nz;
  c[2] = static_cast<int>(node % ny);
  node /= ny;
  c[1] = static_cast<int>(node % nx);
  c[0] = static_cast<int>(node / nx);
  return c;
}

std::size_t LatticeSpec::neighbor(std::size_t node, int axis, int delta) const {
  auto c = coords(node);
  c[axis] += delta;
  return index(c[0], c[1], c[2], c[3]);
}

PotentialLattice PotentialLattice::zero(const LatticeSpec& spec) {
  spec.validate();
  return {spec, std::vector<double>(spec.size()), std::vector<Vec3R>(spec.size())};
}

void PotentialLattice::validate() const {
  spec.validate();
  if (phi.size() != spec.size() || a.size() != spec.size()) {
    throw Error(ErrorCode::InvalidArgument, "potential lattice shape does not match its spec");
  }
  for (std::size_t n = 0; n < phi.size(); ++n) {
    if (!std::isfinite(phi[n]) || !all_finite(a[n])) throw Error(ErrorCode::NonFinite, "non-finite potential");
  }
}

SourceLattice SourceLattice::zero(const LatticeSpec& spec) {
  return {std::vector<double>(spec.size()), std::vector<Vec3R>(spec.size())};
}

std::vector<RSVector> FieldLattice::rs() const {
  std::vector<RSVector> out(e.size());
  for (std::size_t n = 0; n < e.size(); ++n) {
    out[n] = {Cd(e[n].x, b[n].x), Cd(e[n].y, b[n].y), Cd(e[n].z, b[n].z)};
  }
  return out;
}

FieldLattice FieldLattice::from_rs(const LatticeSpec& spec, const std::vector<RSVector>& f) {
  if (f.size() != spec.size()) throw Error(ErrorCode::InvalidArgument, "field lattice shape does not match its spec");
  FieldLattice out{spec, std::vector<Vec3R>(f.size()), std::vector<Vec3R>(f.size())};
  for (std::size_t n = 0; n < f.size(); ++n) {
    out.e[n] = real_part(f[n]);
    out.b[n] = imag_part(f[n]);
  }
  return out;
}

double FieldLattice::scale() const {
  double m = 0.0;
  for (std::size_t n = 0; n < e.size(); ++n) m = std::max({m, max_abs(e[n]), max_abs(b[n])});
  return m;
}

FieldLattice fields_from_potentials(const PotentialLattice& p) {
  p.validate();
  const auto grad_phi = lattice_grad(p.spec, p.phi);
  const auto dt_a = lattice_diff(p.spec, p.a, 0);
  FieldLattice f{p.spec, std::vector<Vec3R>(p.spec.size()), lattice_curl(p.spec, p.a)};
  for (std::size_t n = 0; n < f.e.size(); ++n) f.e[n] = -(grad_phi[n] + dt_a[n]);
  return f;
}

HomogeneousResidual homogeneous_identity_check(const FieldLattice& f) {
  HomogeneousResidual r;
  r.field_scale = f.scale();
  for (const double v : lattice_div(f.spec, f.b)) r.div_b = std::max(r.div_b, std::abs(v));
  const auto curl_e = lattice_curl(f.spec, f.e);
  const auto dt_b = lattice_diff(f.spec, f.b, 0);
  for (std::size_t n = 0; n < curl_e.size(); ++n) r.faraday = std::max(r.faraday, max_abs(curl_e[n] + dt_b[n]));
  return r;
}

std::complex<double> action(const PotentialLattice& p, const SourceLattice& s, LagrangianKind kind, BIParameter k) {
  p.validate();
  check_shape(p.spec, s);
  const FieldLattice f = fields_from_potentials(p);
  Cd total(0.0, 0.0);
  for (std::size_t n = 0; n < p.spec.size(); ++n) {
    const FieldPoint fp = field_at(f, n);
    const SourcePoint sp = source_at(p, s, n);
    switch (kind) {
      case LagrangianKind::Maxwell: total += l_maxwell(fp, sp).value; break;
      case LagrangianKind::BornInfeld: total += l_bi_invariant(fp, k).value + source_coupling(sp); break;
      case LagrangianKind::Complex: total += l_c(fp, sp).value; break;
      case LagrangianKind::ComplexBornInfeld:
        total += l_bic_det(fp, k, Branch::ReductionConsistent).value + source_coupling(sp);
        break;
    }
  }
  return total * p.spec.cell_volume();
}

double PotentialGradient::max_abs() const {
  double m = 0.0;
  for (std::size_t n = 0; n < phi.size(); ++n) m = std::max({m, std::abs(phi[n]), cfaraday::max_abs(a[n])});
  return m;
}

double PotentialGradient::max_abs_diff(const PotentialGradient& other) const {
  if (phi.size() != other.phi.size()) throw Error(ErrorCode::InvalidArgument, "gradient shapes differ");
  double m = 0.0;
  for (std::size_t n = 0; n < phi.size(); ++n) {
    m = std::max({m, std::abs(phi[n] - other.phi[n]), cfaraday::max_abs(a[n] - other.a[n])});
  }
  return m;
}

PotentialGradient action_gradient(const PotentialLattice& p, const SourceLattice& s, LagrangianKind kind,
                                  BIParameter k, ActionPart part) {
  return gradient_impl(p, s, kind, k, part, nullptr);
}

PotentialGradient finite_difference_gradient(const PotentialLattice& p, const SourceLattice& s, LagrangianKind kind,
                                             BIParameter k, ActionPart part, double h) {
  p.validate();
  PotentialLattice work = p;
  PotentialGradient g{p.spec, std::vector<double>(p.spec.size()), std::vector<Vec3R>(p.spec.size())};
  auto probe = [&](double& slot) {
    const double saved = slot;
    const double step = h * std::max(1.0, std::abs(saved));
    slot = saved + step;
    const double plus = part_of(action(work, s, kind, k), part);
    slot = saved - step;
    const double minus = part_of(action(work, s, kind, k), part);
    slot = saved;
    return (plus - minus) / (2.0 * step);
  };
  for (std::size_t n = 0; n < p.spec.size(); ++n) {
    g.phi[n] = probe(work.phi[n]);
    for (std::size_t c = 0; c < 3; ++c) g.a[n][c] = probe(work.a[n][c]);
  }
  return g;
}

double MaxwellResidual::max_r1() const {
  double m = 0.0;
  for (const auto& v : r1) m = std::max(m, std::abs(v));
  return m;
}

double MaxwellResidual::max_r2() const {
  double m = 0.0;
  for (const auto& v : r2) m = std::max({m, std::abs(v.x), std::abs(v.y), std::abs(v.z)});
  return m;
}

MaxwellResidual maxwell_residual(const FieldLattice& f, const SourceLattice& s) {
  check_shape(f.spec, s);
  const auto rs = f.rs();
  MaxwellResidual r{lattice_div(f.spec, rs), lattice_curl(f.spec, rs)};
  const auto dt_f = lattice_diff(f.spec, rs, 0);
  const Cd i(0.0, 1.0);
  for (std::size_t n = 0; n < rs.size(); ++n) {
    r.r1[n] -= s.rho[n];
    r.r2[n] -= i * (dt_f[n] + to_complex(s.j[n]));
  }
  return r;
}

double continuity_residual(const LatticeSpec& spec, const SourceLattice& s) {
  check_shape(spec, s);
  const auto dt_rho = lattice_diff(spec, s.rho, 0);
  const auto div_j = lattice_div(spec, s.j);
  double m = 0.0;
  for (std::size_t n = 0; n < dt_rho.size(); ++n) m = std::max(m, std::abs(dt_rho[n] + div_j[n]));
  return m;
}

PotentialLattice apply_gauge(const PotentialLattice& p, const std::vector<double>& chi) {
  if (chi.size() != p.spec.size()) throw Error(ErrorCode::InvalidArgument, "gauge function shape mismatch");
  PotentialLattice out = p;
  const auto dt_chi = lattice_diff(p.spec, chi, 0);
  const auto grad_chi = lattice_grad(p.spec, chi);
  for (std::size_t n = 0; n < chi.size(); ++n) {
    out.phi[n] -= dt_chi[n];
    out.a[n] += grad_chi[n];
  }
  return out;
}

GaussSolution solve_discrete_gauss(const LatticeSpec& spec, const std::vector<double>& rho) {
  spec.validate();
  if (rho.size() != spec.size()) throw Error(ErrorCode::InvalidArgument, "charge lattice shape mismatch");
  const std::size_t slice = static_cast<std::size_t>(spec.nx) * spec.ny * spec.nz;

  std::vector<double> eigen(slice);
  double largest = 0.0;
  for (int ix = 0; ix < spec.nx; ++ix)
    for (int iy = 0; iy < spec.ny; ++iy)
      for (int iz = 0; iz < spec.nz; ++iz) {
        const double sx = std::sin(2.0 * std::numbers::pi * ix / spec.nx) / spec.dx;
        const double sy = std::sin(2.0 * std::numbers::pi * iy / spec.ny) / spec.dy;
        const double sz = std::sin(2.0 * std::numbers::pi * iz / spec.nz) / spec.dz;
        const double lambda = sx * sx + sy * sy + sz * sz;
        eigen[(static_cast<std::size_t>(ix) * spec.ny + iy) * spec.nz + iz] = lambda;
        largest = std::max(largest, lambda);
      }

  fftw_complex* buffer = fftw_alloc_complex(slice);
  fftw_plan forward = fftw_plan_dft_3d(spec.nx, spec.ny, spec.nz, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan backward = fftw_plan_dft_3d(spec.nx, spec.ny, spec.nz, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);

  GaussSolution out{std::vector<double>(rho.size()), std::vector<double>(rho.size())};
  std::vector<Cd> rho_hat(slice);
  for (int it = 0; it < spec.nt; ++it) {
    const std::size_t base = static_cast<std::size_t>(it) * slice;
    for (std::size_t m = 0; m < slice; ++m) {
      buffer[m][0] = rho[base + m];
      buffer[m][1] = 0.0;
    }
    fftw_execute(forward);
    for (std::size_t m = 0; m < slice; ++m) {
      const bool null_mode = eigen[m] <= 1e-12 * largest;
      rho_hat[m] = null_mode ? Cd(0.0, 0.0) : Cd(buffer[m][0], buffer[m][1]);
      const Cd phi_hat = null_mode ? Cd(0.0, 0.0) : rho_hat[m] / eigen[m];
      buffer[m][0] = phi_hat.real();
      buffer[m][1] = phi_hat.imag();
    }
    fftw_execute(backward);
    for (std::size_t m = 0; m < slice; ++m) out.phi[base + m] = buffer[m][0] / static_cast<double>(slice);
    for (std::size_t m = 0; m < slice; ++m) {
      buffer[m][0] = rho_hat[m].real();
      buffer[m][1] = rho_hat[m].imag();
    }
    fftw_execute(backward);
    for (std::size_t m = 0; m < slice; ++m) out.rho[base + m] = buffer[m][0] / static_cast<double>(slice);
  }
  fftw_destroy_plan(forward);
  fftw_destroy_plan(backward);
  fftw_free(buffer);
  return out;
}

PotentialLattice make_potentials(const LatticeSpec& spec, const PotentialInit& init) {
  PotentialLattice p = PotentialLattice::zero(spec);
  const double two_pi = 2.0 * std::numbers::pi;
  std::mt19937_64 rng(init.seed);

  if (init.kind == "zero") return p;

  if (init.kind == "constant") {
    std::fill(p.phi.begin(), p.phi.end(), init.scalar);
    std::fill(p.a.begin(), p.a.end(), init.vector);
    return p;
  }
  if (init.kind == "random") {
    for (std::size_t n = 0; n < spec.size(); ++n) {
      p.phi[n] = symmetric_uniform(rng, init.amplitude);
      for (std::size_t c = 0; c < 3; ++c) p.a[n][c] = symmetric_uniform(rng, init.amplitude);
    }
    return p;
  }

  struct Mode {
    std::array<int, 4> m;
    double coefficient;
    double phase;
  };
  // Four scalar components (phi, A_x, A_y, A_z), each a few low periodic modes.
  std::array<std::vector<Mode>, 4> modes;
  if (init.kind == "smooth_random") {
    if (init.modes < 1) throw Error(ErrorCode::InvalidArgument, "smooth_random needs at least one mode");
    for (auto& list : modes) {
      for (int q = 0; q < init.modes; ++q) {
        Mode mode{};
        do {
          for (auto& mi : mode.m) mi = static_cast<int>(rng() % 3) - 1;
        } while (mode.m == std::array<int, 4>{0, 0, 0, 0});
        mode.coefficient = symmetric_uniform(rng, init.amplitude / init.modes);
        mode.phase = two_pi * unit_uniform(rng);
        list.push_back(mode);
      }
    }
  } else if (init.kind == "plane_wave") {
    const double cycles = init.mode * spec.length(0) / spec.length(1);
    if (std::abs(cycles - std::round(cycles)) > 1e-9) {
      throw Error(ErrorCode::InvalidArgument, "plane_wave needs the time extent to hold whole periods");
    }
  } else if (init.kind != "linear_in_t" && init.kind != "sine_curl") {
    throw Error(ErrorCode::InvalidArgument, "unknown potential initializer '" + init.kind + "'");
  }

  for (std::size_t n = 0; n < spec.size(); ++n) {
    const auto c = spec.coords(n);
    const double t = c[0] * spec.dt;
    const double x = c[1] * spec.dx;
    if (init.kind == "linear_in_t") {
      // Linear in t on the interior slices; the periodic wrap breaks it at
      // the first and last slice.
      p.a[n] = t * init.vector;
    } else if (init.kind == "sine_curl") {
      p.a[n].y = init.amplitude * std::sin(two_pi * init.mode * x / spec.length(1));
    } else if (init.kind == "plane_wave") {
      // E = (0, a cos(kx - wt), 0), B = (0, 0, a cos(kx - wt)) in the continuum.
      const double wavenumber = two_pi * init.mode / spec.length(1);
      p.a[n].y = init.amplitude / wavenumber * std::sin(wavenumber * (x - t));
    } else {
      for (int comp = 0; comp < 4; ++comp) {
        double v = 0.0;
        for (const Mode& mode : modes[comp]) {
          double arg = mode.phase;
          for (int axis = 0; axis < 4; ++axis) arg += two_pi * mode.m[axis] * c[axis] / spec.extent(axis);
          v += mode.coefficient * std::sin(arg);
        }
        if (comp == 0) {
          p.phi[n] = v;
        } else {
          p.a[n][comp - 1] = v;
        }
      }
    }
  }
  return p;
}

SourceLattice make_sources(const LatticeSpec& spec, const SourceInit& init) {
  spec.validate();
  SourceLattice s = SourceLattice::zero(spec);
  if (init.kind == "zero") return s;
  if (init.kind == "random_conserved") {
    // rho = div w, j = -dw/dt satisfies the discrete continuity equation.
    std::mt19937_64 rng(init.seed);
    std::vector<Vec3R> w(spec.size());
    for (auto& v : w)
      for (std::size_t c = 0; c < 3; ++c) v[c] = symmetric_uniform(rng, init.amplitude);
    s.rho = lattice_div(spec, w);
    const auto dt_w = lattice_diff(spec, w, 0);
    for (std::size_t n = 0; n < w.size(); ++n) s.j[n] = -dt_w[n];
    return s;
  }
  if (init.kind == "point_charge") {
    // Static charge at the spatial origin, with its neutralising background.
    std::vector<double> rho(spec.size());
    const double density = init.amplitude / (spec.dx * spec.dy * spec.dz);
    for (int it = 0; it < spec.nt; ++it) rho[spec.index(it, 0, 0, 0)] = density;
    s.rho = solve_discrete_gauss(spec, rho).rho;
    return s;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown source initializer '" + init.kind + "'");
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::InvalidArgument, "slope needs two or more points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::nan("");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

StationarityReport stationarity_equivalence_report(const PotentialLattice& p, const SourceLattice& s, BIParameter k,
                                                   const StationarityOptions& options) {
  StationarityReport r;
  const auto maxwell = action_gradient(p, s, LagrangianKind::Maxwell, k, ActionPart::Real);
  const auto complex_re = action_gradient(p, s, LagrangianKind::Complex, k, ActionPart::Real);
  const auto complex_im = action_gradient(p, s, LagrangianKind::Complex, k, ActionPart::Imag);
  std::size_t ambiguous_re = 0;
  std::size_t ambiguous_im = 0;
  const auto bic_re = gradient_impl(p, s, LagrangianKind::ComplexBornInfeld, k, ActionPart::Real, &ambiguous_re);
  const auto bic_im = gradient_impl(p, s, LagrangianKind::ComplexBornInfeld, k, ActionPart::Imag, &ambiguous_im);

  r.re_complex_vs_maxwell = complex_re.max_abs_diff(maxwell);
  r.re_complex_vs_maxwell_rel = relative(r.re_complex_vs_maxwell, maxwell.max_abs());
  r.bic_vs_complex = std::max(bic_re.max_abs_diff(complex_re), bic_im.max_abs_diff(complex_im));
  r.bic_vs_complex_rel =
      relative(r.bic_vs_complex, std::max(complex_re.max_abs(), complex_im.max_abs()));
  r.ambiguous_nodes = std::max(ambiguous_re, ambiguous_im);

  const double base_scale = fields_from_potentials(p).scale();
  if (base_scale > 0.0 && !options.amplitude_factors.empty()) {
    const SourceLattice vacuum = SourceLattice::zero(p.spec);
    std::vector<double> xs, ys;
    for (const double factor : options.amplitude_factors) {
      const double amplitude = factor * k.value();
      PotentialLattice scaled = p;
      const double ratio = amplitude / base_scale;
      for (auto& v : scaled.phi) v *= ratio;
      for (auto& v : scaled.a) v = ratio * v;
      const auto bi = action_gradient(scaled, vacuum, LagrangianKind::BornInfeld, k, ActionPart::Real);
      const auto mx = action_gradient(scaled, vacuum, LagrangianKind::Maxwell, k, ActionPart::Real);
      const double diff = bi.max_abs_diff(mx);
      r.sweep.push_back({amplitude, diff});
      xs.push_back(amplitude);
      ys.push_back(diff);
    }
    if (xs.size() >= 2) r.sweep_slope = loglog_slope(xs, ys);
  }

  r.imag_gradient = complex_im.max_abs() / p.spec.cell_volume();
  if (options.refine) {
    for (const int n : options.refine_levels) {
      const PotentialLattice pn = options.refine(n);
      const auto g = action_gradient(pn, SourceLattice::zero(pn.spec), LagrangianKind::Complex, k, ActionPart::Imag);
      r.imag_trend.push_back({n, g.max_abs() / pn.spec.cell_volume()});
    }
  }
  return r;
}

}  // namespace cfaraday
