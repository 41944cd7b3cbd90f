#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "cfaraday/rs_solver.hpp"
#include "commands.hpp"

namespace cfcli {

using namespace cfaraday;

namespace {

using Cd = std::complex<double>;

// Vacuum solutions along x with wavenumber `kx`: a +x wave (0, c, ic) and,
// for "standing", its -x partner (0, c', -ic').
struct Preset {
  std::string kind;
  double amplitude = 1.0;
  double kx = 1.0;

  RSVector at(const Vec3R& x, double t) const {
    if (kind == "zero") return {};
    const double c = amplitude * std::cos(kx * (x.x - t));
    if (kind == "plane_wave") return {Cd(0.0), Cd(c), Cd(0.0, c)};
    const double d = amplitude * std::cos(kx * (x.x + t));
    return {Cd(0.0), Cd(c + d), Cd(0.0, c - d)};
  }
};

Table trajectory_table(const RSTrajectory& traj) {
  Table t{"trajectory", {"t", "ix", "iy", "iz", "re_fx", "im_fx", "re_fy", "im_fy", "re_fz", "im_fz"}, {}};
  for (const auto& snap : traj.snapshots) {
    for (std::size_t n = 0; n < snap.f.size(); ++n) {
      const auto c = snap.grid.coords(n);
      const auto& f = snap.f[n];
      t.add({snap.t, static_cast<std::int64_t>(c[0]), static_cast<std::int64_t>(c[1]),
             static_cast<std::int64_t>(c[2]), f.x.real(), f.x.imag(), f.y.real(), f.y.imag(), f.z.real(),
             f.z.imag()});
    }
  }
  return t;
}

}  // namespace

json evolve_defaults() {
  const double two_pi = 2.0 * std::numbers::pi;
  return json{{"preset", "plane_wave"},
              {"scheme", "spectral"},
              {"grid", {{"nx", 16}, {"ny", 4}, {"nz", 4}, {"lx", two_pi}, {"ly", two_pi}, {"lz", two_pi}}},
              {"amplitude", 1.0},
              {"mode", 1},
              {"steps", 1000},
              {"dt", 0.0},
              {"record_stride", 100},
              {"compare_two_field", true},
              {"compare_levels", {16, 32, 64}},
              {"l2_tolerance", 1e-8},
              {"energy_tolerance", 1e-10},
              {"gauss_tolerance", 1e-10},
              {"order_target", 2.0},
              {"order_tolerance", 0.2},
              {"seed", 1}};
}

ReportEnvelope cmd_evolve(const json& config) {
  Preset preset;
  preset.kind = get_choice(config, "preset", {"zero", "plane_wave", "standing"});
  const auto scheme_name = get_choice(config, "scheme", {"spectral", "fd"});
  const RSScheme scheme = scheme_name == "spectral" ? RSScheme::Rk4Spectral : RSScheme::Rk4Fd;
  if (!config.contains("grid") || !config["grid"].is_object()) throw ConfigError("'grid' must be an object");
  const auto& gc = config["grid"];
  const int nx = get_int(gc, "nx", 4), ny = get_int(gc, "ny", 4), nz = get_int(gc, "nz", 4);
  const double lx = get_positive(gc, "lx"), ly = get_positive(gc, "ly"), lz = get_positive(gc, "lz");
  const GridSpec grid{nx, ny, nz, lx / nx, ly / ny, lz / nz};
  if (grid.size() > 16'000'000) throw ConfigError("grid has more than 1.6e7 nodes");
  preset.amplitude = get_double(config, "amplitude");
  const int mode = get_int(config, "mode", 1);
  preset.kx = 2.0 * std::numbers::pi * mode / lx;
  const int steps = get_int(config, "steps", 1);
  const double dt_config = get_double(config, "dt");
  if (dt_config < 0.0) throw ConfigError("'dt' must be positive, or 0 for one period over 'steps'");
  const double period = lx / mode;
  const double dt = dt_config > 0.0 ? dt_config : period / steps;
  const int record_stride = get_int(config, "record_stride", 0);
  const bool compare = get_bool(config, "compare_two_field");
  const auto levels = get_ints(config, "compare_levels", 0, 4);
  const double l2_tol = get_positive(config, "l2_tolerance");
  const double energy_tol = get_positive(config, "energy_tolerance");
  const double gauss_tol = get_positive(config, "gauss_tolerance");
  const double order_target = get_double(config, "order_target");
  const double order_tol = get_positive(config, "order_tolerance");
  get_seed(config);

  ReportEnvelope r;
  const auto s0 = RSState::sample(grid, [&](const Vec3R& x) { return preset.at(x, 0.0); });
  RSOptions options;
  options.record_stride = record_stride;
  // UnstableStep propagates and becomes exit code 1.
  const auto traj = evolve_rs(s0, {}, dt, steps, scheme, options);

  const auto exact = RSState::sample(grid, [&](const Vec3R& x) { return preset.at(x, traj.final_state.t); });
  const double l2 = l2_distance(traj.final_state, exact);
  if (scheme == RSScheme::Rk4Spectral) {
    r.check("analytic_l2_error", within(l2_tol), fmt(l2), l2, l2 <= l2_tol);
  } else {
    r.note("analytic_l2_error", within(l2_tol), fmt(l2), l2, true,
           "centered differences are second order; the tolerance applies to the spectral scheme");
  }
  const double drift = traj.energy_drift();
  r.check("energy_drift", within(energy_tol) + " relative", fmt(drift), drift, drift <= energy_tol);
  const double scale = max_norm(s0) > 0.0 ? max_norm(s0) : 1.0;
  const double gdrift = traj.gauss_drift(scale);
  r.check("gauss_drift", within(gauss_tol) + " relative", fmt(gdrift), gdrift, gdrift <= gauss_tol);

  r.tables.push_back(trajectory_table(traj));
  Table energy_table{"energy", {"t", "energy", "gauss_residual"}, {}};
  Series energy_series{"energy", {}, {}};
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    energy_table.add({traj.times[i], traj.energy[i], traj.gauss[i]});
    energy_series.x.push_back(traj.times[i]);
    energy_series.y.push_back(traj.energy[i]);
  }
  r.tables.push_back(std::move(energy_table));
  r.plots.push_back(Plot{"energy", "Field energy", "t", "energy", {energy_series}, false, false});

  if (compare && preset.kind != "zero" && !levels.empty()) {
    // Yee leapfrog at dt = dx/2 against the RS solution over the same period.
    Table cmp{"scheme_comparison", {"nx", "dt", "steps", "deviation", "order"}, {}};
    Series dev_series{"max deviation", {}, {}};
    std::vector<double> devs;
    for (const int n : levels) {
      const GridSpec g{n, ny, nz, lx / n, ly / ny, lz / nz};
      const int two_steps = static_cast<int>(std::lround(2.0 * period / g.dx));
      const double two_dt = period / two_steps;
      const auto two0 = TwoFieldState::sample(g, [&](const Vec3R& x) {
        const auto f = preset.at(x, 0.0);
        return std::pair<Vec3R, Vec3R>{real_part(f), imag_part(f)};
      });
      const auto two = evolve_two_field(two0, {}, two_dt, two_steps).final_state;
      const auto rs0 = RSState::sample(g, [&](const Vec3R& x) { return preset.at(x, 0.0); });
      const int rs_steps = std::max(steps, static_cast<int>(std::ceil(period / (0.5 * rs_stable_dt(g, scheme)))));
      const auto rs = evolve_rs(rs0, {}, period / rs_steps, rs_steps, scheme, {0, rs_steps}).final_state;
      const double dev = scheme_deviation(rs, two);
      const double order = devs.empty() ? std::nan("") : std::log2(devs.back() / dev) / std::log2(n / double(levels[devs.size() - 1]));
      devs.push_back(dev);
      cmp.add({static_cast<std::int64_t>(n), two_dt, static_cast<std::int64_t>(two_steps), dev, order});
      dev_series.x.push_back(n);
      dev_series.y.push_back(dev);
      if (devs.size() >= 2) {
        const double off = std::abs(order - order_target);
        r.check("two_field_order/nx=" + std::to_string(n), fmt(order_target) + " +- " + fmt(order_tol), fmt(order),
                off, off <= order_tol);
      }
    }
    r.tables.push_back(std::move(cmp));
    r.plots.push_back(Plot{"scheme_comparison", "RS vs two-field leapfrog", "nx", "max deviation", {dev_series}, true,
                           true});
  }
  return r;
}

}  // namespace cfcli
