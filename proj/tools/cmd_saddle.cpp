#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "cfaraday/complex_variational.hpp"
#include "commands.hpp"

namespace cfcli {

using namespace cfaraday;

namespace {

using Cd = std::complex<double>;

// Known stationary points; for exp_minus_z (f' = e^z - 1) the nearest of 2 pi i n.
std::vector<ComplexVector> known_stationary(const std::string& name, Cd center, const ComplexVector& near) {
  if (name == "z2") return {{Cd(0.0)}};
  if (name == "shifted_z2") return {{center}};
  if (name == "cubic") return {{Cd(1.0)}, {Cd(-1.0)}};
  if (name == "exp_minus_z") {
    const double turns = std::round(near.empty() ? 0.0 : near[0].imag() / (2.0 * std::numbers::pi));
    return {{Cd(0.0, 2.0 * std::numbers::pi * turns)}};
  }
  if (name == "sum_squares") return {{Cd(0.0), Cd(0.0)}};
  return {};
}

double distance(const ComplexVector& a, const ComplexVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::string point_text(const ComplexVector& z) {
  std::string s;
  for (const auto& c : z) s += (s.empty() ? "" : ";") + fmt_complex(c.real(), c.imag());
  return s;
}

}  // namespace

json saddle_defaults() {
  return json{{"functions", {"z2", "shifted_z2"}},
              {"center", {2.0, -3.0}},
              {"start", {1.0, 1.0}},
              {"radius", 1.0},
              {"samples", {8, 16, 32}},
              {"tolerance", 1e-9},
              {"max_iter", 100},
              {"derivative_tolerance", 1e-10},
              {"location_tolerance", 1e-10},
              {"seed", 0}};
}

ReportEnvelope cmd_saddle(const json& config) {
  const auto names = get_strings(config, "functions", 1);
  const auto known = builtin_function_names();
  for (const auto& n : names) {
    if (std::find(known.begin(), known.end(), n) == known.end()) {
      throw ConfigError("unknown function '" + n + "'");
    }
  }
  const auto c = get_doubles(config, "center", 2);
  const auto st = get_doubles(config, "start", 2);
  if (c.size() != 2 || st.size() != 2) throw ConfigError("'center' and 'start' are [re, im] pairs");
  const double radius = get_positive(config, "radius");
  const auto levels = get_ints(config, "samples", 1, 8);
  const double tolerance = get_positive(config, "tolerance");
  StationaryOptions options;
  options.max_iter = get_int(config, "max_iter", 1);
  options.derivative_tolerance = get_positive(config, "derivative_tolerance");
  const double location_tolerance = get_positive(config, "location_tolerance");
  options.saddle_radius = radius;
  options.saddle_samples = levels.back();
  get_seed(config);

  const Cd center(c[0], c[1]);
  ReportEnvelope r;
  Table stationary{"stationary", {"function", "z0", "derivative_norm", "iterations", "distance_to_known"}, {}};
  Table minimax{"minimax", {"function", "samples", "p0", "min_max", "max_min", "gap", "allowance", "verified"}, {}};
  Plot plot{"minimax_gap", "Sampled min-max gap", "samples per axis", "gap + allowance", {}, true, true};

  for (const auto& name : names) {
    const auto f = builtin_function(name, center);
    const ComplexVector start(f.dimension, Cd(st[0], st[1]));
    // NonAnalytic and NoConvergence propagate and become exit code 1.
    const auto res = find_stationary(f, start, options);

    double dist = std::numeric_limits<double>::infinity();
    for (const auto& z : known_stationary(name, center, res.z0)) dist = std::min(dist, distance(z, res.z0));
    stationary.add({name, point_text(res.z0), res.derivative_norm, static_cast<std::int64_t>(res.iterations), dist});

    r.check(name + "/derivative_norm", within(options.derivative_tolerance), fmt(res.derivative_norm),
            res.derivative_norm, res.derivative_norm <= options.derivative_tolerance);
    r.check(name + "/location", "known stationary point", point_text(res.z0), dist, dist <= location_tolerance);

    Series series{name, {}, {}};
    std::vector<double> gaps;
    for (const int m : levels) {
      const auto rep = verify_saddle(f, res.z0, radius, m, tolerance);
      minimax.add({name, static_cast<std::int64_t>(m), rep.p0, rep.min_max, rep.max_min, rep.gap, rep.allowance,
                   std::string(rep.verified ? "true" : "false")});
      r.check(name + "/minimax/samples=" + std::to_string(m), "gap " + within(rep.allowance), fmt(rep.gap), rep.gap,
              rep.verified);
      gaps.push_back(rep.gap);
      series.x.push_back(m);
      series.y.push_back(rep.gap + rep.allowance);
    }
    bool shrinking = true;
    for (std::size_t i = 1; i < gaps.size(); ++i) shrinking = shrinking && gaps[i] <= gaps[i - 1];
    r.check(name + "/gap_refinement", "non-increasing under refinement", fmt(gaps.back()), gaps.back(), shrinking);
    plot.series.push_back(std::move(series));
  }
  r.tables.push_back(std::move(stationary));
  r.tables.push_back(std::move(minimax));
  r.plots.push_back(std::move(plot));
  return r;
}

}  // namespace cfcli
