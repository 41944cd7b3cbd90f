#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "cfaraday/error.hpp"
#include "cfaraday/lattice_action.hpp"
#include "commands.hpp"

namespace cfcli {

using namespace cfaraday;

namespace {

const char* kComponents[] = {"phi", "ax", "ay", "az"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

LatticeSpec parse_lattice(const json& c) {
  if (!c.contains("lattice") || !c["lattice"].is_object()) throw ConfigError("'lattice' must be an object");
  const auto& l = c["lattice"];
  LatticeSpec spec{get_int(l, "nt", 4),        get_int(l, "nx", 4),        get_int(l, "ny", 4),
                   get_int(l, "nz", 4),        get_positive(l, "dt"),      get_positive(l, "dx"),
                   get_positive(l, "dy"),      get_positive(l, "dz")};
  if (spec.size() > 4'000'000) throw ConfigError("lattice has more than 4e6 nodes");
  return spec;
}

Table gradient_table(const std::string& name, const PotentialGradient& re, const PotentialGradient* im) {
  Table t{name, {"it", "ix", "iy", "iz", "component", "re", "im"}, {}};
  for (std::size_t n = 0; n < re.phi.size(); ++n) {
    const auto c = re.spec.coords(n);
    for (int comp = 0; comp < 4; ++comp) {
      const double vr = comp == 0 ? re.phi[n] : re.a[n][comp - 1];
      const double vi = im ? (comp == 0 ? im->phi[n] : im->a[n][comp - 1]) : 0.0;
      t.add({static_cast<std::int64_t>(c[0]), static_cast<std::int64_t>(c[1]), static_cast<std::int64_t>(c[2]),
             static_cast<std::int64_t>(c[3]), std::string(kComponents[comp]), vr, vi});
    }
  }
  return t;
}

}  // namespace

json action_check_defaults() {
  return json{{"lattice", {{"nt", 4}, {"nx", 4}, {"ny", 4}, {"nz", 4}, {"dt", 1.0}, {"dx", 1.0}, {"dy", 1.0}, {"dz", 1.0}}},
              {"potentials", {{"kind", "random"}, {"amplitude", 0.1}, {"mode", 1}, {"modes", 4}}},
              {"sources", {{"kind", "random_conserved"}, {"amplitude", 0.1}}},
              {"k", 1.0},
              {"kinds", {"MAXWELL", "BORN_INFELD", "COMPLEX", "COMPLEX_BI"}},
              {"fd_check", true},
              {"fd_max_nodes", 1296},
              {"fd_step", 1e-5},
              {"fd_tolerance", 1e-6},
              {"equivalence_tolerance", 1e-12},
              {"identity_tolerance", 1e-12},
              {"amplitude_factors", {0.01, 0.0215, 0.0464, 0.1}},
              {"slope_target", 3.0},
              {"slope_tolerance", 0.2},
              {"refine_levels", {4, 8, 12}},
              {"seed", 1}};
}

ReportEnvelope cmd_action_check(const json& config) {
  const LatticeSpec spec = parse_lattice(config);
  try {
    spec.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("lattice: ") + e.what());
  }
  const auto seed = get_seed(config);
  const auto& pc = config["potentials"];
  PotentialInit pinit;
  pinit.kind = get_choice(pc, "kind", {"zero", "constant", "linear_in_t", "sine_curl", "plane_wave", "random",
                                       "smooth_random"});
  pinit.amplitude = get_double(pc, "amplitude");
  pinit.mode = get_int(pc, "mode", 1);
  pinit.modes = get_int(pc, "modes", 1);
  pinit.seed = seed;
  const auto& sc = config["sources"];
  SourceInit sinit;
  sinit.kind = get_choice(sc, "kind", {"zero", "random_conserved", "point_charge"});
  sinit.amplitude = get_double(sc, "amplitude");
  sinit.seed = seed + 1;
  const BIParameter k(get_positive(config, "k"));
  std::vector<LagrangianKind> kinds;
  for (const auto& name : get_strings(config, "kinds", 1)) {
    try {
      kinds.push_back(parse_lagrangian_kind(name));
    } catch (const Error&) {
      throw ConfigError("unknown Lagrangian kind '" + name + "'");
    }
  }
  const bool fd_check = get_bool(config, "fd_check");
  const int fd_max_nodes = get_int(config, "fd_max_nodes", 1);
  if (fd_check && spec.size() > static_cast<std::size_t>(fd_max_nodes)) {
    throw ConfigError("lattice of " + std::to_string(spec.size()) + " nodes exceeds fd_max_nodes = " +
                      std::to_string(fd_max_nodes) + " with the finite-difference oracle on");
  }
  const double fd_step = get_positive(config, "fd_step");
  const double fd_tol = get_positive(config, "fd_tolerance");
  const double eq_tol = get_positive(config, "equivalence_tolerance");
  const double id_tol = get_positive(config, "identity_tolerance");
  StationarityOptions sopt;
  sopt.amplitude_factors = get_doubles(config, "amplitude_factors", 0);
  for (const double a : sopt.amplitude_factors) {
    if (!(a > 0.0)) throw ConfigError("'amplitude_factors' must be positive");
  }
  const double slope_target = get_double(config, "slope_target");
  const double slope_tol = get_positive(config, "slope_tolerance");
  sopt.refine_levels = get_ints(config, "refine_levels", 0, 4);

  const auto p = make_potentials(spec, pinit);
  const auto s = make_sources(spec, sinit);

  ReportEnvelope r;

  // Homogeneous equations and gauge invariance.
  const auto fields = fields_from_potentials(p);
  const auto hom = homogeneous_identity_check(fields);
  const double fscale = std::max(hom.field_scale, std::numeric_limits<double>::min());
  r.check("homogeneous_div_b", within(id_tol) + " x field scale", fmt(hom.div_b), hom.div_b / fscale,
          hom.div_b <= id_tol * hom.field_scale);
  r.check("homogeneous_faraday", within(id_tol) + " x field scale", fmt(hom.faraday), hom.faraday / fscale,
          hom.faraday <= id_tol * hom.field_scale);
  {
    std::mt19937_64 rng(seed + 2);
    std::vector<double> chi(spec.size());
    for (auto& v : chi) v = pinit.amplitude * (2.0 * unit_uniform(rng()) - 1.0);
    const auto gauged = fields_from_potentials(apply_gauge(p, chi));
    double diff = 0.0;
    for (std::size_t n = 0; n < spec.size(); ++n) {
      diff = std::max({diff, max_abs(gauged.e[n] - fields.e[n]), max_abs(gauged.b[n] - fields.b[n])});
    }
    const double scale = std::max({hom.field_scale, std::abs(pinit.amplitude), std::numeric_limits<double>::min()});
    r.check("gauge_invariance", within(id_tol) + " x field scale", fmt(diff), diff / scale, diff <= id_tol * scale);
  }
  {
    const double cont = continuity_residual(spec, s);
    const double scale = std::max(std::abs(sinit.amplitude), std::numeric_limits<double>::min());
    r.check("source_continuity", within(id_tol) + " x source scale", fmt(cont), cont / scale, cont <= id_tol * scale);
  }

  // Analytic gradients against the finite-difference oracle.
  Table comparison{"gradient_comparison", {"kind", "part", "max_abs_gradient", "fd_max_abs_diff", "fd_relative"}, {}};
  for (const auto kind : kinds) {
    const bool complex_kind = kind == LagrangianKind::Complex || kind == LagrangianKind::ComplexBornInfeld;
    const auto g_re = action_gradient(p, s, kind, k, ActionPart::Real);
    std::optional<PotentialGradient> g_im;
    if (complex_kind) g_im = action_gradient(p, s, kind, k, ActionPart::Imag);
    r.tables.push_back(gradient_table("gradient_" + lower(to_string(kind)), g_re, g_im ? &*g_im : nullptr));

    const double scale = std::max(g_re.max_abs(), std::numeric_limits<double>::min());
    if (!fd_check) {
      comparison.add({std::string(to_string(kind)), std::string("real"), g_re.max_abs(), std::nan(""), std::nan("")});
      continue;
    }
    const auto fd_re = finite_difference_gradient(p, s, kind, k, ActionPart::Real, fd_step);
    const double d_re = g_re.max_abs_diff(fd_re);
    comparison.add({std::string(to_string(kind)), std::string("real"), g_re.max_abs(), d_re, d_re / scale});
    r.check("fd_gradient/" + std::string(to_string(kind)) + "/real", within(fd_tol) + " relative",
            fmt(d_re / scale), d_re / scale, d_re <= fd_tol * scale);
    if (g_im) {
      // Im S is flat to roundoff here; measured against the real gradient's scale.
      const auto fd_im = finite_difference_gradient(p, s, kind, k, ActionPart::Imag, fd_step);
      const double d_im = g_im->max_abs_diff(fd_im);
      comparison.add({std::string(to_string(kind)), std::string("imag"), g_im->max_abs(), d_im, d_im / scale});
      r.check("fd_gradient/" + std::string(to_string(kind)) + "/imag", within(fd_tol) + " relative to real part",
              fmt(d_im / scale), d_im / scale, d_im <= fd_tol * scale);
    }
  }
  r.tables.push_back(std::move(comparison));

  // Equivalence report.
  if (!sopt.refine_levels.empty()) {
    const double lt = spec.length(0), lx = spec.length(1), ly = spec.length(2), lz = spec.length(3);
    sopt.refine = [=](int n) {
      const LatticeSpec fine{n, n, n, n, lt / n, lx / n, ly / n, lz / n};
      return make_potentials(fine, pinit);
    };
  }
  const auto rep = stationarity_equivalence_report(p, s, k, sopt);
  r.check("re_complex_vs_maxwell", within(eq_tol) + " relative", fmt(rep.re_complex_vs_maxwell),
          rep.re_complex_vs_maxwell_rel, rep.re_complex_vs_maxwell_rel <= eq_tol);
  r.check("bic_vs_complex", within(eq_tol) + " relative", fmt(rep.bic_vs_complex), rep.bic_vs_complex_rel,
          rep.bic_vs_complex_rel <= eq_tol,
          rep.ambiguous_nodes ? std::to_string(rep.ambiguous_nodes) + " branch-ambiguous nodes" : std::string());
  Table equivalence{"equivalence", {"quantity", "absolute", "relative"}, {}};
  equivalence.add({std::string("re_complex_vs_maxwell"), rep.re_complex_vs_maxwell, rep.re_complex_vs_maxwell_rel});
  equivalence.add({std::string("bic_vs_complex"), rep.bic_vs_complex, rep.bic_vs_complex_rel});
  equivalence.add({std::string("imag_gradient_per_volume"), rep.imag_gradient, std::nan("")});
  r.tables.push_back(std::move(equivalence));

  if (!rep.sweep.empty()) {
    Table sweep{"bi_sweep", {"amplitude", "difference"}, {}};
    Series series{"|grad S_BI - grad S_Maxwell|", {}, {}};
    bool all_positive = true;
    for (const auto& pt : rep.sweep) {
      sweep.add({pt.amplitude, pt.difference});
      series.x.push_back(pt.amplitude);
      series.y.push_back(pt.difference);
      all_positive = all_positive && pt.difference > 0.0;
    }
    r.tables.push_back(std::move(sweep));
    r.plots.push_back(Plot{"bi_sweep", "Born-Infeld gradient nonlinearity", "field amplitude", "max gradient difference",
                           {series}, true, true});
    r.check("bi_differs_from_maxwell", "> 0 at every amplitude", fmt(rep.sweep.front().difference), 0.0,
            all_positive);
    if (rep.sweep.size() >= 2) {
      const double dev = std::abs(rep.sweep_slope - slope_target);
      r.check("bi_sweep_slope", fmt(slope_target) + " +- " + fmt(slope_tol), fmt(rep.sweep_slope), dev,
              dev <= slope_tol);
    }
  }
  if (!rep.imag_trend.empty()) {
    Table trend{"imag_trend", {"n", "imag_gradient"}, {}};
    for (const auto& pt : rep.imag_trend) trend.add({static_cast<std::int64_t>(pt.n), pt.imag_gradient});
    r.tables.push_back(std::move(trend));
    r.note("imag_gradient_trend", "roundoff level", fmt(rep.imag_trend.back().imag_gradient),
           rep.imag_trend.back().imag_gradient, true,
           "grad Im S_C per unit volume; reported, not asserted");
  }
  return r;
}

}  // namespace cfcli
