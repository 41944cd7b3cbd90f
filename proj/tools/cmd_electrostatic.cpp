#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cfaraday/electrostatics.hpp"
#include "commands.hpp"

namespace cfcli {

using namespace cfaraday;

json bi_electrostatic_defaults() {
  return json{{"q", 1.0},
              {"k", 1.0},
              {"r_min", 0.0},
              {"r_max", 0.0},
              {"series_factors", {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}},
              {"profile_points", 200},
              {"profile_range", {1e-6, 1e4}},
              {"tolerance", 1e-12},
              {"maxwell_tolerance", 1e-10},
              {"slope_target", -1.0},
              {"slope_tolerance", 0.05},
              {"convergence_ratio", 1e-3},
              {"seed", 0}};
}

ReportEnvelope cmd_bi_electrostatic(const json& config) {
  const double q = get_double(config, "q");
  const BIParameter k(get_positive(config, "k"));
  const double r0 = bi_radius(q, k);
  // 0 selects the default radius in units of r0.
  const double r_min_cfg = get_double(config, "r_min");
  const double r_max_cfg = get_double(config, "r_max");
  if (r_min_cfg < 0.0 || r_max_cfg < 0.0) throw ConfigError("'r_min' and 'r_max' must be positive (0: default)");
  const double r_min = r_min_cfg > 0.0 ? r_min_cfg : 1e-5 * r0;
  const double r_max = r_max_cfg > 0.0 ? r_max_cfg : 100.0 * r0;
  if (!(r_min < r_max)) throw ConfigError("'r_min' must be smaller than 'r_max'");
  EnergyOptions options;
  options.series_factors = get_doubles(config, "series_factors", 0);
  for (const double f : options.series_factors) {
    if (!(f > 0.0) || !(f * r0 < r_max)) throw ConfigError("'series_factors' must lie in (0, r_max / r0)");
  }
  options.tolerance = get_positive(config, "tolerance");
  const int points = get_int(config, "profile_points", 2);
  const auto range = get_doubles(config, "profile_range", 2);
  if (range.size() != 2 || !(range[0] > 0.0) || !(range[1] > range[0])) {
    throw ConfigError("'profile_range' must be [lo, hi] with 0 < lo < hi");
  }
  const double maxwell_tol = get_positive(config, "maxwell_tolerance");
  const double slope_target = get_double(config, "slope_target");
  const double slope_tol = get_positive(config, "slope_tolerance");
  const double ratio = get_positive(config, "convergence_ratio");
  get_seed(config);

  ReportEnvelope r;
  Table profile{"profile", {"r", "d", "e", "saturation_gap", "u_bi", "u_maxwell"}, {}};
  if (q != 0.0) {
    ChargeProfile c{q, k, {}};
    for (int i = 0; i < points; ++i) {
      c.r_samples.push_back(r0 * range[0] * std::pow(range[1] / range[0], static_cast<double>(i) / (points - 1)));
    }
    const auto prof = bi_pointcharge_profile(c);
    bool bounded = true;
    double min_gap = k.value();
    Series e_series{"|E|", {}, {}}, d_series{"|D|", {}, {}};
    for (const auto& p : prof) {
      profile.add({p.r, p.d, p.e, p.saturation_gap, p.u_bi, p.u_maxwell});
      bounded = bounded && std::abs(p.e) <= k.value() && p.saturation_gap > 0.0;
      min_gap = std::min(min_gap, p.saturation_gap);
      e_series.x.push_back(p.r);
      e_series.y.push_back(std::abs(p.e));
      d_series.x.push_back(p.r);
      d_series.y.push_back(std::abs(p.d));
    }
    r.check("field_saturation", "|E| < k at every radius", "min k - |E| = " + fmt(min_gap), min_gap, bounded);
    r.plots.push_back(Plot{"profile", "Point charge field", "r", "field", {e_series, d_series}, true, true});
  }
  r.tables.push_back(std::move(profile));

  const auto study = bi_electrostatic_energy(ChargeProfile{q, k, {}}, r_min, r_max, options);
  Table energy{"energy", {"r_min", "u_bi", "u_maxwell", "u_maxwell_exact", "error_bi", "error_maxwell", "bi_difference"},
               {}};
  Series bi_series{"U_BI", {}, {}}, mx_series{"U_Maxwell", {}, {}};
  double worst = 0.0;
  bool below = true;
  for (std::size_t i = 0; i < study.series.size(); ++i) {
    const auto& pt = study.series[i];
    energy.add({pt.r_min, pt.u_bi, pt.u_maxwell, pt.u_maxwell_exact, pt.error_bi, pt.error_maxwell,
                i == 0 ? std::nan("") : study.bi_differences[i - 1]});
    bi_series.x.push_back(pt.r_min);
    bi_series.y.push_back(pt.u_bi);
    mx_series.x.push_back(pt.r_min);
    mx_series.y.push_back(pt.u_maxwell);
    if (q != 0.0) {
      worst = std::max(worst, std::abs(pt.u_maxwell - pt.u_maxwell_exact) / pt.u_maxwell_exact);
      below = below && pt.u_bi < pt.u_maxwell;
    }
  }
  r.tables.push_back(std::move(energy));
  r.plots.push_back(Plot{"energy", "Electrostatic energy outside r_min", "r_min", "U", {bi_series, mx_series}, true,
                         true});

  Table summary{"energy_at_r_min", {"r_min", "r_max", "r0", "u_bi", "u_maxwell", "u_maxwell_exact"}, {}};
  summary.add({r_min, r_max, study.r0, study.at_r_min.u_bi, study.at_r_min.u_maxwell, study.at_r_min.u_maxwell_exact});
  r.tables.push_back(std::move(summary));

  if (q == 0.0) {
    const double mag = std::abs(study.at_r_min.u_bi) + std::abs(study.at_r_min.u_maxwell);
    r.check("zero_charge_energy", "0", fmt(mag), mag, mag == 0.0);
    return r;
  }
  const double at_err = std::abs(study.at_r_min.u_maxwell - study.at_r_min.u_maxwell_exact) /
                        study.at_r_min.u_maxwell_exact;
  r.check("maxwell_closed_form", within(maxwell_tol) + " relative", fmt(std::max(worst, at_err)),
          std::max(worst, at_err), std::max(worst, at_err) <= maxwell_tol);
  if (study.series.size() >= 2) {
    const double dev = std::abs(study.maxwell_slope - slope_target);
    r.check("maxwell_slope", fmt(slope_target) + " +- " + fmt(slope_tol), fmt(study.maxwell_slope), dev,
            dev <= slope_tol);
    r.check("bi_below_maxwell", "U_BI < U_Maxwell", below ? "true" : "false", 0.0, below);
  }
  if (!study.bi_differences.empty()) {
    bool shrinking = true;
    for (std::size_t i = 1; i < study.bi_differences.size(); ++i) {
      shrinking = shrinking && study.bi_differences[i] < study.bi_differences[i - 1];
    }
    const double last = study.bi_differences.back() / std::abs(study.series.back().u_bi);
    r.check("bi_converges", "shrinking differences, last " + within(ratio) + " x U_BI", fmt(last), last,
            shrinking && last <= ratio);
  }
  return r;
}

}  // namespace cfcli
