#include "cfaraday/electrostatics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cfaraday/error.hpp"
#include "cfaraday/lattice_action.hpp"

namespace cfaraday {

namespace {

constexpr double kPi = std::numbers::pi;

struct Integral {
  double value = 0.0;
  double error = 0.0;
};

template <class F>
Integral integrate_log(F&& density_times_r3, double r_min, double r_max, double tolerance) {
  // r = e^s, dr = r ds: the integrand 4 pi r^2 u dr becomes 4 pi r^3 u ds.
  Integral out;
  double l1 = 0.0;
  out.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double s) { return density_times_r3(std::exp(s)); }, std::log(r_min), std::log(r_max), 25, tolerance,
      &out.error, &l1);
  if (!std::isfinite(out.value) || out.error > 10.0 * tolerance * l1) {
    throw Error(ErrorCode::QuadratureToleranceNotMet,
                "error estimate " + std::to_string(out.error) + " for integral " + std::to_string(out.value));
  }
  return out;
}

}  // namespace

double bi_displacement(double e, BIParameter k) {
  const double ratio = e / k.value();
  const double radicand = (1.0 - ratio) * (1.0 + ratio);
  if (!(radicand > 0.0)) throw Error(ErrorCode::NegativeRadicand, "|E| must stay below k");
  return e / std::sqrt(radicand);
}

double bi_field(double d, BIParameter k) {
  return d / std::hypot(1.0, d / k.value());
}

double bi_saturation_gap(double d, BIParameter k) {
  const double x = std::abs(d) / k.value();
  const double s = std::hypot(1.0, x);
  return k.value() / (s * (s + x));
}

double bi_energy_density(double d, BIParameter k) {
  return d * d / (1.0 + std::hypot(1.0, d / k.value()));
}

double bi_radius(double q, BIParameter k) {
  return q == 0.0 ? 1.0 : std::sqrt(std::abs(q) / (4.0 * kPi * k.value()));
}

void ChargeProfile::validate() const {
  if (!std::isfinite(q)) throw Error(ErrorCode::NonFinite, "charge must be finite");
  for (std::size_t i = 0; i < r_samples.size(); ++i) {
    if (!(r_samples[i] > 0.0) || !std::isfinite(r_samples[i])) {
      throw Error(ErrorCode::InvalidArgument, "radii must be positive");
    }
    if (i > 0 && !(r_samples[i] > r_samples[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "radii must be strictly increasing");
    }
  }
}

std::vector<ProfilePoint> bi_pointcharge_profile(const ChargeProfile& c) {
  c.validate();
  if (c.q == 0.0) throw Error(ErrorCode::InvalidArgument, "profile needs a nonzero charge");
  std::vector<ProfilePoint> out;
  out.reserve(c.r_samples.size());
  for (const double r : c.r_samples) {
    ProfilePoint p;
    p.r = r;
    p.d = c.q / (4.0 * kPi * r * r);
    p.e = bi_field(p.d, c.k);
    p.saturation_gap = bi_saturation_gap(p.d, c.k);
    p.u_bi = bi_energy_density(p.d, c.k);
    p.u_maxwell = 0.5 * p.d * p.d;
    out.push_back(p);
  }
  return out;
}

EnergyStudy bi_electrostatic_energy(const ChargeProfile& c, double r_min, double r_max, const EnergyOptions& options) {
  c.validate();
  if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max)) {
    throw Error(ErrorCode::InvalidArgument, "energy interval needs 0 < r_min < r_max");
  }
  if (!(options.tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");

  const double q = c.q;
  const BIParameter k = c.k;
  auto evaluate = [&](double lo) {
    EnergyPoint pt;
    pt.r_min = lo;
    pt.u_maxwell_exact = q * q / (8.0 * kPi) * (1.0 / lo - 1.0 / r_max);
    if (q == 0.0) return pt;
    const auto bi = integrate_log(
        [&](double r) { return 4.0 * kPi * r * r * r * bi_energy_density(q / (4.0 * kPi * r * r), k); }, lo, r_max,
        options.tolerance);
    const auto mx = integrate_log([&](double r) { return q * q / (8.0 * kPi * r); }, lo, r_max, options.tolerance);
    pt.u_bi = bi.value;
    pt.error_bi = bi.error;
    pt.u_maxwell = mx.value;
    pt.error_maxwell = mx.error;
    return pt;
  };

  EnergyStudy study;
  study.r0 = bi_radius(q, k);
  study.at_r_min = evaluate(r_min);

  std::vector<double> xs, ys;
  for (const double factor : options.series_factors) {
    const double lo = factor * study.r0;
    if (!(lo < r_max)) throw Error(ErrorCode::InvalidArgument, "series radius exceeds r_max");
    study.series.push_back(evaluate(lo));
    xs.push_back(lo);
    ys.push_back(study.series.back().u_maxwell);
  }
  for (std::size_t i = 1; i < study.series.size(); ++i) {
    study.bi_differences.push_back(std::abs(study.series[i].u_bi - study.series[i - 1].u_bi));
  }

  if (q == 0.0) {
    study.bi_converged = true;
    return study;
  }
  if (xs.size() >= 2) study.maxwell_slope = loglog_slope(xs, ys);
  bool shrinking = !study.bi_differences.empty();
  for (std::size_t i = 1; i < study.bi_differences.size(); ++i) {
    shrinking = shrinking && study.bi_differences[i] < study.bi_differences[i - 1];
  }
  study.bi_converged =
      shrinking && study.bi_differences.back() <= 1e-3 * std::abs(study.series.back().u_bi);
  return study;
}

}  // namespace cfaraday
