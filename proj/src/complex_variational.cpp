#include "cfaraday/complex_variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "cfaraday/error.hpp"

namespace cfaraday {

namespace {

using Cd = std::complex<double>;

const double kCbrtEps = std::cbrt(std::numeric_limits<double>::epsilon());

Cd central_difference(const HolomorphicFn& f, ComplexVector& z, std::size_t j, Cd direction, double h) {
  const Cd saved = z[j];
  z[j] = saved + direction * h;
  const Cd plus = f(z);
  z[j] = saved - direction * h;
  const Cd minus = f(z);
  z[j] = saved;
  return (plus - minus) / (2.0 * h);
}

double max_abs(const ComplexVector& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

ComplexVector gradient(const HolomorphicFn& f, ComplexSpan z) {
  return f.derivative ? f.derivative(z) : holomorphic_derivative(f, z);
}

}  // namespace

ComplexVector holomorphic_derivative(const HolomorphicFn& f, ComplexSpan z, const DerivativeOptions& options) {
  ComplexVector work(z.begin(), z.end());
  ComplexVector out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double h = std::max(1.0, std::abs(z[j])) * kCbrtEps;
    const Cd coarse = central_difference(f, work, j, 1.0, h);
    const Cd fine = central_difference(f, work, j, 1.0, 0.5 * h);
    if (!std::isfinite(std::abs(coarse)) || !std::isfinite(std::abs(fine)) ||
        std::abs(coarse - fine) > options.tolerance * std::max(1.0, std::abs(fine))) {
      throw Error(ErrorCode::NumericallyUnstable,
                  "derivative estimates disagree for component " + std::to_string(j) + " of " + f.name);
    }
    out[j] = (4.0 * fine - coarse) / 3.0;
  }
  return out;
}

double cauchy_riemann_check(const HolomorphicFn& f, ComplexSpan z) {
  ComplexVector work(z.begin(), z.end());
  double residual = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double h = std::max(1.0, std::abs(z[j])) * kCbrtEps;
    const Cd dx = central_difference(f, work, j, Cd(1.0, 0.0), h);
    const Cd dy = central_difference(f, work, j, Cd(0.0, 1.0), h);
    // dx = P_x + i Q_x, dy = P_y + i Q_y
    residual = std::max(residual, std::abs(dx.real() - dy.imag()) + std::abs(dy.real() + dx.imag()));
  }
  return residual;
}

MinimaxReport verify_saddle(const HolomorphicFn& f, ComplexSpan z0, double radius, int samples, double tolerance) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "saddle radius must be positive");
  if (samples < 8) throw Error(ErrorCode::InvalidArgument, "saddle verification needs at least 8 samples per axis");
  const std::size_t n = z0.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty point");

  std::size_t per_part = 1;
  for (std::size_t d = 0; d < n; ++d) {
    per_part *= static_cast<std::size_t>(samples);
    if (per_part > 20000) throw Error(ErrorCode::InvalidArgument, "saddle grid too large for this dimension");
  }

  std::vector<double> offsets(samples);
  for (int i = 0; i < samples; ++i) offsets[i] = radius * (2.0 * i / (samples - 1) - 1.0);

  // Multi-index `idx` in [0, samples)^n -> per-axis offsets.
  auto offset_of = [&](std::size_t flat, std::size_t axis) {
    for (std::size_t d = 0; d < axis; ++d) flat /= samples;
    return offsets[flat % samples];
  };

  MinimaxReport report;
  report.radius = radius;
  report.samples = samples;
  report.p0 = f(z0).real();

  ComplexVector z(n);
  std::vector<double> max_over_y(per_part, -std::numeric_limits<double>::infinity());
  std::vector<double> min_over_x(per_part, std::numeric_limits<double>::infinity());
  double scale = 0.0;
  for (std::size_t xi = 0; xi < per_part; ++xi) {
    for (std::size_t yi = 0; yi < per_part; ++yi) {
      for (std::size_t d = 0; d < n; ++d) {
        z[d] = z0[d] + Cd(offset_of(xi, d), offset_of(yi, d));
      }
      const double p = f(z).real();
      max_over_y[xi] = std::max(max_over_y[xi], p);
      min_over_x[yi] = std::min(min_over_x[yi], p);
      scale = std::max(scale, std::abs(p - report.p0));
    }
  }
  report.min_max = *std::min_element(max_over_y.begin(), max_over_y.end());
  report.max_min = *std::max_element(min_over_x.begin(), min_over_x.end());
  report.gap = std::max(std::abs(report.min_max - report.p0), std::abs(report.max_min - report.p0));
  report.scale = scale;
  const double spacing = 2.0 / (samples - 1);
  report.allowance = (tolerance + spacing * spacing) * scale;
  report.verified = report.gap <= report.allowance;
  return report;
}

SaddleResult find_stationary(const HolomorphicFn& f, ComplexSpan z_start, const StationaryOptions& options) {
  const std::size_t n = z_start.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty starting point");
  ComplexVector z(z_start.begin(), z_start.end());

  SaddleResult result;
  for (int iter = 0; iter <= options.max_iter; ++iter) {
    // Before the derivative: a non-analytic f may not have a stable one.
    const double cr = cauchy_riemann_check(f, z);
    if (!(cr <= options.cr_tolerance * std::max(1.0, std::abs(f(z))))) {
      throw Error(ErrorCode::NonAnalytic,
                  f.name + " fails the Cauchy-Riemann check (residual " + std::to_string(cr) + ")");
    }
    const ComplexVector g = gradient(f, z);
    const double norm = max_abs(g);
    result.iterations = iter;
    if (norm <= options.derivative_tolerance) {
      result.z0 = z;
      result.derivative_norm = norm;
      result.saddle = verify_saddle(f, z, options.saddle_radius, options.saddle_samples);
      result.saddle_verified = result.saddle.verified;
      result.minimax_gap = result.saddle.gap;
      return result;
    }
    if (iter == options.max_iter) break;

    // Jacobian of the gradient map, which is itself holomorphic.
    Eigen::MatrixXcd jac(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const double h = std::max(1.0, std::abs(z[k])) * kCbrtEps;
      ComplexVector zp = z;
      ComplexVector zm = z;
      zp[k] += h;
      zm[k] -= h;
      const ComplexVector gp = gradient(f, zp);
      const ComplexVector gm = gradient(f, zm);
      for (std::size_t j = 0; j < n; ++j) jac(j, k) = (gp[j] - gm[j]) / (2.0 * h);
    }
    Eigen::VectorXcd rhs(n);
    for (std::size_t j = 0; j < n; ++j) rhs(j) = -g[j];
    const Eigen::VectorXcd step = jac.fullPivLu().solve(rhs);
    if (!step.allFinite()) {
      throw Error(ErrorCode::NoConvergence, "singular Jacobian while searching for a stationary point of " + f.name);
    }

    double lambda = 1.0;
    ComplexVector trial(n);
    for (int halving = 0; halving < 40; ++halving) {
      for (std::size_t j = 0; j < n; ++j) trial[j] = z[j] + lambda * step(j);
      if (max_abs(gradient(f, trial)) < norm) break;
      lambda *= 0.5;
    }
    z = trial;
  }
  throw Error(ErrorCode::NoConvergence,
              f.name + ": no stationary point after " + std::to_string(options.max_iter) + " Newton iterations");
}

HolomorphicFn builtin_function(const std::string& name, std::complex<double> center) {
  HolomorphicFn f;
  f.name = name;
  if (name == "z2") {
    f.value = [](ComplexSpan z) { return z[0] * z[0]; };
    f.derivative = [](ComplexSpan z) { return ComplexVector{2.0 * z[0]}; };
  } else if (name == "shifted_z2") {
    f.value = [center](ComplexSpan z) { return (z[0] - center) * (z[0] - center); };
    f.derivative = [center](ComplexSpan z) { return ComplexVector{2.0 * (z[0] - center)}; };
  } else if (name == "cubic") {
    f.value = [](ComplexSpan z) { return z[0] * z[0] * z[0] - 3.0 * z[0]; };
    f.derivative = [](ComplexSpan z) { return ComplexVector{3.0 * z[0] * z[0] - 3.0}; };
  } else if (name == "exp_minus_z") {
    f.value = [](ComplexSpan z) { return std::exp(z[0]) - z[0]; };
    f.derivative = [](ComplexSpan z) { return ComplexVector{std::exp(z[0]) - 1.0}; };
  } else if (name == "sum_squares") {
    f.dimension = 2;
    f.value = [](ComplexSpan z) { return z[0] * z[0] + z[1] * z[1]; };
    f.derivative = [](ComplexSpan z) { return ComplexVector{2.0 * z[0], 2.0 * z[1]}; };
  } else if (name == "conj") {
    f.value = [](ComplexSpan z) { return std::conj(z[0]); };
  } else if (name == "abs2") {
    f.value = [](ComplexSpan z) { return Cd(std::norm(z[0]), 0.0); };
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown built-in function '" + name + "'");
  }
  return f;
}

std::vector<std::string> builtin_function_names() {
  return {"z2", "shifted_z2", "cubic", "exp_minus_z", "sum_squares", "conj", "abs2"};
}

}  // namespace cfaraday
