#pragma once

// Shared fixtures for the test programs: the four reference curves and a few
// oracles that never go through the library's jet machinery.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include <fmt/format.h>

#include "curveq/curve.hpp"
#include "curveq/expr.hpp"
#include "curveq/helix.hpp"

namespace curveq::testing {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline CurveDefinition expression_curve(const std::string& ax, const std::string& ay, const std::string& az,
                                        double t_min, double t_max, bool closed) {
  return CurveDefinition{parse_expression(ax), parse_expression(ay), parse_expression(az), t_min, t_max, closed};
}

inline CurveDefinition line_curve(double length = 1.0) {
  return expression_curve("t", "0", "0", 0.0, length, false);
}

inline CurveDefinition circle_curve(double radius = 1.0) { return helix_curve(HelixParams{radius, 0.0}); }

inline CurveDefinition reference_helix() { return helix_curve(HelixParams{3.0, 4.0}); }

/// Helix R=3, C=4 with seeded low-amplitude harmonics added to each
/// component. Amplitudes are small enough that the curvature stays well
/// away from zero, and kappa, tau vary along the curve.
inline CurveDefinition random_smooth_curve(std::uint64_t seed = 20240611) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-0.08, 0.08);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  auto harmonics = [&](const char* base) {
    std::string out = base;
    for (int k = 2; k <= 3; ++k) {
      out += fmt::format(" + ({:.17g})*sin({}*t + {:.17g})", amp(rng) / k, k, phase(rng));
    }
    return out;
  };
  return expression_curve(harmonics("3*cos(t)"), harmonics("3*sin(t)"), harmonics("4*t"), 0.0, kTwoPi, false);
}

/// Fourth-order central difference of a scalar function.
inline double central_derivative(const std::function<double(double)>& f, double t, double h) {
  return (8.0 * (f(t + h) - f(t - h)) - (f(t + 2 * h) - f(t - 2 * h))) / (12.0 * h);
}

/// k-th derivative by central differences, Richardson-extrapolated over
/// steps h and h/2. k in [0, 4].
inline double fd_derivative(const std::function<double(double)>& f, double t, int k, double h) {
  auto raw = [&](double step) {
    switch (k) {
      case 0: return f(t);
      case 1: return (f(t + step) - f(t - step)) / (2 * step);
      case 2: return (f(t + step) - 2 * f(t) + f(t - step)) / (step * step);
      case 3: return (f(t + 2 * step) - 2 * f(t + step) + 2 * f(t - step) - f(t - 2 * step)) / (2 * step * step * step);
      default:
        return (f(t + 2 * step) - 4 * f(t + step) + 6 * f(t) - 4 * f(t - step) + f(t - 2 * step)) /
               (step * step * step * step);
    }
  };
  const double coarse = raw(h), fine = raw(h / 2);
  return (4.0 * fine - coarse) / 3.0;
}

/// Curvature and torsion from raw parameter derivatives of the expression
/// values, |a' x a''| / |a'|^3 and (a' x a'') . a''' / |a' x a''|^2.
inline std::array<double, 2> kappa_tau_by_differences(const CurveDefinition& c, double t) {
  std::array<Vec3, 4> d;
  const std::array<const ExprAst*, 3> comps{&c.ax, &c.ay, &c.az};
  for (int k = 1; k <= 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      d[k][i] = fd_derivative([&](double x) { return eval(*comps[i], x); }, t, k, 1e-2);
    }
  }
  const Vec3 cr = d[1].cross(d[2]);
  return {cr.norm() / std::pow(d[1].norm(), 3), cr.dot(d[3]) / cr.squaredNorm()};
}

}  // namespace curveq::testing
