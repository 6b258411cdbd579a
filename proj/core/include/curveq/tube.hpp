#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "curveq/curve.hpp"

namespace curveq {

/// Point of the tube around the curve: arc length plus normal-plane offsets
/// along n_hat (q2) and b_hat (q3).
struct TubePoint {
  double s = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
};

/// Coordinate tangent vectors u_i = dR/dq^i.
struct TangentVectors {
  Vec3 u1;
  Vec3 u2;
  Vec3 u3;
};

struct TubeMetric {
  TangentVectors u;
  Eigen::Matrix3d g;      ///< G_ij = u_i . u_j
  double det_g = 0.0;     ///< direct 3x3 determinant of g
  double det_closed = 0.0;  ///< (1 - kappa q2)^2
  Eigen::Matrix3d g_inv;  ///< direct numerical inverse of g

  /// Contravariant vector u^i = G^{ij} u_j, i in {0, 1, 2}.
  Vec3 contravariant(int i) const;
};

struct GammaField {
  Vec3 gamma;
};

/// `count` tube points drawn from a seeded generator: s uniform on the curve,
/// (q2, q3) uniform in the disk of radius 1/(2 max(kappa_max, 1/L)), so that
/// 1 - kappa q2 >= 1/2 everywhere.
std::vector<TubePoint> random_tube_points(const CurveGeometry& geometry, int count, std::uint64_t seed);

/// Throws TubeValidityError unless 1 - kappa q2 > 0.
TangentVectors tangent_vectors(const FrenetSample& sample, double q2, double q3);
TubeMetric metric_at(const FrenetSample& sample, double q2, double q3);

/// Gamma = (1 / 2 sqrt(G)) d/ds (sqrt(G) u^1) at fixed (q2, q3), with the
/// s-derivative taken through arc-length jets of the frame.
GammaField gamma_at(const CurveGeometry& geometry, double s, double q2, double q3);

/// Same quantity with the s-derivative replaced by a Richardson-extrapolated
/// central difference (steps h and h/2). Used as a cross-check.
GammaField gamma_finite_difference(const CurveGeometry& geometry, double s, double q2, double q3, double h);

/// |(1/sqrt(G)) d_i (sqrt(G) u^i)|. The i = 1 term uses jets; the q2, q3
/// terms use Richardson-extrapolated differences. Vanishes identically.
double divergence_identity(const CurveGeometry& geometry, double s, double q2, double q3);

/// Coefficients of a first-order vector operator
///   -i hbar (sum_i derivative[i] d_i + zeroth)
/// in tube coordinates (i = 0, 1, 2 for q1, q2, q3).
struct FirstOrderCoefficients {
  std::array<Vec3, 3> derivative{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  Vec3 zeroth = Vec3::Zero();
};

struct MomentumSplit {
  FirstOrderCoefficients tangential;             ///< p_1H in Gamma form
  FirstOrderCoefficients normal;                 ///< p_perp,H in Gamma form
  FirstOrderCoefficients full;                   ///< -i hbar u^i d_i
  FirstOrderCoefficients tangential_symmetrized; ///< anticommutator form, d/ds by differences
  FirstOrderCoefficients normal_symmetrized;     ///< anticommutator form, d/dq_a by differences
};

MomentumSplit momentum_field_split(const CurveGeometry& geometry, double s, double q2, double q3);

/// One row of the squeezing-limit table: a quantity evaluated at
/// q2 = q3 = eps over a geometric eps sequence, linearly extrapolated.
struct LimitEntry {
  std::string name;
  std::vector<double> epsilons;
  std::vector<double> values;
  double limit = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  /// NaN when successive differences vanish to rounding (exact sequence).
  double observed_order = 0.0;
  bool pass = false;
};

struct LimitReport {
  double s = 0.0;
  double kappa = 0.0;
  double tau = 0.0;
  std::vector<LimitEntry> entries;

  bool all_pass() const;
};

/// Throws CurvatureError on curves with isolated vanishing curvature at s.
LimitReport limit_suite(const CurveGeometry& geometry, double s);

void to_json(nlohmann::json& j, const LimitEntry& entry);
void to_json(nlohmann::json& j, const LimitReport& report);

}  // namespace curveq
