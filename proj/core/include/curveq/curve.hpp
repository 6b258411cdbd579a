#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "curveq/expr.hpp"
#include "curveq/jet_vector.hpp"

namespace curveq {

using Vec3 = Eigen::Vector3d;

/// Embedded curve a(t) = (ax, ay, az)(t), t in [t_min, t_max].
struct CurveDefinition {
  ExprAst ax;
  ExprAst ay;
  ExprAst az;
  double t_min = 0.0;
  double t_max = 1.0;
  bool closed = false;
};

Vec3 position(const CurveDefinition& curve, double t);
/// Jets of the three components at `t` (series in t - t0).
JetVec3 position_jet(const CurveDefinition& curve, double t);
/// |a'(t)|.
double speed(const CurveDefinition& curve, double t);

/// Monotone map between the raw parameter t and arc length s.
///
/// Tabulated at uniform t-nodes; cumulative lengths come from adaptive
/// Gauss-Kronrod quadrature of |a'(t)|, and t(s) is recovered by bracketed
/// Newton iteration on the same integral, so the map is exact to quadrature
/// tolerance everywhere rather than interpolated.
class ArcLengthMap {
 public:
  ArcLengthMap(CurveDefinition curve, std::vector<double> t_nodes, std::vector<double> s_nodes);

  double length() const noexcept { return s_nodes_.back(); }
  double t_min() const noexcept { return t_nodes_.front(); }
  double t_max() const noexcept { return t_nodes_.back(); }
  const std::vector<double>& t_nodes() const noexcept { return t_nodes_; }
  const std::vector<double>& s_nodes() const noexcept { return s_nodes_; }

  double s_of_t(double t) const;
  /// Throws CurveDomainError for s outside [0, L].
  double t_of_s(double s) const;

 private:
  CurveDefinition curve_;
  std::vector<double> t_nodes_;
  std::vector<double> s_nodes_;
};

/// Throws RegularityError when |a'| vanishes on the domain.
ArcLengthMap arclength_map(const CurveDefinition& curve, int n_samples);

/// Frenet data at one arc-length point. Derivatives are with respect to s.
struct FrenetSample {
  double s = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 t_hat = Vec3::Zero();
  Vec3 n_hat = Vec3::Zero();
  Vec3 b_hat = Vec3::Zero();
  double kappa = 0.0;
  double tau = 0.0;
  double kappa_s = 0.0;
  double kappa_ss = 0.0;
  double tau_s = 0.0;
};

/// Frenet quantities as jets in arc length around s.
///
/// Valid orders: position and t_hat to 3, n_hat, b_hat and kappa to 2, tau
/// to 1. Coefficients above these are not meaningful.
struct FrenetJet {
  double s = 0.0;
  JetVec3 position;
  JetVec3 t_hat;
  JetVec3 n_hat;
  JetVec3 b_hat;
  Jet4 kappa;
  Jet4 tau;

  FrenetSample sample() const;
};

/// Curvature floor below which the Frenet normal is treated as undefined.
inline double kappa_min_for_length(double length) { return 1e-8 / length; }

/// Throws CurvatureError if kappa(s) < kappa_min and CurveDomainError for s
/// outside [0, L].
FrenetJet frenet_jet_at(const CurveDefinition& curve, const ArcLengthMap& map, double s);
FrenetSample frenet_at(const CurveDefinition& curve, const ArcLengthMap& map, double s);

/// A curve together with its arc-length map and a straight/curved
/// classification.
///
/// `frame` and `frame_jet` differ from the strict `frenet_at` only for
/// straight lines, where they return kappa = tau = 0 with a fixed orthonormal
/// basis of the (constant) normal plane instead of raising.
class CurveGeometry {
 public:
  static constexpr int default_samples = 256;

  /// Validates regularity and, for closed curves, endpoint closure.
  explicit CurveGeometry(CurveDefinition curve, int n_samples = default_samples);

  const CurveDefinition& definition() const noexcept { return curve_; }
  const ArcLengthMap& map() const noexcept { return map_; }
  double length() const noexcept { return map_.length(); }
  double kappa_min() const noexcept { return kappa_min_for_length(map_.length()); }
  bool straight() const noexcept { return straight_; }
  bool closed() const noexcept { return curve_.closed; }
  /// Largest curvature on the dense classification sample.
  double max_kappa() const noexcept { return max_kappa_; }

  Vec3 position(double s) const;
  FrenetSample frame(double s) const;
  FrenetJet frame_jet(double s) const;

 private:
  CurveDefinition curve_;
  ArcLengthMap map_;
  bool straight_ = false;
  double max_kappa_ = 0.0;
};

/// max |F^T F - I| for the frame matrix F = [t n b].
double frame_orthonormality_defect(const FrenetSample& f);

/// Largest residuals over `s_values` of the three frame-derivative relations
///   |t' - kappa n|,  |n' + kappa t - tau b|,  |b' + tau n|
/// with s-derivatives replaced by central differences of step h. Points whose
/// stencil leaves an open curve are skipped; closed curves wrap.
std::array<double, 3> frenet_serret_residuals(const CurveGeometry& geometry, const std::vector<double>& s_values,
                                              double h);

}  // namespace curveq
