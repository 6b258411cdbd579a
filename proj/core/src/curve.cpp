#include "curveq/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "curveq/errors.hpp"

namespace curveq {
namespace {

constexpr double kQuadratureTolerance = 1e-13;
constexpr unsigned kQuadratureDepth = 20;
constexpr double kClosureTolerance = 1e-9;
constexpr double kRegularityFloor = 1e-10;

double integrate_speed(const CurveDefinition& curve, double a, double b) {
  if (a == b) return 0.0;
  // Integrate over [0, 1]: the adaptive error test compares an estimate on
  // the reference interval against a tolerance scaled by the subinterval, so
  // short raw intervals never meet it.
  auto f = [&curve, a, b](double u) { return speed(curve, a + (b - a) * u); };
  return (b - a) * boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, 0.0, 1.0, kQuadratureDepth,
                                                                                 kQuadratureTolerance);
}

JetVec3 first_derivative(const JetVec3& a) { return differentiate(a); }

// Any unit vector orthogonal to t, chosen from the least-aligned axis.
std::pair<Vec3, Vec3> complement_basis(const Vec3& t) {
  Eigen::Index axis = 0;
  t.cwiseAbs().minCoeff(&axis);
  Vec3 e = Vec3::Zero();
  e[axis] = 1.0;
  Vec3 n = (e - e.dot(t) * t).normalized();
  Vec3 b = t.cross(n);
  return {n, b};
}

// Arc-length increment series around t0, and its reversion.
Jet4 parameter_increment(const JetVec3& a) {
  const JetVec3 a1 = first_derivative(a);
  const Jet4 sigma = sqrt(dot(a1, a1));
  return revert(integrate(sigma));
}

}  // namespace

Vec3 position(const CurveDefinition& curve, double t) { return {eval(curve.ax, t), eval(curve.ay, t), eval(curve.az, t)}; }

JetVec3 position_jet(const CurveDefinition& curve, double t) {
  return {eval_jet(curve.ax, t), eval_jet(curve.ay, t), eval_jet(curve.az, t)};
}

double speed(const CurveDefinition& curve, double t) {
  const JetVec3 a = position_jet(curve, t);
  return std::hypot(a[0].coefficient(1), a[1].coefficient(1), a[2].coefficient(1));
}

ArcLengthMap::ArcLengthMap(CurveDefinition curve, std::vector<double> t_nodes, std::vector<double> s_nodes)
    : curve_(std::move(curve)), t_nodes_(std::move(t_nodes)), s_nodes_(std::move(s_nodes)) {
  if (t_nodes_.size() < 2 || t_nodes_.size() != s_nodes_.size()) {
    throw CurveDomainError("arc-length table needs matching t and s nodes");
  }
  for (std::size_t i = 1; i < s_nodes_.size(); ++i) {
    if (!(s_nodes_[i] > s_nodes_[i - 1]) || !(t_nodes_[i] > t_nodes_[i - 1])) {
      throw CurveDomainError("arc-length table must be strictly increasing");
    }
  }
}

double ArcLengthMap::s_of_t(double t) const {
  if (t < t_min() || t > t_max()) throw CurveDomainError("parameter outside curve domain");
  auto it = std::upper_bound(t_nodes_.begin(), t_nodes_.end(), t);
  const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - t_nodes_.begin()) - 1));
  if (k + 1 == t_nodes_.size()) return s_nodes_.back();
  return s_nodes_[k] + integrate_speed(curve_, t_nodes_[k], t);
}

double ArcLengthMap::t_of_s(double s) const {
  const double length = this->length();
  if (!(s >= 0.0 && s <= length)) {
    throw CurveDomainError("arc length " + std::to_string(s) + " outside [0, " + std::to_string(length) + "]");
  }
  if (s == length) return t_max();
  auto it = std::upper_bound(s_nodes_.begin(), s_nodes_.end(), s);
  const auto k = static_cast<std::size_t>((it - s_nodes_.begin()) - 1);
  const double t_lo = t_nodes_[k];
  const double t_hi = t_nodes_[k + 1];
  const double s_lo = s_nodes_[k];
  if (s == s_lo) return t_lo;
  const double guess = t_lo + (t_hi - t_lo) * (s - s_lo) / (s_nodes_[k + 1] - s_lo);
  auto residual = [&](double t) {
    return std::make_tuple(s_lo + integrate_speed(curve_, t_lo, t) - s, speed(curve_, t));
  };
  std::uintmax_t max_iter = 100;
  return boost::math::tools::newton_raphson_iterate(residual, guess, t_lo, t_hi,
                                                    std::numeric_limits<double>::digits - 2, max_iter);
}

ArcLengthMap arclength_map(const CurveDefinition& curve, int n_samples) {
  if (n_samples < 16) throw CurveDomainError("arclength_map needs at least 16 samples");
  if (!(curve.t_max > curve.t_min)) throw CurveDomainError("curve domain must satisfy t_min < t_max");

  // Regularity on a sample four times denser than the table.
  const int dense = 4 * n_samples;
  std::vector<double> speeds(static_cast<std::size_t>(dense) + 1);
  double max_speed = 0.0;
  for (int i = 0; i <= dense; ++i) {
    const double t = curve.t_min + (curve.t_max - curve.t_min) * i / dense;
    const double v = speed(curve, t);
    if (!std::isfinite(v)) throw RegularityError(t, "non-finite |a'(t)|");
    speeds[static_cast<std::size_t>(i)] = v;
    max_speed = std::max(max_speed, v);
  }
  for (int i = 0; i <= dense; ++i) {
    const double v = speeds[static_cast<std::size_t>(i)];
    if (!(v > kRegularityFloor * max_speed) || v == 0.0) {
      throw RegularityError(curve.t_min + (curve.t_max - curve.t_min) * i / dense, "curve not regular, |a'(t)| vanishes");
    }
  }

  std::vector<double> t_nodes(static_cast<std::size_t>(n_samples) + 1);
  std::vector<double> s_nodes(t_nodes.size());
  for (int i = 0; i <= n_samples; ++i) {
    t_nodes[static_cast<std::size_t>(i)] = curve.t_min + (curve.t_max - curve.t_min) * i / n_samples;
  }
  t_nodes.back() = curve.t_max;
  s_nodes[0] = 0.0;
  for (std::size_t i = 1; i < t_nodes.size(); ++i) {
    s_nodes[i] = s_nodes[i - 1] + integrate_speed(curve, t_nodes[i - 1], t_nodes[i]);
  }
  return ArcLengthMap(curve, std::move(t_nodes), std::move(s_nodes));
}

FrenetSample FrenetJet::sample() const {
  FrenetSample out;
  out.s = s;
  out.position = value(position);
  out.t_hat = value(t_hat);
  out.n_hat = value(n_hat);
  out.b_hat = value(b_hat);
  out.kappa = kappa.value();
  out.tau = tau.value();
  out.kappa_s = kappa.derivative(1);
  out.kappa_ss = kappa.derivative(2);
  out.tau_s = tau.derivative(1);
  return out;
}

FrenetJet frenet_jet_at(const CurveDefinition& curve, const ArcLengthMap& map, double s) {
  const double t = map.t_of_s(s);
  const JetVec3 a = position_jet(curve, t);
  const JetVec3 a1 = differentiate(a);
  const JetVec3 a2 = differentiate(a1);
  const JetVec3 a3 = differentiate(a2);

  const Vec3 v1 = value(a1);
  const Vec3 v2 = value(a2);
  const double kappa_value = v1.cross(v2).norm() / std::pow(v1.norm(), 3);
  if (!(kappa_value >= kappa_min_for_length(map.length()))) {
    throw CurvatureError(s, "curvature below kappa_min, Frenet normal undefined");
  }

  const Jet4 sigma = sqrt(dot(a1, a1));
  const JetVec3 binormal_dir = cross(a1, a2);
  const Jet4 binormal_norm2 = dot(binormal_dir, binormal_dir);
  const Jet4 binormal_norm = sqrt(binormal_norm2);

  const Jet4 kappa_t = binormal_norm / (sigma * sigma * sigma);
  const Jet4 tau_t = dot(binormal_dir, a3) / binormal_norm2;
  const JetVec3 t_hat = a1 / sigma;
  const JetVec3 b_hat = binormal_dir / binormal_norm;
  const JetVec3 n_hat = cross(b_hat, t_hat);

  // Re-expand every field in the arc-length increment s - s0.
  const Jet4 dt = revert(integrate(sigma));
  FrenetJet out;
  out.s = s;
  out.position = compose(a, dt);
  out.t_hat = compose(t_hat, dt);
  out.n_hat = compose(n_hat, dt);
  out.b_hat = compose(b_hat, dt);
  out.kappa = compose(kappa_t, dt);
  out.tau = compose(tau_t, dt);
  return out;
}

FrenetSample frenet_at(const CurveDefinition& curve, const ArcLengthMap& map, double s) {
  return frenet_jet_at(curve, map, s).sample();
}

CurveGeometry::CurveGeometry(CurveDefinition curve, int n_samples)
    : curve_(std::move(curve)), map_(arclength_map(curve_, n_samples)) {
  if (curve_.closed) {
    const Vec3 gap = curveq::position(curve_, curve_.t_max) - curveq::position(curve_, curve_.t_min);
    if (gap.cwiseAbs().maxCoeff() > kClosureTolerance) {
      throw CurveDomainError("curve flagged closed but endpoints differ by " + std::to_string(gap.norm()));
    }
    const Vec3 t0 = value(differentiate(position_jet(curve_, curve_.t_min))).normalized();
    const Vec3 t1 = value(differentiate(position_jet(curve_, curve_.t_max))).normalized();
    if ((t1 - t0).cwiseAbs().maxCoeff() > kClosureTolerance) {
      throw CurveDomainError("curve flagged closed but end tangents differ");
    }
  }
  const int dense = 4 * n_samples;
  for (int i = 0; i <= dense; ++i) {
    const double t = curve_.t_min + (curve_.t_max - curve_.t_min) * i / dense;
    const JetVec3 a = position_jet(curve_, t);
    const Vec3 v1 = value(differentiate(a));
    const Vec3 v2 = derivative(differentiate(a), 1);
    max_kappa_ = std::max(max_kappa_, v1.cross(v2).norm() / std::pow(v1.norm(), 3));
  }
  straight_ = max_kappa_ < kappa_min();
}

Vec3 CurveGeometry::position(double s) const { return curveq::position(curve_, map_.t_of_s(s)); }

FrenetJet CurveGeometry::frame_jet(double s) const {
  if (!straight_) return frenet_jet_at(curve_, map_, s);
  const double t = map_.t_of_s(s);
  const JetVec3 a = position_jet(curve_, t);
  const Vec3 tangent = value(differentiate(a)).normalized();
  const auto [normal, binormal] = complement_basis(tangent);
  FrenetJet out;
  out.s = s;
  out.position = compose(a, parameter_increment(a));
  out.t_hat = constant_jet(tangent);
  out.n_hat = constant_jet(normal);
  out.b_hat = constant_jet(binormal);
  out.kappa = Jet4(0.0);
  out.tau = Jet4(0.0);
  return out;
}

FrenetSample CurveGeometry::frame(double s) const { return frame_jet(s).sample(); }

double frame_orthonormality_defect(const FrenetSample& f) {
  Eigen::Matrix3d frame;
  frame << f.t_hat, f.n_hat, f.b_hat;
  return (frame.transpose() * frame - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
}

std::array<double, 3> frenet_serret_residuals(const CurveGeometry& geometry, const std::vector<double>& s_values,
                                              double h) {
  const double length = geometry.length();
  std::array<double, 3> worst{0.0, 0.0, 0.0};
  for (double s : s_values) {
    double lo = s - h, hi = s + h;
    if (geometry.closed()) {
      lo = lo < 0.0 ? lo + length : lo;
      hi = hi > length ? hi - length : hi;
    } else if (lo < 0.0 || hi > length) {
      continue;
    }
    const FrenetSample f = geometry.frame(s);
    const FrenetSample a = geometry.frame(lo);
    const FrenetSample b = geometry.frame(hi);
    const Vec3 dt = (b.t_hat - a.t_hat) / (2.0 * h);
    const Vec3 dn = (b.n_hat - a.n_hat) / (2.0 * h);
    const Vec3 db = (b.b_hat - a.b_hat) / (2.0 * h);
    worst[0] = std::max(worst[0], (dt - f.kappa * f.n_hat).norm());
    worst[1] = std::max(worst[1], (dn + f.kappa * f.t_hat - f.tau * f.b_hat).norm());
    worst[2] = std::max(worst[2], (db + f.tau * f.n_hat).norm());
  }
  return worst;
}

}  // namespace curveq
