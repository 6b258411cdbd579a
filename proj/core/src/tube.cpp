#include "curveq/tube.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/LU>

#include "curveq/errors.hpp"

namespace curveq {
namespace {

void require_valid(double kappa, double q2, double s) {
  if (!(1.0 - kappa * q2 > 0.0)) {
    throw TubeValidityError("tube point outside coordinate validity (1 - kappa q2 <= 0) at s = " + std::to_string(s) +
                            ", q2 = " + std::to_string(q2));
  }
}

// Length scale of the geometry at a point: the step sizes used for finite
// differences and the eps sequence of the limit table are fractions of it.
double local_scale(const CurveGeometry& geometry, double kappa, double tau) {
  const double rate = std::max(std::abs(kappa), std::abs(tau));
  return rate > 0.0 ? std::min(geometry.length(), 1.0 / rate) : geometry.length();
}

// Tube fields as arc-length jets at fixed (q2, q3).
struct TubeJet {
  std::array<JetVec3, 3> covariant;
  std::array<JetVec3, 3> contravariant;
  Jet4 sqrt_g;
  std::array<JetVec3, 3> weighted;  // sqrt(G) u^i
};

TubeJet tube_jet(const FrenetJet& f, double q2, double q3) {
  require_valid(f.kappa.value(), q2, f.s);
  TubeJet out;
  const Jet4 one(1.0);
  out.covariant[0] = (one - Jet4(q2) * f.kappa) * f.t_hat - Jet4(q3) * f.tau * f.n_hat + Jet4(q2) * f.tau * f.b_hat;
  out.covariant[1] = f.n_hat;
  out.covariant[2] = f.b_hat;

  std::array<std::array<Jet4, 3>, 3> g;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      g[i][j] = dot(out.covariant[i], out.covariant[j]);
      g[j][i] = g[i][j];
    }
  }
  // Cofactor inverse, which is exact for jets.
  std::array<std::array<Jet4, 3>, 3> cof;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (j + 1) % 3, c1 = (j + 2) % 3;
      cof[i][j] = g[r0][c0] * g[r1][c1] - g[r0][c1] * g[r1][c0];
    }
  }
  const Jet4 det = g[0][0] * cof[0][0] + g[0][1] * cof[0][1] + g[0][2] * cof[0][2];
  out.sqrt_g = sqrt(det);
  for (int i = 0; i < 3; ++i) {
    JetVec3 acc{Jet4(0.0), Jet4(0.0), Jet4(0.0)};
    for (int j = 0; j < 3; ++j) acc = acc + (cof[j][i] / det) * out.covariant[j];
    out.contravariant[i] = acc;
    out.weighted[i] = out.sqrt_g * acc;
  }
  return out;
}

// Richardson-extrapolated first derivative of a vector field at x. Central
// when x +- h stays inside [lo, hi], otherwise one-sided second order.
Vec3 richardson_derivative(const std::function<Vec3(double)>& f, double x, double h, double lo, double hi) {
  auto diff = [&](double step) -> Vec3 {
    if (x - step >= lo && x + step <= hi) return (f(x + step) - f(x - step)) / (2.0 * step);
    if (x + 2.0 * step <= hi) return (-3.0 * f(x) + 4.0 * f(x + step) - f(x + 2.0 * step)) / (2.0 * step);
    return (3.0 * f(x) - 4.0 * f(x - step) + f(x - 2.0 * step)) / (2.0 * step);
  };
  return (4.0 * diff(h / 2.0) - diff(h)) / 3.0;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// sqrt(G) u^a at (q2, q3) on the frame of `sample`.
Vec3 weighted_contravariant(const FrenetSample& sample, double q2, double q3, int a) {
  const TubeMetric m = metric_at(sample, q2, q3);
  return std::sqrt(m.det_g) * m.contravariant(a);
}

// sum_a d_a (sqrt(G) u^a) by differences in q2 and q3.
Vec3 normal_divergence(const FrenetSample& sample, double q2, double q3, double h) {
  const Vec3 d2 = richardson_derivative([&](double x) { return weighted_contravariant(sample, x, q3, 1); }, q2, h, -kInf, kInf);
  const Vec3 d3 = richardson_derivative([&](double x) { return weighted_contravariant(sample, q2, x, 2); }, q3, h, -kInf, kInf);
  return d2 + d3;
}

double fd_step(const CurveGeometry& geometry, const FrenetSample& sample) {
  return 1e-3 * local_scale(geometry, sample.kappa, sample.tau);
}

}  // namespace

Vec3 TubeMetric::contravariant(int i) const {
  return g_inv(i, 0) * u.u1 + g_inv(i, 1) * u.u2 + g_inv(i, 2) * u.u3;
}

TangentVectors tangent_vectors(const FrenetSample& sample, double q2, double q3) {
  require_valid(sample.kappa, q2, sample.s);
  TangentVectors u;
  u.u1 = sample.t_hat * (1.0 - q2 * sample.kappa) - q3 * sample.tau * sample.n_hat + q2 * sample.tau * sample.b_hat;
  u.u2 = sample.n_hat;
  u.u3 = sample.b_hat;
  return u;
}

TubeMetric metric_at(const FrenetSample& sample, double q2, double q3) {
  TubeMetric m;
  m.u = tangent_vectors(sample, q2, q3);
  const std::array<const Vec3*, 3> u{&m.u.u1, &m.u.u2, &m.u.u3};
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      m.g(i, j) = u[static_cast<std::size_t>(i)]->dot(*u[static_cast<std::size_t>(j)]);
      m.g(j, i) = m.g(i, j);
    }
  }
  m.det_g = m.g.determinant();
  const double w = 1.0 - sample.kappa * q2;
  m.det_closed = w * w;
  m.g_inv = m.g.inverse();
  return m;
}

GammaField gamma_at(const CurveGeometry& geometry, double s, double q2, double q3) {
  const TubeJet tj = tube_jet(geometry.frame_jet(s), q2, q3);
  return {derivative(tj.weighted[0], 1) / (2.0 * tj.sqrt_g.value())};
}

GammaField gamma_finite_difference(const CurveGeometry& geometry, double s, double q2, double q3, double h) {
  const FrenetSample here = geometry.frame(s);
  auto weighted = [&](double x) { return weighted_contravariant(geometry.frame(x), q2, q3, 0); };
  const Vec3 d1 = richardson_derivative(weighted, s, h, 0.0, geometry.length());
  return {d1 / (2.0 * std::sqrt(metric_at(here, q2, q3).det_g))};
}

std::vector<TubePoint> random_tube_points(const CurveGeometry& geometry, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double radius = 0.5 / std::max(geometry.max_kappa(), 1.0 / geometry.length());
  std::vector<TubePoint> points;
  points.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const double s = geometry.length() * unit(rng);
    const double r = radius * std::sqrt(unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    points.push_back({s, r * std::cos(phi), r * std::sin(phi)});
  }
  return points;
}

double divergence_identity(const CurveGeometry& geometry, double s, double q2, double q3) {
  const FrenetJet f = geometry.frame_jet(s);
  const TubeJet tj = tube_jet(f, q2, q3);
  const FrenetSample sample = f.sample();
  const Vec3 along = derivative(tj.weighted[0], 1);
  const Vec3 across = normal_divergence(sample, q2, q3, fd_step(geometry, sample));
  return ((along + across) / tj.sqrt_g.value()).norm();
}

MomentumSplit momentum_field_split(const CurveGeometry& geometry, double s, double q2, double q3) {
  const FrenetJet f = geometry.frame_jet(s);
  const FrenetSample sample = f.sample();
  const TubeJet tj = tube_jet(f, q2, q3);
  const double sqrt_g = tj.sqrt_g.value();
  const Vec3 gamma = derivative(tj.weighted[0], 1) / (2.0 * sqrt_g);
  const std::array<Vec3, 3> up{value(tj.contravariant[0]), value(tj.contravariant[1]), value(tj.contravariant[2])};

  MomentumSplit out;
  out.tangential.derivative[0] = up[0];
  out.tangential.zeroth = gamma;
  out.normal.derivative[1] = up[1];
  out.normal.derivative[2] = up[2];
  out.normal.zeroth = -gamma;
  out.full.derivative = up;

  const double h = fd_step(geometry, sample);
  auto weighted = [&](double x) { return weighted_contravariant(geometry.frame(x), q2, q3, 0); };
  out.tangential_symmetrized.derivative[0] = up[0];
  out.tangential_symmetrized.zeroth = richardson_derivative(weighted, s, h, 0.0, geometry.length()) / (2.0 * sqrt_g);
  out.normal_symmetrized.derivative[1] = up[1];
  out.normal_symmetrized.derivative[2] = up[2];
  out.normal_symmetrized.zeroth = normal_divergence(sample, q2, q3, h) / (2.0 * sqrt_g);
  return out;
}

bool LimitReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const LimitEntry& e) { return e.pass; });
}

LimitReport limit_suite(const CurveGeometry& geometry, double s) {
  const FrenetJet f0 = geometry.frame_jet(s);
  const FrenetSample base = f0.sample();
  const double kappa = base.kappa;
  const double scale = local_scale(geometry, kappa, base.tau);
  const double rate = 1.0 / scale;

  LimitReport report;
  report.s = s;
  report.kappa = kappa;
  report.tau = base.tau;

  // Every quantity of the limit table at q2 = q3 = eps.
  struct Values {
    double u1_d1u2, u1_d1u3, two_u2_gamma, two_u3_gamma, u1_u1, ua_da_gamma, gamma_gamma;
    double ua_da_u1, u1_d1u1, two_u1_u2, two_u1_u3;
    double u1_minus_t, u2_minus_n, u3_minus_b, gamma_minus_half_kappa_n, g_minus_i, ginv_minus_i, det_g;
  };
  auto evaluate = [&](double eps) {
    const TubeJet tj = tube_jet(f0, eps, eps);
    const Vec3 u1 = value(tj.contravariant[0]);
    const Vec3 u2 = value(tj.contravariant[1]);
    const Vec3 u3 = value(tj.contravariant[2]);
    const Vec3 gamma = derivative(tj.weighted[0], 1) / (2.0 * tj.sqrt_g.value());
    const double h = 1e-2 * eps;
    auto gamma_at_q = [&](double q2, double q3) {
      const TubeJet t = tube_jet(f0, q2, q3);
      return Vec3(derivative(t.weighted[0], 1) / (2.0 * t.sqrt_g.value()));
    };
    auto u1_at_q = [&](double q2, double q3) { return metric_at(base, q2, q3).contravariant(0); };
    const Vec3 d2_gamma = richardson_derivative([&](double x) { return gamma_at_q(x, eps); }, eps, h, -kInf, kInf);
    const Vec3 d3_gamma = richardson_derivative([&](double x) { return gamma_at_q(eps, x); }, eps, h, -kInf, kInf);
    const Vec3 d2_u1 = richardson_derivative([&](double x) { return u1_at_q(x, eps); }, eps, h, -kInf, kInf);
    const Vec3 d3_u1 = richardson_derivative([&](double x) { return u1_at_q(eps, x); }, eps, h, -kInf, kInf);
    const TubeMetric m = metric_at(base, eps, eps);

    Values v{};
    v.u1_d1u2 = u1.dot(derivative(tj.contravariant[1], 1));
    v.u1_d1u3 = u1.dot(derivative(tj.contravariant[2], 1));
    v.two_u2_gamma = 2.0 * u2.dot(gamma);
    v.two_u3_gamma = 2.0 * u3.dot(gamma);
    v.u1_u1 = u1.dot(u1);
    v.ua_da_gamma = u2.dot(d2_gamma) + u3.dot(d3_gamma);
    v.gamma_gamma = gamma.dot(gamma);
    v.ua_da_u1 = u2.dot(d2_u1) + u3.dot(d3_u1);
    v.u1_d1u1 = u1.dot(derivative(tj.contravariant[0], 1));
    v.two_u1_u2 = 2.0 * u1.dot(u2);
    v.two_u1_u3 = 2.0 * u1.dot(u3);
    v.u1_minus_t = (u1 - base.t_hat).norm();
    v.u2_minus_n = (u2 - base.n_hat).norm();
    v.u3_minus_b = (u3 - base.b_hat).norm();
    v.gamma_minus_half_kappa_n = (gamma - 0.5 * kappa * base.n_hat).norm();
    v.g_minus_i = (m.g - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    v.ginv_minus_i = (m.g_inv - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    v.det_g = m.det_g;
    return v;
  };

  const std::vector<double> epsilons{1e-1 * scale, 1e-2 * scale, 1e-3 * scale, 1e-4 * scale};
  std::vector<Values> samples;
  for (double eps : epsilons) samples.push_back(evaluate(eps));

  auto add = [&](std::string name, double Values::*field, double target, double magnitude) {
    LimitEntry e;
    e.name = std::move(name);
    e.epsilons = epsilons;
    for (const auto& v : samples) e.values.push_back(v.*field);
    const std::size_t n = e.values.size();
    const double ratio = epsilons[n - 2] / epsilons[n - 1];
    e.limit = (ratio * e.values[n - 1] - e.values[n - 2]) / (ratio - 1.0);
    e.target = target;
    e.tolerance = 1e-4 * magnitude;
    const double d_coarse = std::abs(e.values[n - 3] - e.values[n - 2]);
    const double d_fine = std::abs(e.values[n - 2] - e.values[n - 1]);
    const double noise = 1e-13 * std::max(1.0, std::abs(e.values[n - 1])) * magnitude;
    if (d_fine <= noise && d_coarse <= noise) {
      e.observed_order = std::numeric_limits<double>::quiet_NaN();
    } else {
      e.observed_order = std::log(d_coarse / d_fine) / std::log(ratio);
    }
    const bool converges = std::isnan(e.observed_order) || e.observed_order >= 1.0 - 0.1 || d_fine <= noise;
    e.pass = std::abs(e.limit - target) <= e.tolerance && converges;
    report.entries.push_back(std::move(e));
  };

  const double rate2 = rate * rate;
  add("u1.(d1 u2) [d2 coefficient]", &Values::u1_d1u2, -kappa, rate);
  add("u1.(d1 u3) [d3 coefficient]", &Values::u1_d1u3, 0.0, rate);
  add("2 u2.Gamma [d2 coefficient]", &Values::two_u2_gamma, kappa, rate);
  add("2 u3.Gamma [d3 coefficient]", &Values::two_u3_gamma, 0.0, rate);
  add("u1.u1 [d1^2 coefficient]", &Values::u1_u1, 1.0, 1.0);
  add("u^a.d_a Gamma", &Values::ua_da_gamma, 0.5 * kappa * kappa, rate2);
  add("Gamma.Gamma", &Values::gamma_gamma, 0.25 * kappa * kappa, rate2);
  add("u^a.(d_a u1) [d1 coefficient]", &Values::ua_da_u1, 0.0, rate);
  add("u1.(d1 u1) [d1 coefficient]", &Values::u1_d1u1, 0.0, rate);
  add("2 u1.u2 [d1 d2 coefficient]", &Values::two_u1_u2, 0.0, 1.0);
  add("2 u1.u3 [d1 d3 coefficient]", &Values::two_u1_u3, 0.0, 1.0);
  add("|u^1 - t|", &Values::u1_minus_t, 0.0, 1.0);
  add("|u^2 - n|", &Values::u2_minus_n, 0.0, 1.0);
  add("|u^3 - b|", &Values::u3_minus_b, 0.0, 1.0);
  add("|Gamma - kappa n/2|", &Values::gamma_minus_half_kappa_n, 0.0, rate);
  add("max|G_ij - delta_ij|", &Values::g_minus_i, 0.0, 1.0);
  add("max|G^ij - delta^ij|", &Values::ginv_minus_i, 0.0, 1.0);
  add("det G", &Values::det_g, 1.0, 1.0);
  return report;
}

void to_json(nlohmann::json& j, const LimitEntry& e) {
  j = nlohmann::json{{"quantity", e.name},
                     {"epsilons", e.epsilons},
                     {"values", e.values},
                     {"limit", e.limit},
                     {"target", e.target},
                     {"tolerance", e.tolerance},
                     {"observed_order", std::isnan(e.observed_order) ? nlohmann::json(nullptr) : nlohmann::json(e.observed_order)},
                     {"pass", e.pass}};
}

void to_json(nlohmann::json& j, const LimitReport& r) {
  j = nlohmann::json{{"s", r.s}, {"kappa", r.kappa}, {"tau", r.tau}, {"entries", r.entries}};
}

}  // namespace curveq
