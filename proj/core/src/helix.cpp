#include "curveq/helix.hpp"

#include <cmath>

#include "curveq/errors.hpp"

namespace curveq {

void HelixParams::validate() const {
  if (!(radius > 0.0)) throw CurveDomainError("helix radius must be positive");
  if (!(apex >= 0.0)) throw CurveDomainError("helix apex must be non-negative");
}

double HelixParams::speed() const noexcept { return std::sqrt(r2_plus_c2()); }

CurveDefinition helix_curve(const HelixParams& params, double turns) {
  params.validate();
  if (!(turns > 0.0)) throw CurveDomainError("helix needs a positive number of turns");
  using namespace expr;
  CurveDefinition c;
  c.ax = ExprAst(binary(ExprKind::multiply, constant(params.radius), unary(ExprKind::cos, variable())), "t");
  c.ay = ExprAst(binary(ExprKind::multiply, constant(params.radius), unary(ExprKind::sin, variable())), "t");
  c.az = ExprAst(binary(ExprKind::multiply, constant(params.apex), variable()), "t");
  c.t_min = 0.0;
  c.t_max = 2.0 * std::numbers::pi * turns;
  c.closed = params.apex == 0.0 && std::floor(turns) == turns;
  return c;
}

HelixHamiltonian helix_hamiltonian_coefficients(const HelixParams& params, const PhysicalConstants& constants) {
  params.validate();
  constants.validate();
  return {-constants.hbar * constants.hbar / (2.0 * constants.mass * params.r2_plus_c2()), params.sin2_alpha() / 4.0};
}

double helix_spectrum_analytic(const HelixParams& params, const PhysicalConstants& constants, int mode,
                               BoundaryCondition bc, double span) {
  params.validate();
  constants.validate();
  const double wavenumber = bc == BoundaryCondition::periodic ? 2.0 * std::numbers::pi * mode / span
                                                              : std::numbers::pi * mode / span;
  const double scale = constants.hbar * constants.hbar / (2.0 * constants.mass * params.r2_plus_c2());
  return scale * (wavenumber * wavenumber - params.sin2_alpha() / 4.0);
}

HelixOperators::HelixOperators(const HelixParams& params, const PhysicalConstants& constants)
    : params_(params), constants_(constants) {
  params_.validate();
  constants_.validate();
}

Vec3 HelixOperators::r_hat(double theta) const { return {std::cos(theta), std::sin(theta), 0.0}; }
Vec3 HelixOperators::theta_hat(double theta) const { return {-std::sin(theta), std::cos(theta), 0.0}; }

Vec3 HelixOperators::tangent(double theta) const {
  return (params_.kappa() * theta_hat(theta) + params_.tau() * z_hat()) * params_.speed();
}

Vec3 HelixOperators::normal(double theta) const { return -r_hat(theta); }

Vec3 HelixOperators::binormal(double theta) const {
  return (params_.kappa() * z_hat() - params_.tau() * theta_hat(theta)) * params_.speed();
}

Vec3 HelixOperators::momentum_derivative(double theta) const {
  return params_.kappa() * theta_hat(theta) + params_.tau() * z_hat();
}

Vec3 HelixOperators::momentum_zeroth(double theta) const { return -r_hat(theta) * params_.kappa() / 2.0; }

double HelixOperators::v2_prefactor() const noexcept {
  return -constants_.hbar * constants_.hbar / (constants_.mass * constants_.mass * params_.r2_plus_c2());
}

// With n = -r_hat(theta), theta = s / sqrt(R^2 + C^2):
//   dn/ds = -theta_hat / sqrt(R^2 + C^2),   d^2n/ds^2 = r_hat / (R^2 + C^2).
// The normal-ordered force is
//   -(hbar^2 kappa / 2m)(2 n d^2 + 2 n' d + n'' - kappa^2 n / 2) - quantum n.
Vec3 HelixOperators::force_second(double theta) const {
  const double pre = -constants_.hbar * constants_.hbar * params_.kappa() / (2.0 * constants_.mass);
  return pre * 2.0 * normal(theta);
}

Vec3 HelixOperators::force_first(double theta) const {
  const double pre = -constants_.hbar * constants_.hbar * params_.kappa() / (2.0 * constants_.mass);
  return pre * 2.0 * (-theta_hat(theta) / params_.speed());
}

Vec3 HelixOperators::force_zeroth(double theta) const {
  const double kappa = params_.kappa();
  const double pre = -constants_.hbar * constants_.hbar * kappa / (2.0 * constants_.mass);
  const Vec3 n_ss = r_hat(theta) / params_.r2_plus_c2();
  return pre * (n_ss - kappa * kappa / 2.0 * normal(theta)) - quantum_term() * normal(theta);
}

double HelixOperators::quantum_term() const noexcept {
  const double kappa = params_.kappa();
  const double tau = params_.tau();
  return constants_.hbar * constants_.hbar * kappa / (4.0 * constants_.mass) * (2.0 * kappa * kappa + tau * tau);
}

VectorOperator HelixOperators::force_matrix(const CurveGrid& grid) const {
  const double h = grid.h;
  VectorOperator out;
  for (int c = 0; c < 3; ++c) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(grid.n, grid.n);
    for (int i = 0; i < grid.n; ++i) {
      const double theta = grid.s_values[static_cast<std::size_t>(i)] / params_.speed();
      const double a = force_second(theta)[c];
      const double b = force_first(theta)[c];
      m(i, i) = force_zeroth(theta)[c] - 2.0 * a / (h * h);
      for (int dir : {-1, 1}) {
        int j = i + dir;
        if (grid.bc == BoundaryCondition::periodic) {
          j = (j + grid.n) % grid.n;
        } else if (j < 0 || j >= grid.n) {
          continue;
        }
        m(i, j) += a / (h * h) + dir * b / (2.0 * h);
      }
    }
    out[static_cast<std::size_t>(c)] = OperatorMatrix{std::move(m), grid, false};
  }
  return out;
}

}  // namespace curveq
