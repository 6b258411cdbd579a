#pragma once

#include <numbers>

#include "curveq/curve.hpp"
#include "curveq/operators.hpp"

namespace curveq {

/// Cylindrical helix r = R, z = C theta. Arc length s = sqrt(R^2 + C^2) theta.
struct HelixParams {
  double radius = 1.0;  ///< R > 0
  double apex = 0.0;    ///< C >= 0

  /// Throws CurveDomainError unless R > 0 and C >= 0.
  void validate() const;

  double r2_plus_c2() const noexcept { return radius * radius + apex * apex; }
  double speed() const noexcept;  ///< ds/dtheta
  double kappa() const noexcept { return radius / r2_plus_c2(); }
  double tau() const noexcept { return apex / r2_plus_c2(); }
  /// Stored through R and C directly, never through an inverse tangent.
  double sin2_alpha() const noexcept { return radius * radius / r2_plus_c2(); }
  double cos2_alpha() const noexcept { return apex * apex / r2_plus_c2(); }
};

/// (R cos t, R sin t, C t) for t in [0, 2 pi turns]. Closed only when C = 0
/// and `turns` is a whole number.
CurveDefinition helix_curve(const HelixParams& params, double turns = 1.0);

/// H_hlx = prefactor (d_theta^2 + potential_const).
struct HelixHamiltonian {
  double prefactor = 0.0;       ///< -hbar^2 / (2 m (R^2 + C^2))
  double potential_const = 0.0; ///< sin^2(alpha) / 4
};

HelixHamiltonian helix_hamiltonian_coefficients(const HelixParams& params, const PhysicalConstants& constants);

/// Energy of mode n. Periodic: theta in [0, span) with wavenumber 2 pi n / span.
/// Dirichlet: theta in [0, span], wavenumber n pi / span, n >= 1.
double helix_spectrum_analytic(const HelixParams& params, const PhysicalConstants& constants, int mode,
                               BoundaryCondition bc, double span = 2.0 * std::numbers::pi);

/// Closed-form coefficient fields of the helix operators, as functions of
/// the cylindrical angle theta. Vectors are Cartesian.
class HelixOperators {
 public:
  HelixOperators(const HelixParams& params, const PhysicalConstants& constants);

  const HelixParams& params() const noexcept { return params_; }

  Vec3 r_hat(double theta) const;
  Vec3 theta_hat(double theta) const;
  static Vec3 z_hat() { return Vec3::UnitZ(); }

  Vec3 tangent(double theta) const;   ///< (kappa theta_hat + tau z_hat) sqrt(R^2 + C^2)
  Vec3 normal(double theta) const;    ///< -r_hat
  Vec3 binormal(double theta) const;  ///< (kappa z_hat - tau theta_hat) sqrt(R^2 + C^2)

  /// p = -i hbar (momentum_derivative d_theta + momentum_zeroth).
  Vec3 momentum_derivative(double theta) const;  ///< kappa theta_hat + tau z_hat
  Vec3 momentum_zeroth(double theta) const;      ///< -r_hat kappa / 2

  /// v^2 = v2_prefactor (d_theta^2 - sin^2(alpha)/4).
  double v2_prefactor() const noexcept;

  /// Constant-curvature force in arc length,
  /// F_c = second_c d_s^2 + first_c d_s + zeroth_c.
  Vec3 force_second(double theta) const;
  Vec3 force_first(double theta) const;
  Vec3 force_zeroth(double theta) const;
  /// (hbar^2 kappa / 4m)(2 kappa^2 + tau^2), the quantum correction magnitude.
  double quantum_term() const noexcept;

  /// The force built from these fields on a grid over the helix.
  VectorOperator force_matrix(const CurveGrid& grid) const;

 private:
  HelixParams params_;
  PhysicalConstants constants_;
};

}  // namespace curveq
