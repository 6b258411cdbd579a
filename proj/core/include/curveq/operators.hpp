#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "curveq/curve.hpp"

namespace curveq {

using Complex = std::complex<double>;

enum class BoundaryCondition { periodic, dirichlet };

const char* to_string(BoundaryCondition bc);

/// Uniform grid in arc length.
///
/// Periodic grids hold s_i = i h, h = L/n (i = 0..n-1). Dirichlet grids hold
/// the interior nodes s_i = i h, h = L/(n+1) (i = 1..n), with psi = 0 at both
/// ends implied by truncating the stencils.
struct CurveGrid {
  int n = 0;
  double length = 0.0;
  double h = 0.0;
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  std::vector<double> s_values;
  /// Periodic grid over an open curve with constant coefficients, used only
  /// as an eigenvalue test fixture.
  bool fixture = false;

  /// Throws GridError for a periodic grid on an open curve or n < 8.
  static CurveGrid make(const CurveGeometry& geometry, int n, BoundaryCondition bc);
  static CurveGrid periodic_fixture(const CurveGeometry& geometry, int n);

  /// Rows [interior_begin, interior_end) are free of boundary truncation for
  /// products of two three-point stencils.
  int interior_begin() const noexcept { return bc == BoundaryCondition::periodic ? 0 : 2; }
  int interior_end() const noexcept { return bc == BoundaryCondition::periodic ? n : n - 2; }
};

struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;

  /// Throws OperatorError unless both are positive.
  void validate() const;
};

/// Discretized operator on a CurveGrid.
struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  CurveGrid grid;
  /// Asserted at construction: |M - M^dagger|_max <= 1e-13 |M|_max.
  bool hermitian = false;

  int size() const noexcept { return static_cast<int>(entries.rows()); }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const { return entries * psi; }
};

/// Cartesian components (x, y, z) of a vector operator.
using VectorOperator = std::array<OperatorMatrix, 3>;

/// Frenet data on every grid node, plus the arc-length derivatives of n_hat
/// needed to normal-order symmetrized products.
struct GridSamples {
  std::vector<FrenetSample> frames;
  std::vector<Vec3> n_s;
  std::vector<Vec3> n_ss;
};

/// Throws CurvatureError if a curved geometry has kappa < kappa_min at a node.
GridSamples sample_grid(const CurveGeometry& geometry, const CurveGrid& grid);

/// Antisymmetric central first difference and symmetric second difference.
Eigen::MatrixXd first_difference(const CurveGrid& grid);
Eigen::MatrixXd second_difference(const CurveGrid& grid);

/// H = -(hbar^2/2m) (D2 + diag(kappa^2/4)). Real symmetric by construction.
/// `geometric_potential = false` drops the kappa^2/4 term.
OperatorMatrix build_hamiltonian(const GridSamples& samples, const CurveGrid& grid, const PhysicalConstants& constants,
                                 bool geometric_potential = true);
OperatorMatrix build_hamiltonian(const CurveGeometry& geometry, const CurveGrid& grid,
                                 const PhysicalConstants& constants);

/// Position operator diag(a_c(s_i)).
VectorOperator build_position(const GridSamples& samples, const CurveGrid& grid);

/// Symmetric (manifestly tangential) geometric momentum
/// P_c = (-i hbar/2)(diag(t_c) D1 + D1 diag(t_c)). Exactly Hermitian.
VectorOperator build_geometric_momentum(const GridSamples& samples, const CurveGrid& grid,
                                        const PhysicalConstants& constants);
VectorOperator build_geometric_momentum(const CurveGeometry& geometry, const CurveGrid& grid,
                                        const PhysicalConstants& constants);

/// Geometric momentum in derivative-plus-curvature form
/// P_c = -i hbar (diag(t_c) D1 + diag(kappa n_c / 2)).
VectorOperator build_geometric_momentum_unsymmetrized(const GridSamples& samples, const CurveGrid& grid,
                                                      const PhysicalConstants& constants);

struct ForceOptions {
  /// Multiplies every curvature factor in the force build. Anything other
  /// than 1 is a deliberate corruption used as a negative control.
  double kappa_scale = 1.0;
};

/// Force operator with frame factors to the left of the difference
/// operators:
///   (hbar^2/2m) [ t (2 k^2 d + 2 k k')
///               + n (-2 k d^2 - 2 k' d + k^3/2 + tau^2 k/2 - k''/2)
///               + b (-2 tau k d - k tau'/2 - tau k') ].
/// Not exactly Hermitian; the defect is O(h^2) on smooth states.
VectorOperator build_force(const GridSamples& samples, const CurveGrid& grid, const PhysicalConstants& constants,
                           const ForceOptions& options = {});
VectorOperator build_force(const CurveGeometry& geometry, const CurveGrid& grid, const PhysicalConstants& constants,
                           const ForceOptions& options = {});

/// How n (kappa m v^2) + (kappa m v^2) n is discretized.
enum class Symmetrization {
  /// Product rule applied first, using the arc-length derivatives of n_hat:
  /// 2 n d^2 + 2 n' d + n'' - (kappa^2/2) n, then discretized.
  normal_ordered,
  /// Literal matrix products diag(n_c) V2 + V2 diag(n_c).
  matrix_product,
};

/// Constant-curvature force
///   F = (n/2) kappa m v^2 + m v^2 kappa (n/2) - n (hbar^2 kappa/4m)(2 kappa^2 + tau^2),
///   v^2 = -(hbar^2/m^2)(d^2 - kappa^2/4).
/// Throws OperatorError unless kappa and tau are constant to 1e-10 relative.
VectorOperator build_force_constant_curvature(const GridSamples& samples, const CurveGrid& grid,
                                              const PhysicalConstants& constants,
                                              Symmetrization mode = Symmetrization::normal_ordered);

/// v^2 = -(hbar^2/m^2)(D2 - diag(kappa^2/4)).
OperatorMatrix build_velocity_squared(const GridSamples& samples, const CurveGrid& grid,
                                      const PhysicalConstants& constants);

// ---------------------------------------------------------------------------
// Residuals
// ---------------------------------------------------------------------------

using LinearMap = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

/// Smooth test states on the grid: exp(2 pi i m s/L) for periodic grids,
/// sin(m pi s/L) for Dirichlet grids, m = 1, 2, 3.
std::vector<Eigen::VectorXcd> probe_states(const CurveGrid& grid);

/// max over probe states psi and interior rows i of |(R psi)_i|.
///
/// This is the norm every identity residual is measured in. Matrix norms of
/// the residuals do not converge: the stencil mismatch is O(h^2) only on
/// smooth states.
double interior_probe_norm(const CurveGrid& grid, const LinearMap& residual);

double probe_norm(const OperatorMatrix& m);
double difference_probe_norm(const OperatorMatrix& a, const OperatorMatrix& b);

/// max |M - M^dagger|.
double hermiticity_defect(const OperatorMatrix& m);
/// max |M_ij| (the max-entry norm).
double max_entry(const OperatorMatrix& m);

/// Interior probe norm of sum_c (diag(n_c) P_c + P_c diag(n_c)).
double tangentiality_residual(const VectorOperator& momentum, const GridSamples& samples, const CurveGrid& grid);

/// max_c of the interior probe norm of (m / i hbar)[diag(a_c), H] - P_c.
double kinematical_identity_residual(const VectorOperator& position, const OperatorMatrix& hamiltonian,
                                     const VectorOperator& momentum, const PhysicalConstants& constants);
double kinematical_identity_residual(const CurveGeometry& geometry, const CurveGrid& grid,
                                     const PhysicalConstants& constants);

/// max_c of the interior probe norm of (1 / i hbar)[P_c, H] - F_c.
double force_identity_residual(const VectorOperator& momentum, const OperatorMatrix& hamiltonian,
                               const VectorOperator& force, const PhysicalConstants& constants);

/// max_c of the interior probe norm of A_c - B_c.
double vector_difference_probe_norm(const VectorOperator& a, const VectorOperator& b);
double vector_probe_norm(const VectorOperator& a);

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

struct Spectrum {
  std::vector<double> eigenvalues;  ///< ascending
  /// Columns normalized so that sum_i h |psi_i|^2 = 1.
  Eigen::MatrixXcd eigenvectors;
  /// |H v - E v|_2 for the unit-2-norm eigenvector v.
  std::vector<double> residuals;
  double h = 0.0;
};

/// Lowest k eigenpairs of a Hermitian operator. Throws SolverError when a
/// residual exceeds 1e-9 |H|_inf or eigenvectors fail orthonormality.
Spectrum solve_spectrum(const OperatorMatrix& hamiltonian, int k);

/// sum_ij h psi_i^* M_ij psi_j. Throws OperatorError unless psi is grid
/// normalized to 1e-8.
Complex expectation(const OperatorMatrix& m, const Eigen::VectorXcd& psi);

/// Observed convergence orders log(r_k / r_{k+1}) / log(h_k / h_{k+1}).
std::vector<double> observed_orders(const std::vector<double>& spacings, const std::vector<double>& residuals);

}  // namespace curveq
