#include "curveq/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "curveq/errors.hpp"

namespace curveq {
namespace {

constexpr Complex kI{0.0, 1.0};

// Calls f(j, direction) for the stencil neighbours i-1 (direction -1) and
// i+1 (direction +1) that exist under the grid's boundary condition.
template <typename F>
void for_each_neighbour(const CurveGrid& grid, int i, F&& f) {
  const int n = grid.n;
  for (int dir : {-1, 1}) {
    int j = i + dir;
    if (grid.bc == BoundaryCondition::periodic) {
      j = (j + n) % n;
    } else if (j < 0 || j >= n) {
      continue;
    }
    f(j, dir);
  }
}

OperatorMatrix make_operator(Eigen::MatrixXcd entries, const CurveGrid& grid, bool hermitian) {
  OperatorMatrix m{std::move(entries), grid, hermitian};
  if (hermitian) {
    const double defect = hermiticity_defect(m);
    if (defect > 1e-13 * max_entry(m)) {
      throw std::logic_error("operator flagged Hermitian is not: defect " + std::to_string(defect));
    }
  }
  return m;
}

void require_matching(const GridSamples& samples, const CurveGrid& grid) {
  if (static_cast<int>(samples.frames.size()) != grid.n) throw GridError("grid samples do not match the grid");
}

double component(const Vec3& v, int c) { return v[c]; }

// Diagonal-coefficient operator  sum_k diag(coeff_k) D_k  with D_0 = I,
// D_1 = first difference, D_2 = second difference, coefficients on the left.
Eigen::MatrixXcd left_stencil_operator(const CurveGrid& grid, const std::vector<double>& c0,
                                       const std::vector<double>& c1, const std::vector<double>& c2) {
  const int n = grid.n;
  const double h = grid.h;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    m(i, i) += c0[ui] - 2.0 * c2[ui] / (h * h);
    for_each_neighbour(grid, i, [&](int j, int dir) {
      m(i, j) += c2[ui] / (h * h) + dir * c1[ui] / (2.0 * h);
    });
  }
  return m;
}

Eigen::VectorXcd diag_apply(const std::vector<double>& d, const Eigen::VectorXcd& psi) {
  Eigen::VectorXcd out(psi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i) out[i] = d[static_cast<std::size_t>(i)] * psi[i];
  return out;
}

std::vector<double> normal_component(const GridSamples& samples, int c) {
  std::vector<double> out;
  out.reserve(samples.frames.size());
  for (const auto& f : samples.frames) out.push_back(component(f.n_hat, c));
  return out;
}

}  // namespace

const char* to_string(BoundaryCondition bc) { return bc == BoundaryCondition::periodic ? "periodic" : "dirichlet"; }

CurveGrid CurveGrid::make(const CurveGeometry& geometry, int n, BoundaryCondition bc) {
  if (n < 8) throw GridError("grid needs at least 8 points");
  if (bc == BoundaryCondition::periodic && !geometry.closed()) {
    throw GridError("periodic grid requires a closed curve");
  }
  CurveGrid g;
  g.n = n;
  g.length = geometry.length();
  g.bc = bc;
  g.s_values.resize(static_cast<std::size_t>(n));
  if (bc == BoundaryCondition::periodic) {
    g.h = g.length / n;
    for (int i = 0; i < n; ++i) g.s_values[static_cast<std::size_t>(i)] = i * g.h;
  } else {
    g.h = g.length / (n + 1);
    for (int i = 0; i < n; ++i) g.s_values[static_cast<std::size_t>(i)] = (i + 1) * g.h;
  }
  return g;
}

CurveGrid CurveGrid::periodic_fixture(const CurveGeometry& geometry, int n) {
  if (n < 8) throw GridError("grid needs at least 8 points");
  CurveGrid g;
  g.n = n;
  g.length = geometry.length();
  g.bc = BoundaryCondition::periodic;
  g.h = g.length / n;
  g.fixture = true;
  g.s_values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g.s_values[static_cast<std::size_t>(i)] = i * g.h;
  return g;
}

void PhysicalConstants::validate() const {
  if (!(hbar > 0.0) || !(mass > 0.0)) throw OperatorError("hbar and mass must be positive");
}

GridSamples sample_grid(const CurveGeometry& geometry, const CurveGrid& grid) {
  GridSamples out;
  out.frames.reserve(static_cast<std::size_t>(grid.n));
  out.n_s.reserve(static_cast<std::size_t>(grid.n));
  out.n_ss.reserve(static_cast<std::size_t>(grid.n));
  for (double s : grid.s_values) {
    const FrenetJet jet = geometry.frame_jet(s);
    out.frames.push_back(jet.sample());
    out.n_s.push_back(derivative(jet.n_hat, 1));
    out.n_ss.push_back(derivative(jet.n_hat, 2));
  }
  return out;
}

Eigen::MatrixXd first_difference(const CurveGrid& grid) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(grid.n, grid.n);
  for (int i = 0; i < grid.n; ++i) {
    for_each_neighbour(grid, i, [&](int j, int dir) { d(i, j) += dir / (2.0 * grid.h); });
  }
  return d;
}

Eigen::MatrixXd second_difference(const CurveGrid& grid) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(grid.n, grid.n);
  for (int i = 0; i < grid.n; ++i) {
    d(i, i) = -2.0 / (grid.h * grid.h);
    for_each_neighbour(grid, i, [&](int j, int) { d(i, j) += 1.0 / (grid.h * grid.h); });
  }
  return d;
}

OperatorMatrix build_hamiltonian(const GridSamples& samples, const CurveGrid& grid, const PhysicalConstants& constants,
                                 bool geometric_potential) {
  constants.validate();
  require_matching(samples, grid);
  const double pre = -constants.hbar * constants.hbar / (2.0 * constants.mass);
  const double h2 = grid.h * grid.h;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(grid.n, grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double kappa = samples.frames[static_cast<std::size_t>(i)].kappa;
    const double potential = geometric_potential ? kappa * kappa / 4.0 : 0.0;
    m(i, i) = pre * (-2.0 / h2 + potential);
    for_each_neighbour(grid, i, [&](int j, int) { m(i, j) += pre / h2; });
  }
  return make_operator(std::move(m), grid, true);
}

OperatorMatrix build_hamiltonian(const CurveGeometry& geometry, const CurveGrid& grid,
                                 const PhysicalConstants& constants) {
  return build_hamiltonian(sample_grid(geometry, grid), grid, constants);
}

VectorOperator build_position(const GridSamples& samples, const CurveGrid& grid) {
  require_matching(samples, grid);
  VectorOperator out;
  for (int c = 0; c < 3; ++c) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(grid.n, grid.n);
    for (int i = 0; i < grid.n; ++i) m(i, i) = samples.frames[static_cast<std::size_t>(i)].position[c];
    out[static_cast<std::size_t>(c)] = make_operator(std::move(m), grid, true);
  }
  return out;
}

VectorOperator build_geometric_momentum(const GridSamples& samples, const CurveGrid& grid,
                                        const PhysicalConstants& constants) {
  constants.validate();
  require_matching(samples, grid);
  VectorOperator out;
  const Complex pre = -kI * constants.hbar / 2.0;
  for (int c = 0; c < 3; ++c) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(grid.n, grid.n);
    for (int i = 0; i < grid.n; ++i) {
      const double ti = samples.frames[static_cast<std::size_t>(i)].t_hat[c];
      for_each_neighbour(grid, i, [&](int j, int dir) {
        const double tj = samples.frames[static_cast<std::size_t>(j)].t_hat[c];
        m(i, j) += pre * (ti + tj) * (dir / (2.0 * grid.h));
      });
    }
    out[static_cast<std::size_t>(c)] = make_operator(std::move(m), grid, true);
  }
  return out;
}

VectorOperator build_geometric_momentum(const CurveGeometry& geometry, const CurveGrid& grid,
                                        const PhysicalConstants& constants) {
  return build_geometric_momentum(sample_grid(geometry, grid), grid, constants);
}

VectorOperator build_geometric_momentum_unsymmetrized(const GridSamples& samples, const CurveGrid& grid,
                                                      const PhysicalConstants& constants) {
  constants.validate();
  require_matching(samples, grid);
  VectorOperator out;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> c0, c1, c2(static_cast<std::size_t>(grid.n), 0.0);
    for (const auto& f : samples.frames) {
      c0.push_back(f.kappa * f.n_hat[c] / 2.0);
      c1.push_back(f.t_hat[c]);
    }
    Eigen::MatrixXcd m = -kI * constants.hbar * left_stencil_operator(grid, c0, c1, c2);
    out[static_cast<std::size_t>(c)] = make_operator(std::move(m), grid, false);
  }
  return out;
}

VectorOperator build_force(const GridSamples& samples, const CurveGrid& grid, const PhysicalConstants& constants,
                           const ForceOptions& options) {
  constants.validate();
  require_matching(samples, grid);
  const double pre = constants.hbar * constants.hbar / (2.0 * constants.mass);
  const double q = options.kappa_scale;
  VectorOperator out;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> c0, c1, c2;
    for (const auto& f : samples.frames) {
      const double k = q * f.kappa, kp = q * f.kappa_s, kpp = q * f.kappa_ss;
      const double tau = f.tau, taup = f.tau_s;
      const double t = f.t_hat[c], nn = f.n_hat[c], b = f.b_hat[c];
      c2.push_back(pre * (-2.0 * k * nn));
      c1.push_back(pre * (2.0 * k * k * t - 2.0 * kp * nn - 2.0 * tau * k * b));
      c0.push_back(pre * (2.0 * k * kp * t + (k * k * k / 2.0 + tau * tau * k / 2.0 - kpp / 2.0) * nn -
                          (k * taup / 2.0 + tau * kp) * b));
    }
    out[static_cast<std::size_t>(c)] = make_operator(left_stencil_operator(grid, c0, c1, c2), grid, false);
  }
  return out;
}

VectorOperator build_force(const CurveGeometry& geometry, const CurveGrid& grid, const PhysicalConstants& constants,
                           const ForceOptions& options) {
  return build_force(sample_grid(geometry, grid), grid, constants, options);
}

OperatorMatrix build_velocity_squared(const GridSamples& samples, const CurveGrid& grid,
                                      const PhysicalConstants& constants) {
  constants.validate();
  require_matching(samples, grid);
  const double pre = -constants.hbar * constants.hbar / (constants.mass * constants.mass);
  std::vector<double> c0, c1(static_cast<std::size_t>(grid.n), 0.0), c2(static_cast<std::size_t>(grid.n), pre);
  for (const auto& f : samples.frames) c0.push_back(-pre * f.kappa * f.kappa / 4.0);
  return make_operator(left_stencil_operator(grid, c0, c1, c2), grid, true);
}

VectorOperator build_force_constant_curvature(const GridSamples& samples, const CurveGrid& grid,
                                              const PhysicalConstants& constants, Symmetrization mode) {
  constants.validate();
  require_matching(samples, grid);
  double kappa = 0.0, tau = 0.0;
  for (const auto& f : samples.frames) {
    kappa += f.kappa;
    tau += f.tau;
  }
  kappa /= grid.n;
  tau /= grid.n;
  const double scale = std::max(std::abs(kappa), std::abs(tau));
  for (const auto& f : samples.frames) {
    if (std::abs(f.kappa - kappa) > 1e-10 * scale || std::abs(f.tau - tau) > 1e-10 * scale) {
      throw OperatorError("curvature and torsion are not constant along the curve");
    }
  }

  const double hbar2 = constants.hbar * constants.hbar;
  const double m = constants.mass;
  const double quantum = hbar2 * kappa / (4.0 * m) * (2.0 * kappa * kappa + tau * tau);
  VectorOperator out;
  if (mode == Symmetrization::normal_ordered) {
    const double pre = -hbar2 * kappa / (2.0 * m);
    for (int c = 0; c < 3; ++c) {
      std::vector<double> c0, c1, c2;
      for (std::size_t i = 0; i < samples.frames.size(); ++i) {
        const double nn = samples.frames[i].n_hat[c];
        c2.push_back(pre * 2.0 * nn);
        c1.push_back(pre * 2.0 * samples.n_s[i][c]);
        c0.push_back(pre * (samples.n_ss[i][c] - kappa * kappa / 2.0 * nn) - quantum * nn);
      }
      out[static_cast<std::size_t>(c)] = make_operator(left_stencil_operator(grid, c0, c1, c2), grid, false);
    }
    return out;
  }

  const Eigen::MatrixXcd v2 = build_velocity_squared(samples, grid, constants).entries;
  for (int c = 0; c < 3; ++c) {
    const std::vector<double> nc = normal_component(samples, c);
    const Eigen::Map<const Eigen::VectorXd> n_vec(nc.data(), grid.n);
    // diag(n) V2 scales rows, V2 diag(n) scales columns.
    Eigen::MatrixXcd f = 0.5 * kappa * m *
                         (n_vec.cast<Complex>().asDiagonal() * v2 + v2 * n_vec.cast<Complex>().asDiagonal());
    f.diagonal() -= quantum * n_vec.cast<Complex>();
    out[static_cast<std::size_t>(c)] = make_operator(std::move(f), grid, false);
  }
  return out;
}

std::vector<Eigen::VectorXcd> probe_states(const CurveGrid& grid) {
  std::vector<Eigen::VectorXcd> probes;
  for (int mode = 1; mode <= 3; ++mode) {
    Eigen::VectorXcd psi(grid.n);
    for (int i = 0; i < grid.n; ++i) {
      const double s = grid.s_values[static_cast<std::size_t>(i)];
      if (grid.bc == BoundaryCondition::periodic) {
        psi[i] = std::exp(kI * (2.0 * std::numbers::pi * mode * s / grid.length));
      } else {
        psi[i] = std::sin(std::numbers::pi * mode * s / grid.length);
      }
    }
    probes.push_back(std::move(psi));
  }
  return probes;
}

double interior_probe_norm(const CurveGrid& grid, const LinearMap& residual) {
  double worst = 0.0;
  for (const auto& psi : probe_states(grid)) {
    const Eigen::VectorXcd r = residual(psi);
    for (int i = grid.interior_begin(); i < grid.interior_end(); ++i) worst = std::max(worst, std::abs(r[i]));
  }
  return worst;
}

double probe_norm(const OperatorMatrix& m) {
  return interior_probe_norm(m.grid, [&](const Eigen::VectorXcd& psi) { return m.apply(psi); });
}

double difference_probe_norm(const OperatorMatrix& a, const OperatorMatrix& b) {
  return interior_probe_norm(a.grid, [&](const Eigen::VectorXcd& psi) { return Eigen::VectorXcd(a.apply(psi) - b.apply(psi)); });
}

double hermiticity_defect(const OperatorMatrix& m) {
  return (m.entries - m.entries.adjoint()).cwiseAbs().maxCoeff();
}

double max_entry(const OperatorMatrix& m) { return m.entries.cwiseAbs().maxCoeff(); }

double tangentiality_residual(const VectorOperator& momentum, const GridSamples& samples, const CurveGrid& grid) {
  require_matching(samples, grid);
  std::array<std::vector<double>, 3> normals{normal_component(samples, 0), normal_component(samples, 1),
                                             normal_component(samples, 2)};
  return interior_probe_norm(grid, [&](const Eigen::VectorXcd& psi) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(psi.size());
    for (std::size_t c = 0; c < 3; ++c) {
      acc += diag_apply(normals[c], momentum[c].apply(psi)) + momentum[c].apply(diag_apply(normals[c], psi));
    }
    return acc;
  });
}

double kinematical_identity_residual(const VectorOperator& position, const OperatorMatrix& hamiltonian,
                                     const VectorOperator& momentum, const PhysicalConstants& constants) {
  const Complex pre = constants.mass / (kI * constants.hbar);
  double worst = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    worst = std::max(worst, interior_probe_norm(hamiltonian.grid, [&](const Eigen::VectorXcd& psi) {
      const Eigen::VectorXcd commutator =
          position[c].apply(hamiltonian.apply(psi)) - hamiltonian.apply(position[c].apply(psi));
      return Eigen::VectorXcd(pre * commutator - momentum[c].apply(psi));
    }));
  }
  return worst;
}

double kinematical_identity_residual(const CurveGeometry& geometry, const CurveGrid& grid,
                                     const PhysicalConstants& constants) {
  const GridSamples samples = sample_grid(geometry, grid);
  return kinematical_identity_residual(build_position(samples, grid), build_hamiltonian(samples, grid, constants),
                                       build_geometric_momentum(samples, grid, constants), constants);
}

double force_identity_residual(const VectorOperator& momentum, const OperatorMatrix& hamiltonian,
                               const VectorOperator& force, const PhysicalConstants& constants) {
  const Complex pre = 1.0 / (kI * constants.hbar);
  double worst = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    worst = std::max(worst, interior_probe_norm(hamiltonian.grid, [&](const Eigen::VectorXcd& psi) {
      const Eigen::VectorXcd commutator =
          momentum[c].apply(hamiltonian.apply(psi)) - hamiltonian.apply(momentum[c].apply(psi));
      return Eigen::VectorXcd(pre * commutator - force[c].apply(psi));
    }));
  }
  return worst;
}

double vector_difference_probe_norm(const VectorOperator& a, const VectorOperator& b) {
  double worst = 0.0;
  for (std::size_t c = 0; c < 3; ++c) worst = std::max(worst, difference_probe_norm(a[c], b[c]));
  return worst;
}

double vector_probe_norm(const VectorOperator& a) {
  double worst = 0.0;
  for (const auto& m : a) worst = std::max(worst, probe_norm(m));
  return worst;
}

std::vector<double> observed_orders(const std::vector<double>& spacings, const std::vector<double>& residuals) {
  if (spacings.size() != residuals.size()) throw std::invalid_argument("observed_orders: size mismatch");
  std::vector<double> orders;
  for (std::size_t k = 0; k + 1 < residuals.size(); ++k) {
    orders.push_back(std::log(residuals[k] / residuals[k + 1]) / std::log(spacings[k] / spacings[k + 1]));
  }
  return orders;
}

}  // namespace curveq
