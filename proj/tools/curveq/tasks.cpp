#include "tasks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "curveq/tube.hpp"

namespace curveq::app {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kOrderTarget = 2.0;
constexpr double kOrderTolerance = 0.3;
constexpr double kFrameTolerance = 1e-12;
constexpr double kMetricTolerance = 1e-12;
constexpr double kDivergenceTolerance = 1e-6;
constexpr double kSymmetricFormTolerance = 1e-6;
constexpr double kForceFormTolerance = 1e-12;
constexpr double kHelixTolerance = 1e-10;
constexpr double kHelixSpectrumTolerance = 1e-5;
constexpr double kSpectrumTolerance = 1e-4;

std::int64_t as_int(int v) { return v; }

RunReport new_report(const RunConfig& cfg) {
  RunReport r;
  r.task = to_string(cfg.task);
  r.config_digest = "sha256:" + cfg.digest;
  return r;
}

const char* curve_label(const CurveSpec& spec) {
  switch (spec.kind) {
    case CurveSpec::Kind::expressions: return "expressions";
    case CurveSpec::Kind::helix: return "helix";
    case CurveSpec::Kind::circle: return "circle";
    case CurveSpec::Kind::line: return "line";
  }
  return "?";
}

void add_curve_summary(RunReport& report, const RunConfig& cfg, const CurveGeometry& geometry) {
  report.summary.emplace_back("curve", std::string(curve_label(cfg.curve)));
  report.summary.emplace_back("length", geometry.length());
  report.summary.emplace_back("closed", geometry.closed());
  report.summary.emplace_back("straight", geometry.straight());
  report.summary.emplace_back("max_kappa", geometry.max_kappa());
  report.summary.emplace_back("hbar", cfg.constants.hbar);
  report.summary.emplace_back("mass", cfg.constants.mass);
}

struct Reference {
  double kappa = 0.0;
  double tau = 0.0;
  double length = 0.0;
};

std::optional<Reference> builtin_reference(const CurveSpec& spec) {
  switch (spec.kind) {
    case CurveSpec::Kind::helix:
      return Reference{spec.helix.kappa(), spec.helix.tau(), 2.0 * std::numbers::pi * spec.turns * spec.helix.speed()};
    case CurveSpec::Kind::circle:
      return Reference{1.0 / spec.size, 0.0, 2.0 * std::numbers::pi * spec.size};
    case CurveSpec::Kind::line:
      return Reference{0.0, 0.0, spec.size};
    case CurveSpec::Kind::expressions:
      return std::nullopt;
  }
  return std::nullopt;
}

bool constant_curvature(const GridSamples& samples, const CurveGeometry& geometry) {
  if (geometry.straight()) return false;
  double kmin = samples.frames.front().kappa, kmax = kmin;
  double tmin = samples.frames.front().tau, tmax = tmin;
  for (const auto& f : samples.frames) {
    kmin = std::min(kmin, f.kappa);
    kmax = std::max(kmax, f.kappa);
    tmin = std::min(tmin, f.tau);
    tmax = std::max(tmax, f.tau);
  }
  const double scale = std::max(std::abs(kmax), std::max(std::abs(tmin), std::abs(tmax)));
  return kmax - kmin <= 1e-10 * scale && tmax - tmin <= 1e-10 * scale;
}

double max_vector_entry(const VectorOperator& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, max_entry(c));
  return m;
}

double max_vector_entry_difference(const VectorOperator& a, const VectorOperator& b) {
  double m = 0.0;
  for (std::size_t c = 0; c < 3; ++c) m = std::max(m, (a[c].entries - b[c].entries).cwiseAbs().maxCoeff());
  return m;
}

double max_coefficient_difference(const FirstOrderCoefficients& a, const FirstOrderCoefficients& b) {
  double m = (a.zeroth - b.zeroth).cwiseAbs().maxCoeff();
  for (std::size_t i = 0; i < 3; ++i) m = std::max(m, (a.derivative[i] - b.derivative[i]).cwiseAbs().maxCoeff());
  return m;
}

FirstOrderCoefficients sum(const FirstOrderCoefficients& a, const FirstOrderCoefficients& b) {
  FirstOrderCoefficients out;
  for (std::size_t i = 0; i < 3; ++i) out.derivative[i] = a.derivative[i] + b.derivative[i];
  out.zeroth = a.zeroth + b.zeroth;
  return out;
}

// ---------------------------------------------------------------------------
// geometry

Table frenet_table(const CurveGeometry& geometry, const CurveGrid& grid, const PhysicalConstants& constants,
                   bool& pass) {
  Table t{"frenet",
          {"s", "kappa", "tau", "kappa_s", "kappa_ss", "tau_s", "t_x", "t_y", "t_z", "n_x", "n_y", "n_z", "b_x", "b_y",
           "b_z", "potential", "orthonormality", "target", "tolerance", "pass"},
          {}};
  const double pre = -constants.hbar * constants.hbar / (2.0 * constants.mass);
  for (double s : grid.s_values) {
    const FrenetSample f = geometry.frame(s);
    const double defect = frame_orthonormality_defect(f);
    const bool ok = defect <= kFrameTolerance;
    pass = pass && ok;
    t.add({s, f.kappa, f.tau, f.kappa_s, f.kappa_ss, f.tau_s, f.t_hat.x(), f.t_hat.y(), f.t_hat.z(), f.n_hat.x(),
           f.n_hat.y(), f.n_hat.z(), f.b_hat.x(), f.b_hat.y(), f.b_hat.z(), pre * f.kappa * f.kappa / 4.0, defect, 0.0,
           kFrameTolerance, ok});
  }
  return t;
}

}  // namespace

RunReport run_geometry(const RunConfig& cfg) {
  const CurveGeometry geometry(make_curve(cfg.curve));
  const BoundaryCondition bc = resolve_bc(cfg.grid, geometry.definition());
  const CurveGrid grid = CurveGrid::make(geometry, cfg.grid.n, bc);

  RunReport report = new_report(cfg);
  add_curve_summary(report, cfg, geometry);
  report.summary.emplace_back("bc", std::string(to_string(bc)));
  report.summary.emplace_back("n", as_int(grid.n));

  bool pass = true;
  report.tables.push_back(frenet_table(geometry, grid, cfg.constants, pass));

  if (const auto ref = builtin_reference(cfg.curve)) {
    Table t{"reference", {"quantity", "value", "target", "tolerance", "pass"}, {}};
    auto worst = [&](auto field, double target) {
      double value = target;
      for (double s : grid.s_values) {
        const double v = field(geometry.frame(s));
        if (std::abs(v - target) > std::abs(value - target)) value = v;
      }
      return value;
    };
    auto row = [&](const char* name, double value, double target) {
      const double tol = kHelixTolerance * std::max(1.0, std::abs(target));
      const bool ok = std::abs(value - target) <= tol;
      pass = pass && ok;
      t.add({std::string(name), value, target, tol, ok});
    };
    row("kappa", worst([](const FrenetSample& f) { return f.kappa; }, ref->kappa), ref->kappa);
    row("tau", worst([](const FrenetSample& f) { return f.tau; }, ref->tau), ref->tau);
    row("length", geometry.length(), ref->length);
    report.tables.push_back(std::move(t));
  }
  report.pass = pass;
  return report;
}

// ---------------------------------------------------------------------------
// spectrum

namespace {

// Analytic levels for builtin curves, ascending. Periodic modes come in the
// order 0, +-1, +-2, ...
std::optional<std::vector<double>> analytic_levels(const RunConfig& cfg, const CurveGrid& grid, int k) {
  const double scale = cfg.constants.hbar * cfg.constants.hbar / (2.0 * cfg.constants.mass);
  const bool periodic = grid.bc == BoundaryCondition::periodic;
  auto mode_of = [periodic](int j) { return periodic ? (j + 1) / 2 : j + 1; };
  std::vector<double> out;
  for (int j = 0; j < k; ++j) {
    const int m = mode_of(j);
    switch (cfg.curve.kind) {
      case CurveSpec::Kind::helix:
        out.push_back(helix_spectrum_analytic(cfg.curve.helix, cfg.constants, m, grid.bc,
                                              2.0 * std::numbers::pi * cfg.curve.turns));
        break;
      case CurveSpec::Kind::circle: {
        const double r = cfg.curve.size;
        const double wave = periodic ? m / r : m * std::numbers::pi / grid.length;
        out.push_back(scale * (wave * wave - 1.0 / (4.0 * r * r)));
        break;
      }
      case CurveSpec::Kind::line: {
        const double wave = m * std::numbers::pi / grid.length;
        out.push_back(scale * wave * wave);
        break;
      }
      case CurveSpec::Kind::expressions:
        return std::nullopt;
    }
  }
  return out;
}

CurveGrid spectrum_grid(const RunConfig& cfg, const CurveGeometry& geometry, BoundaryCondition bc) {
  if (bc == BoundaryCondition::periodic && !geometry.closed()) {
    if (cfg.curve.kind != CurveSpec::Kind::helix) {
      throw GridError("periodic grid requires a closed curve; the periodic fixture exists only for the helix builtin");
    }
    return CurveGrid::periodic_fixture(geometry, cfg.grid.n);
  }
  return CurveGrid::make(geometry, cfg.grid.n, bc);
}

}  // namespace

RunReport run_spectrum(const RunConfig& cfg) {
  const CurveGeometry geometry(make_curve(cfg.curve));
  const BoundaryCondition bc = resolve_bc(cfg.grid, geometry.definition());
  const CurveGrid grid = spectrum_grid(cfg, geometry, bc);
  const OperatorMatrix h = build_hamiltonian(sample_grid(geometry, grid), grid, cfg.constants);
  const Spectrum spectrum = solve_spectrum(h, cfg.k);
  const auto analytic = analytic_levels(cfg, grid, cfg.k);

  RunReport report = new_report(cfg);
  add_curve_summary(report, cfg, geometry);
  report.summary.emplace_back("bc", std::string(to_string(bc)));
  report.summary.emplace_back("fixture", grid.fixture);
  report.summary.emplace_back("n", as_int(grid.n));
  report.summary.emplace_back("h", grid.h);
  report.summary.emplace_back("k", as_int(cfg.k));

  const double norm_inf = h.entries.cwiseAbs().rowwise().sum().maxCoeff();
  const double unit = cfg.constants.hbar * cfg.constants.hbar / (2.0 * cfg.constants.mass) *
                      std::pow(2.0 * std::numbers::pi / grid.length, 2);
  Table t{"spectrum",
          {"index", "eigenvalue", "residual", "residual_tolerance", "analytic", "delta", "tolerance", "pass"},
          {}};
  bool pass = true;
  for (int j = 0; j < cfg.k; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const double e = spectrum.eigenvalues[uj];
    const double res = spectrum.residuals[uj];
    const double res_tol = 1e-9 * norm_inf;
    bool ok = res <= res_tol;
    Cell ref, delta, tol;
    if (analytic) {
      const double a = (*analytic)[uj];
      const double tolerance = kSpectrumTolerance * std::max(std::abs(a), unit);
      ok = ok && std::abs(e - a) <= tolerance;
      ref = a;
      delta = e - a;
      tol = tolerance;
    }
    pass = pass && ok;
    t.add({as_int(j), e, res, res_tol, ref, delta, tol, ok});
  }
  report.tables.push_back(std::move(t));
  report.pass = pass;
  return report;
}

// ---------------------------------------------------------------------------
// verify

namespace {

struct Series {
  std::vector<int> n;
  std::vector<double> h;
  std::vector<double> residual;
  std::vector<double> floor;  ///< rounding floor; all residuals below it means "exact"

  void push(int ni, double hi, double r, double f) {
    n.push_back(ni);
    h.push_back(hi);
    residual.push_back(r);
    floor.push_back(f);
  }
};

const std::vector<std::string> kConvergenceColumns{"invariant", "n",         "h",         "residual", "observed_order",
                                                   "criterion", "target",    "tolerance", "pass"};

bool add_order_rows(Table& t, const std::string& name, const Series& s) {
  bool exact = true;
  for (std::size_t k = 0; k < s.residual.size(); ++k) exact = exact && s.residual[k] <= s.floor[k];
  if (exact) {
    for (std::size_t k = 0; k < s.residual.size(); ++k) {
      t.add({name, as_int(s.n[k]), s.h[k], s.residual[k], kNaN, std::string("exact"), 0.0, s.floor[k], true});
    }
    return true;
  }
  const std::vector<double> orders = observed_orders(s.h, s.residual);
  auto ok = [](double o) { return std::isfinite(o) && std::abs(o - kOrderTarget) <= kOrderTolerance; };
  const bool verdict = std::all_of(orders.begin(), orders.end(), ok);
  for (std::size_t k = 0; k < s.residual.size(); ++k) {
    const double order = k == 0 ? kNaN : orders[k - 1];
    const bool row_pass = k == 0 ? verdict : ok(order);
    t.add({name, as_int(s.n[k]), s.h[k], s.residual[k], order, std::string("order"), kOrderTarget, kOrderTolerance,
           row_pass});
  }
  return verdict;
}

bool add_bound_row(Table& t, const std::string& name, int n, double h, double residual, double tolerance) {
  const bool ok = residual <= tolerance;
  t.add({name, as_int(n), h, residual, kNaN, std::string("bound"), 0.0, tolerance, ok});
  return ok;
}

}  // namespace

RunReport run_verify(const RunConfig& cfg) {
  const CurveGeometry geometry(make_curve(cfg.curve));
  const BoundaryCondition bc = resolve_bc(cfg.grid, geometry.definition());
  const PhysicalConstants& constants = cfg.constants;
  const double hbar = constants.hbar, mass = constants.mass;

  RunReport report = new_report(cfg);
  add_curve_summary(report, cfg, geometry);
  report.summary.emplace_back("bc", std::string(to_string(bc)));
  report.summary.emplace_back("corrupt_kappa", cfg.corrupt_kappa);

  Table conv{"convergence", kConvergenceColumns, {}};
  bool pass = true;
  Series kinematical, force, tangential, momentum_forms, force_forms, fs_t, fs_n, fs_b;
  bool constant = false;
  ForceOptions options;
  options.kappa_scale = cfg.corrupt_kappa;

  for (int n : cfg.grid.refinements) {
    const CurveGrid grid = CurveGrid::make(geometry, n, bc);
    const GridSamples samples = sample_grid(geometry, grid);
    const OperatorMatrix h = build_hamiltonian(samples, grid, constants);
    const VectorOperator position = build_position(samples, grid);
    const VectorOperator p = build_geometric_momentum(samples, grid, constants);
    const VectorOperator p_unsym = build_geometric_momentum_unsymmetrized(samples, grid, constants);
    const VectorOperator f = build_force(samples, grid, constants, options);
    const double hp = max_vector_entry(p), hh = max_entry(h);

    pass &= add_bound_row(conv, "hermiticity_H", n, grid.h, hermiticity_defect(h), 0.0);
    double p_defect = 0.0;
    for (const auto& c : p) p_defect = std::max(p_defect, hermiticity_defect(c));
    pass &= add_bound_row(conv, "hermiticity_P", n, grid.h, p_defect, 0.0);

    double frame_defect = 0.0;
    for (const auto& fr : samples.frames) frame_defect = std::max(frame_defect, frame_orthonormality_defect(fr));
    pass &= add_bound_row(conv, "frame_orthonormality", n, grid.h, frame_defect, kFrameTolerance);

    kinematical.push(n, grid.h, kinematical_identity_residual(position, h, p, constants),
                     1e-12 * mass / hbar * max_vector_entry(position) * hh);
    force.push(n, grid.h, force_identity_residual(p, h, f, constants), 1e-12 / hbar * hp * hh);
    tangential.push(n, grid.h, tangentiality_residual(p, samples, grid), 1e-12 * hp);
    momentum_forms.push(n, grid.h, vector_difference_probe_norm(p_unsym, p), 1e-12 * hp);

    const auto fs = frenet_serret_residuals(geometry, grid.s_values, grid.h);
    const double fs_floor = 1e-12 / grid.h;
    fs_t.push(n, grid.h, fs[0], fs_floor);
    fs_n.push(n, grid.h, fs[1], fs_floor);
    fs_b.push(n, grid.h, fs[2], fs_floor);

    constant = constant_curvature(samples, geometry);
    if (constant) {
      const VectorOperator f24 = build_force_constant_curvature(samples, grid, constants);
      const double scale = max_vector_entry(f24);
      pass &= add_bound_row(conv, "force_constant_curvature_match", n, grid.h, max_vector_entry_difference(f, f24),
                            kForceFormTolerance * scale);
      const VectorOperator f24_literal =
          build_force_constant_curvature(samples, grid, constants, Symmetrization::matrix_product);
      force_forms.push(n, grid.h, vector_difference_probe_norm(f24_literal, f24), 1e-12 * scale);
      if (cfg.curve.kind == CurveSpec::Kind::helix || cfg.curve.kind == CurveSpec::Kind::circle) {
        const HelixParams params = cfg.curve.kind == CurveSpec::Kind::helix ? cfg.curve.helix
                                                                            : HelixParams{cfg.curve.size, 0.0};
        const VectorOperator f_helix = HelixOperators(params, constants).force_matrix(grid);
        pass &= add_bound_row(conv, "force_closed_form_match", n, grid.h, max_vector_entry_difference(f24, f_helix),
                              kForceFormTolerance * scale);
      }
    }
  }
  pass &= add_order_rows(conv, "kinematical_identity", kinematical);
  pass &= add_order_rows(conv, "force_identity", force);
  pass &= add_order_rows(conv, "tangentiality", tangential);
  pass &= add_order_rows(conv, "momentum_forms", momentum_forms);
  pass &= add_order_rows(conv, "frenet_serret_t", fs_t);
  pass &= add_order_rows(conv, "frenet_serret_n", fs_n);
  pass &= add_order_rows(conv, "frenet_serret_b", fs_b);
  if (constant) pass &= add_order_rows(conv, "force_symmetrization_forms", force_forms);
  report.tables.push_back(std::move(conv));

  // Tube identities at seeded random points.
  Table tube{"tube", {"quantity", "points", "value", "target", "tolerance", "pass"}, {}};
  const std::vector<TubePoint> points = random_tube_points(geometry, cfg.tube_points, cfg.seed);
  double det_err = 0.0, inv_err = 0.0, div_err = 0.0, split_err = 0.0, tan_err = 0.0, nor_err = 0.0;
  for (const TubePoint& q : points) {
    const TubeMetric m = metric_at(geometry.frame(q.s), q.q2, q.q3);
    det_err = std::max(det_err, std::abs(m.det_g - m.det_closed));
    inv_err = std::max(inv_err, (m.g * m.g_inv - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
    div_err = std::max(div_err, divergence_identity(geometry, q.s, q.q2, q.q3));
    const MomentumSplit split = momentum_field_split(geometry, q.s, q.q2, q.q3);
    split_err = std::max(split_err, max_coefficient_difference(sum(split.tangential, split.normal), split.full));
    tan_err = std::max(tan_err, max_coefficient_difference(split.tangential, split.tangential_symmetrized));
    nor_err = std::max(nor_err, max_coefficient_difference(split.normal, split.normal_symmetrized));
  }
  auto tube_row = [&](const char* name, double value, double tol) {
    const bool ok = value <= tol;
    pass &= ok;
    tube.add({std::string(name), as_int(static_cast<int>(points.size())), value, 0.0, tol, ok});
  };
  tube_row("determinant_closed_form", det_err, kMetricTolerance);
  tube_row("inverse_metric_identity", inv_err, kMetricTolerance);
  tube_row("divergence_identity", div_err, kDivergenceTolerance);
  tube_row("momentum_split_sum", split_err, kMetricTolerance);
  tube_row("tangential_symmetric_form", tan_err, kSymmetricFormTolerance);
  tube_row("normal_symmetric_form", nor_err, kSymmetricFormTolerance);
  report.tables.push_back(std::move(tube));

  if (!geometry.straight()) {
    const LimitReport limits = limit_suite(geometry, geometry.length() / 2.0);
    Table t{"limits", {"quantity", "s", "limit", "observed_order", "target", "tolerance", "pass"}, {}};
    for (const LimitEntry& e : limits.entries) {
      pass &= e.pass;
      t.add({e.name, limits.s, e.limit, e.observed_order, e.target, e.tolerance, e.pass});
    }
    report.tables.push_back(std::move(t));
  }
  report.pass = pass;
  return report;
}

// ---------------------------------------------------------------------------
// helix-check

namespace {

struct Comparison {
  Table table{"helix", {"quantity", "pipeline", "reference", "delta", "tolerance", "kind", "pass"}, {}};
  bool pass = true;

  void check(const std::string& name, double pipeline, double reference, double tolerance) {
    const double delta = pipeline - reference;
    const bool ok = std::abs(delta) <= tolerance;
    pass = pass && ok;
    table.add({name, pipeline, reference, delta, tolerance, std::string("check"), ok});
  }
  void check_relative(const std::string& name, double pipeline, double reference, double rel) {
    check(name, pipeline, reference, rel * std::max(1.0, std::abs(reference)));
  }
  /// Alternate closed forms that are not expected to agree. Never affects
  /// the overall verdict.
  void info(const std::string& name, double pipeline, double reference) {
    const double delta = pipeline - reference;
    const double tol = kHelixTolerance * std::max(1.0, std::abs(reference));
    table.add({name, pipeline, reference, delta, tol, std::string("info"), std::abs(delta) <= tol});
  }
};

double max_abs(const Vec3& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

RunReport run_helix_check(const RunConfig& cfg) {
  const HelixParams& params = cfg.curve.helix;
  const PhysicalConstants& constants = cfg.constants;
  const double hbar2 = constants.hbar * constants.hbar, mass = constants.mass;
  const CurveGeometry geometry(make_curve(cfg.curve));
  const HelixOperators analytic(params, constants);
  const double span = 2.0 * std::numbers::pi * cfg.curve.turns;

  RunReport report = new_report(cfg);
  add_curve_summary(report, cfg, geometry);
  report.summary.emplace_back("R", params.radius);
  report.summary.emplace_back("C", params.apex);
  report.summary.emplace_back("turns", cfg.curve.turns);
  report.summary.emplace_back("sin2_alpha", params.sin2_alpha());
  report.summary.emplace_back("cos2_alpha", params.cos2_alpha());

  Comparison cmp;
  const double length = geometry.length();
  const double speed = length / span;  // ds/dtheta from the arc-length map
  cmp.check_relative("length", length, span * params.speed(), kHelixTolerance);

  // Frame-level quantities at a few interior points.
  double worst_kappa = params.kappa(), worst_tau = params.tau();
  double dn = 0.0, dpd = 0.0, dpz = 0.0, df2 = 0.0, df1 = 0.0, df0 = 0.0;
  double kappa = 0.0, tau = 0.0;
  const std::vector<double> fractions{0.2, 0.5, 0.8};
  for (double frac : fractions) {
    const double s = frac * length;
    const double theta = s / params.speed();
    const FrenetSample f = geometry.frame(s);
    kappa = f.kappa;
    tau = f.tau;
    if (std::abs(f.kappa - params.kappa()) > std::abs(worst_kappa - params.kappa())) worst_kappa = f.kappa;
    if (std::abs(f.tau - params.tau()) > std::abs(worst_tau - params.tau())) worst_tau = f.tau;
    dn = std::max(dn, max_abs(f.n_hat - analytic.normal(theta)));
    dpd = std::max(dpd, max_abs(f.t_hat / speed - analytic.momentum_derivative(theta)));
    dpz = std::max(dpz, max_abs(f.kappa * f.n_hat / 2.0 - analytic.momentum_zeroth(theta)));
    // General force coefficients, frame factors on the left.
    const double pre = hbar2 / (2.0 * mass);
    const double k = f.kappa, kp = f.kappa_s, kpp = f.kappa_ss, tw = f.tau, twp = f.tau_s;
    const Vec3 c2 = pre * (-2.0 * k * f.n_hat);
    const Vec3 c1 = pre * (2.0 * k * k * f.t_hat - 2.0 * kp * f.n_hat - 2.0 * tw * k * f.b_hat);
    const Vec3 c0 = pre * (2.0 * k * kp * f.t_hat + (k * k * k / 2.0 + tw * tw * k / 2.0 - kpp / 2.0) * f.n_hat -
                           (k * twp / 2.0 + tw * kp) * f.b_hat);
    df2 = std::max(df2, max_abs(c2 - analytic.force_second(theta)));
    df1 = std::max(df1, max_abs(c1 - analytic.force_first(theta)));
    df0 = std::max(df0, max_abs(c0 - analytic.force_zeroth(theta)));
  }
  cmp.check("kappa", worst_kappa, params.kappa(), kHelixTolerance);
  cmp.check("tau", worst_tau, params.tau(), kHelixTolerance);
  cmp.check("normal_vs_minus_r_hat", dn, 0.0, kHelixTolerance);
  cmp.check_relative("sin2_alpha", kappa * kappa / (kappa * kappa + tau * tau), params.sin2_alpha(), kHelixTolerance);

  const HelixHamiltonian hh = helix_hamiltonian_coefficients(params, constants);
  cmp.check_relative("hamiltonian_prefactor", -hbar2 / (2.0 * mass * speed * speed), hh.prefactor, kHelixTolerance);
  cmp.check_relative("hamiltonian_potential_const", kappa * kappa / 4.0 * speed * speed, hh.potential_const,
                     kHelixTolerance);
  cmp.check("momentum_derivative_coefficient", dpd, 0.0, kHelixTolerance);
  cmp.check("momentum_zeroth_coefficient", dpz, 0.0, kHelixTolerance);
  cmp.check_relative("v2_prefactor", -hbar2 / (mass * mass * speed * speed), analytic.v2_prefactor(), kHelixTolerance);
  cmp.check_relative("v2_potential_const", kappa * kappa / 4.0 * speed * speed, params.sin2_alpha() / 4.0,
                     kHelixTolerance);
  cmp.check("force_second_order_coefficient", df2, 0.0, kHelixTolerance);
  cmp.check("force_first_order_coefficient", df1, 0.0, kHelixTolerance);
  cmp.check("force_zeroth_order_coefficient", df0, 0.0, kHelixTolerance);
  const double quantum = hbar2 * kappa / (4.0 * mass) * (2.0 * kappa * kappa + tau * tau);
  cmp.check_relative("force_quantum_term", quantum, analytic.quantum_term(), kHelixTolerance);

  // Matrix-level comparisons on the open helix.
  {
    const CurveGrid grid = CurveGrid::make(geometry, cfg.grid.n, BoundaryCondition::dirichlet);
    const GridSamples samples = sample_grid(geometry, grid);
    const OperatorMatrix h = build_hamiltonian(samples, grid, constants);
    const double h_theta = grid.h / params.speed();
    double dh = 0.0;
    for (int i = 0; i < grid.n; ++i) {
      for (int j = std::max(0, i - 1); j <= std::min(grid.n - 1, i + 1); ++j) {
        const double d2 = i == j ? -2.0 / (h_theta * h_theta) : 1.0 / (h_theta * h_theta);
        const double ref = hh.prefactor * (d2 + (i == j ? hh.potential_const : 0.0));
        dh = std::max(dh, std::abs(h.entries(i, j).real() - ref));
      }
    }
    cmp.check("hamiltonian_matrix", dh / max_entry(h), 0.0, kHelixTolerance);
    const VectorOperator f_closed = analytic.force_matrix(grid);
    const double scale = max_vector_entry(f_closed);
    cmp.check("force_matrix_general", max_vector_entry_difference(build_force(samples, grid, constants), f_closed) / scale,
              0.0, kHelixTolerance);
    cmp.check("force_matrix_constant_curvature",
              max_vector_entry_difference(build_force_constant_curvature(samples, grid, constants), f_closed) / scale,
              0.0, kHelixTolerance);
  }

  // Spectrum on the periodic theta fixture.
  {
    const CurveGrid grid = geometry.closed() ? CurveGrid::make(geometry, cfg.grid.n, BoundaryCondition::periodic)
                                             : CurveGrid::periodic_fixture(geometry, cfg.grid.n);
    const Spectrum sp = solve_spectrum(build_hamiltonian(sample_grid(geometry, grid), grid, constants), cfg.k);
    const double scale = hbar2 / (2.0 * mass);
    const double unit = scale * std::pow(2.0 * std::numbers::pi / length, 2);
    for (int j = 0; j < cfg.k; ++j) {
      const int m = (j + 1) / 2;
      const double e = sp.eigenvalues[static_cast<std::size_t>(j)];
      const double continuum = helix_spectrum_analytic(params, constants, m, BoundaryCondition::periodic, span);
      const double sn = std::sin(std::numbers::pi * m / grid.n);
      const double discrete = scale * (4.0 * sn * sn / (grid.h * grid.h) - params.kappa() * params.kappa() / 4.0);
      const std::string label = "E[" + std::to_string(j) + "] mode " + std::to_string(m);
      cmp.check(label + " discrete", e, discrete, kHelixTolerance * std::max(std::abs(discrete), unit));
      cmp.check(label + " continuum", e, continuum, kHelixSpectrumTolerance * std::max(std::abs(continuum), unit));
    }
  }

  // Alternate closed forms that do not reconcile with the pipeline.
  const double r = params.radius, rc = params.r2_plus_c2();
  const double sin_alpha = std::sqrt(params.sin2_alpha());
  cmp.info("sin_alpha_as_R2_over_R2C2", sin_alpha, r * r / rc);
  cmp.info("force_classical_factor_sin_alpha_over_R", kappa, sin_alpha / r);
  cmp.info("force_quantum_term_over_cube", quantum,
           hbar2 * r / (4.0 * mass * rc * rc * rc) * (2.0 * params.sin2_alpha() + params.cos2_alpha()));
  {
    const double q2 = 0.25 / params.kappa(), q3 = 0.25 / params.kappa();
    const TubeMetric m = metric_at(geometry.frame(0.5 * length), q2, q3);
    const double a = 1.0 - kappa * q2;
    cmp.info("inverse_metric_11_full_numerator", m.g_inv(0, 0), (a * a + tau * tau * (q2 * q2 + q3 * q3)) / (a * a));
    cmp.info("inverse_metric_12_quadratic", m.g_inv(0, 1), -tau * tau * q3 * q3 / (a * a));
    cmp.info("inverse_metric_13_quadratic", m.g_inv(0, 2), -tau * tau * q2 * q2 / (a * a));
  }

  report.tables.push_back(std::move(cmp.table));
  report.pass = cmp.pass;
  return report;
}

RunReport run_task(const RunConfig& cfg) {
  switch (cfg.task) {
    case Task::geometry: return run_geometry(cfg);
    case Task::spectrum: return run_spectrum(cfg);
    case Task::verify: return run_verify(cfg);
    case Task::helix_check: return run_helix_check(cfg);
  }
  throw ConfigError("unknown task");
}

}  // namespace curveq::app
