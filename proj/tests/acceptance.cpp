// Acceptance suite. Prints one PASS/FAIL line per criterion, followed by
// indented detail lines, and exits 0 when the set of failing criteria equals
// the set named with --expect-fail (empty by default).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "curveq/curve.hpp"
#include "curveq/helix.hpp"
#include "curveq/operators.hpp"
#include "curveq/tube.hpp"
#include "support.hpp"

namespace {

using namespace curveq;
using Clock = std::chrono::steady_clock;

constexpr double kOrderTarget = 2.0;
constexpr double kOrderTolerance = 0.3;
const PhysicalConstants kUnit{};
const std::vector<int> kRefinements{256, 512, 1024};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;

  void require(bool ok, std::string line) {
    pass = pass && ok;
    details.push_back(fmt::format("{} {}", ok ? "ok  " : "FAIL", line));
  }
};

/// Residuals of one identity over the refinement sequence, with the rounding
/// floor below which a residual counts as zero.
struct Series {
  std::vector<double> h, residual, floor;

  void push(double hh, double r, double f) {
    h.push_back(hh);
    residual.push_back(r);
    floor.push_back(f);
  }
  bool exact() const {
    for (std::size_t k = 0; k < residual.size(); ++k)
      if (residual[k] > floor[k]) return false;
    return true;
  }
  std::vector<double> orders() const { return observed_orders(h, residual); }
  bool order_ok() const {
    const auto o = orders();
    return std::all_of(o.begin(), o.end(),
                       [](double x) { return std::isfinite(x) && std::abs(x - kOrderTarget) <= kOrderTolerance; });
  }
  std::string describe() const {
    if (exact()) return fmt::format("exact (residuals {:.2e} .. {:.2e} below rounding floor)", residual.front(), residual.back());
    std::string out = "residuals";
    for (double r : residual) out += fmt::format(" {:.3e}", r);
    out += ", orders";
    for (double o : orders()) out += fmt::format(" {:.3f}", o);
    return out;
  }
};

double vector_max_entry(const VectorOperator& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, max_entry(c));
  return m;
}

double vector_max_difference(const VectorOperator& a, const VectorOperator& b) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c) m = std::max(m, (a[c].entries - b[c].entries).cwiseAbs().maxCoeff());
  return m;
}

struct CurveCase {
  std::string name;
  CurveGeometry geometry;
  BoundaryCondition bc;
  bool constant_curvature = false;

  // Filled by study().
  double hermiticity_h = 0.0;
  double hermiticity_p = 0.0;
  double hermiticity_scale = 0.0;
  Series kinematical, force, tangential, fs[3];
  double force_forms_gap = 0.0;  ///< worst |F(general) - F(constant)| / max|F(constant)|
  double frame_defect = 0.0;
  double seconds = 0.0;
};

void study(CurveCase& c) {
  const auto start = Clock::now();
  for (int n : kRefinements) {
    const CurveGrid grid = CurveGrid::make(c.geometry, n, c.bc);
    const GridSamples samples = sample_grid(c.geometry, grid);
    const OperatorMatrix h = build_hamiltonian(samples, grid, kUnit);
    const VectorOperator x = build_position(samples, grid);
    const VectorOperator p = build_geometric_momentum(samples, grid, kUnit);
    const VectorOperator f = build_force(samples, grid, kUnit);
    const double hp = vector_max_entry(p), hh = max_entry(h);

    c.hermiticity_h = std::max(c.hermiticity_h, hermiticity_defect(h));
    for (const auto& pc : p) c.hermiticity_p = std::max(c.hermiticity_p, hermiticity_defect(pc));
    c.hermiticity_scale = std::max({c.hermiticity_scale, hh, hp});

    c.kinematical.push(grid.h, kinematical_identity_residual(x, h, p, kUnit),
                       1e-12 * kUnit.mass / kUnit.hbar * vector_max_entry(x) * hh);
    c.force.push(grid.h, force_identity_residual(p, h, f, kUnit), 1e-12 / kUnit.hbar * hp * hh);
    c.tangential.push(grid.h, tangentiality_residual(p, samples, grid), 1e-12 * hp);

    const auto fs = frenet_serret_residuals(c.geometry, grid.s_values, grid.h);
    for (int r = 0; r < 3; ++r) c.fs[r].push(grid.h, fs[r], 1e-12 / grid.h);
    for (const auto& fr : samples.frames) c.frame_defect = std::max(c.frame_defect, frame_orthonormality_defect(fr));

    if (c.constant_curvature) {
      const VectorOperator f24 = build_force_constant_curvature(samples, grid, kUnit);
      c.force_forms_gap = std::max(c.force_forms_gap, vector_max_difference(f, f24) / vector_max_entry(f24));
    }
  }
  c.seconds = seconds_since(start);
}

std::vector<CurveCase> make_cases() {
  std::vector<CurveCase> cases;
  cases.push_back({"line", CurveGeometry(testing::line_curve()), BoundaryCondition::dirichlet});
  cases.push_back({"circle", CurveGeometry(testing::circle_curve()), BoundaryCondition::periodic, true});
  cases.push_back({"helix", CurveGeometry(testing::reference_helix()), BoundaryCondition::dirichlet, true});
  cases.push_back({"random", CurveGeometry(testing::random_smooth_curve()), BoundaryCondition::dirichlet});
  return cases;
}

// ---------------------------------------------------------------------------

Outcome geometric_potential_shift() {
  Outcome out;
  const auto start = Clock::now();
  const CurveGeometry g(testing::circle_curve(1.0));
  const CurveGrid grid = CurveGrid::make(g, 2000, BoundaryCondition::periodic);
  const GridSamples samples = sample_grid(g, grid);
  const double e0 = solve_spectrum(build_hamiltonian(samples, grid, kUnit), 1).eigenvalues[0];
  const double free0 = solve_spectrum(build_hamiltonian(samples, grid, kUnit, false), 1).eigenvalues[0];
  const double elapsed = seconds_since(start);
  out.require(std::abs(e0 + 0.125) <= 5e-5, fmt::format("E0 = {:.12f}, |E0 + 0.125| = {:.2e} <= 5e-05", e0, std::abs(e0 + 0.125)));
  out.require(std::abs(free0) <= 5e-5, fmt::format("potential-free E0 = {:.3e}, |E0| <= 5e-05", free0));
  out.require(elapsed <= 30.0, fmt::format("runtime {:.2f} s <= 30 s", elapsed));
  out.summary = fmt::format("circle E0 = {:.9f}, free E0 = {:.2e}", e0, free0);
  return out;
}

Outcome helix_spectrum() {
  Outcome out;
  const auto start = Clock::now();
  const HelixParams params{3.0, 4.0};
  const CurveGeometry g(helix_curve(params));
  const double e1_model = helix_spectrum_analytic(params, kUnit, 1, BoundaryCondition::periodic);
  std::vector<double> hs, errs;
  std::vector<double> finest;
  for (int n : {512, 1024, 2048}) {
    const CurveGrid grid = CurveGrid::periodic_fixture(g, n);
    const Spectrum sp = solve_spectrum(build_hamiltonian(g, grid, kUnit), 3);
    hs.push_back(grid.h);
    errs.push_back(std::abs(sp.eigenvalues[1] - e1_model));
    finest = sp.eigenvalues;
  }
  const double elapsed = seconds_since(start);
  auto rel = [](double v, double target) { return std::abs(v - target) / std::abs(target); };
  out.require(rel(finest[0], -0.0018) <= 1e-5,
              fmt::format("E0 = {:.12g}, relative error {:.2e} vs -0.0018", finest[0], rel(finest[0], -0.0018)));
  for (int j : {1, 2}) {
    out.require(rel(finest[j], 0.019550) <= 1e-5,
                fmt::format("E[{}] = {:.12g}, relative error {:.2e} vs 0.019550", j, finest[j], rel(finest[j], 0.019550)));
  }
  out.details.push_back(fmt::format(
      "note E+-1 from the same closed form that yields E0 = -0.0018 is {:.6f}; numeric relative error vs it {:.2e}",
      e1_model, rel(finest[1], e1_model)));
  const auto orders = observed_orders(hs, errs);
  const bool order_ok = std::all_of(orders.begin(), orders.end(),
                                    [](double o) { return std::abs(o - kOrderTarget) <= kOrderTolerance; });
  out.require(order_ok, fmt::format("E1 discretization error {:.3e} {:.3e} {:.3e}, orders {:.3f} {:.3f}", errs[0],
                                    errs[1], errs[2], orders[0], orders[1]));
  out.require(elapsed <= 60.0, fmt::format("runtime {:.2f} s <= 60 s", elapsed));
  out.summary = fmt::format("E0 = {:.9g}, E+-1 = {:.9g}", finest[0], finest[1]);
  return out;
}

Outcome hermiticity(const std::vector<CurveCase>& cases) {
  Outcome out;
  double worst = 0.0;
  for (const CurveCase& c : cases) {
    const double bound = 1e-15 * c.hermiticity_scale;
    worst = std::max({worst, c.hermiticity_h, c.hermiticity_p});
    out.require(c.hermiticity_h <= bound && c.hermiticity_p <= bound,
                fmt::format("{}: max|H - H^+| = {:.1e}, max|P - P^+| = {:.1e}", c.name, c.hermiticity_h, c.hermiticity_p));
  }
  out.summary = fmt::format("worst defect {:.1e} over line, circle, helix, random", worst);
  return out;
}

Outcome series_criterion(const std::vector<CurveCase>& cases, const std::vector<std::string>& names,
                         Series CurveCase::*member, const std::string& label) {
  Outcome out;
  for (const CurveCase& c : cases) {
    if (std::find(names.begin(), names.end(), c.name) == names.end()) continue;
    const Series& s = c.*member;
    out.require(s.exact() || s.order_ok(), fmt::format("{}: {}", c.name, s.describe()));
  }
  out.summary = label;
  return out;
}

Outcome force_identity(const std::vector<CurveCase>& cases) {
  Outcome out = series_criterion(cases, {"line", "circle", "helix", "random"}, &CurveCase::force,
                                 "commutator force vs general build");
  for (const CurveCase& c : cases) {
    if (!c.constant_curvature) continue;
    out.require(c.force_forms_gap <= 1e-12,
                fmt::format("{}: general vs constant-curvature build, max relative gap {:.2e} <= 1e-12", c.name,
                            c.force_forms_gap));
  }
  return out;
}

Outcome tangentiality(const std::vector<CurveCase>& cases) {
  Outcome out = series_criterion(cases, {"circle", "helix"}, &CurveCase::tangential,
                                 "sum of {n_c, P_c} on circle and helix");
  // On constant kappa, tau the discrete sum cancels identically, so also show
  // the decay where it does not. Informational: the leading terms cancel
  // through third order there, so the observed order is about 4.
  for (const CurveCase& c : cases) {
    if (c.name == "random") out.details.push_back("note random: " + c.tangential.describe());
  }
  return out;
}

Outcome limit_table() {
  Outcome out;
  const CurveGeometry g(testing::reference_helix());
  const LimitReport r = limit_suite(g, g.length() / 2);
  for (const LimitEntry& e : r.entries) {
    // Vanishing targets have no relative scale; the suite's absolute
    // tolerance (1e-4 times the natural magnitude of the term) applies.
    const double tol = e.target != 0.0 ? 1e-4 * std::abs(e.target) : e.tolerance;
    const bool ok = std::abs(e.limit - e.target) <= tol && e.pass;
    out.require(ok, fmt::format("{}: limit {:.10g}, target {:.6g}, tolerance {:.2e}, order {:.3f}", e.name, e.limit,
                                e.target, tol, e.observed_order));
  }
  out.summary = fmt::format("helix at s = {:.4f}, {} entries", r.s, r.entries.size());
  return out;
}

Outcome metric_identities(const std::vector<CurveCase>& cases) {
  Outcome out;
  for (const CurveCase& c : cases) {
    double det_err = 0.0, inv_err = 0.0;
    const auto points = random_tube_points(c.geometry, 1000, 101);
    for (const TubePoint& q : points) {
      const TubeMetric m = metric_at(c.geometry.frame(q.s), q.q2, q.q3);
      det_err = std::max(det_err, std::abs(m.det_g - m.det_closed));
      inv_err = std::max(inv_err, (m.g * m.g_inv - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
    }
    out.require(det_err <= 1e-12 && inv_err <= 1e-12,
                fmt::format("{}: {} points, |det G - (1 - kq2)^2| = {:.1e}, |G G^-1 - I| = {:.1e}", c.name,
                            points.size(), det_err, inv_err));
  }
  out.summary = "1000 random tube points per curve";
  return out;
}

Outcome frenet_serret(const std::vector<CurveCase>& cases) {
  Outcome out;
  const char* rows[] = {"t'", "n'", "b'"};
  for (const CurveCase& c : cases) {
    for (int r = 0; r < 3; ++r) {
      out.require(c.fs[r].exact() || c.fs[r].order_ok(), fmt::format("{} {}: {}", c.name, rows[r], c.fs[r].describe()));
    }
    out.require(c.frame_defect <= 1e-12, fmt::format("{}: frame orthonormality {:.1e} <= 1e-12", c.name, c.frame_defect));
  }
  out.summary = "three frame-derivative relations under s-refinement";
  return out;
}

Outcome divergence(const std::vector<CurveCase>& cases) {
  Outcome out;
  for (const CurveCase& c : cases) {
    double worst = 0.0;
    for (const TubePoint& q : random_tube_points(c.geometry, 100, 202)) {
      worst = std::max(worst, divergence_identity(c.geometry, q.s, q.q2, q.q3));
    }
    out.require(worst <= 1e-6, fmt::format("{}: max residual {:.2e} <= 1e-06 over 100 points", c.name, worst));
  }
  out.summary = "divergence identity at random tube points";
  return out;
}

struct Process {
  int status = -1;
  std::string out;
};

Process run_process(const std::string& cmd) {
  Process p;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) return p;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) p.out.append(buf, n);
  const int status = pclose(pipe);
  p.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}

Outcome cli_determinism(const std::string& exe, const std::string& config) {
  Outcome out;
  const std::string base = exe + " verify --config " + config;
  const Process a = run_process(base), b = run_process(base);
  out.require(a.status == 0 && b.status == 0, fmt::format("both runs exit 0 (got {} and {})", a.status, b.status));
  out.require(!a.out.empty() && a.out == b.out, fmt::format("byte-identical JSON ({} bytes)", a.out.size()));

  std::ifstream in(config);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    out.require(false, "helix config is not valid JSON");
    return out;
  }
  j["test_hooks"] = {{"corrupt_kappa", 1.01}};
  const std::string corrupt_path = (std::filesystem::temp_directory_path() / "curveq_corrupt_kappa.json").string();
  std::ofstream(corrupt_path) << j.dump();
  const Process bad = run_process(exe + " verify --config " + corrupt_path);
  out.require(bad.status != 0, fmt::format("corrupted-kappa control exits {}", bad.status));
  out.summary = "curveq verify on the helix config";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"curveq acceptance suite"};
  std::string exe = CURVEQ_EXE;
  std::string config = CURVEQ_HELIX_CONFIG;
  std::vector<int> expected_failures;
  cli.add_option("--curveq", exe, "curveq executable");
  cli.add_option("--helix-config", config, "helix verify config");
  cli.add_option("--expect-fail", expected_failures, "criteria known to fail; exit 0 iff exactly these fail");
  CLI11_PARSE(cli, argc, argv);

  const auto start = Clock::now();
  std::vector<CurveCase> cases = make_cases();
  for (CurveCase& c : cases) study(c);

  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "geometric potential shift", geometric_potential_shift},
      {2, "helix spectrum", helix_spectrum},
      {3, "hermiticity", [&] { return hermiticity(cases); }},
      {4, "kinematical identity",
       [&] {
         return series_criterion(cases, {"line", "circle", "helix", "random"}, &CurveCase::kinematical,
                                 "(m/i hbar)[a_c, H] - P_c");
       }},
      {5, "force identity", [&] { return force_identity(cases); }},
      {6, "tangentiality", [&] { return tangentiality(cases); }},
      {7, "squeezing limit table", limit_table},
      {8, "metric identities", [&] { return metric_identities(cases); }},
      {9, "frenet-serret", [&] { return frenet_serret(cases); }},
      {10, "divergence identity", [&] { return divergence(cases); }},
      {11, "cli determinism", [&] { return cli_determinism(exe, config); }},
  };

  std::set<int> failed;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("threw: ") + e.what();
    }
    if (!o.pass) failed.insert(c.id);
    fmt::print("criterion {:>2} {}: {} ({})\n", c.id, o.pass ? "PASS" : "FAIL", c.title, o.summary);
    for (const auto& line : o.details) fmt::print("    {}\n", line);
    std::fflush(stdout);
  }
  const std::set<int> expected(expected_failures.begin(), expected_failures.end());
  fmt::print("{} of {} criteria passed in {:.1f} s\n", criteria.size() - failed.size(), criteria.size(),
             seconds_since(start));
  if (failed != expected) {
    fmt::print("failing set differs from --expect-fail\n");
    return 1;
  }
  return 0;
}
