#include "cli/checks.hpp"

#include <algorithm>
#include <cmath>

namespace qframe::cli {

// Per-point cache so checks sharing a frame or curvature compute it once.
class PointContext {
 public:
  PointContext(const Scenario& s, const Point& p) : s_(s), p_(p) {}

  const Scenario& scenario() const { return s_; }
  const Point& point() const { return p_; }

  const LocalFrame& frame() {
    if (!frame_) frame_ = frame_at(s_.basis, s_.omega, p_, s_.fd, s_.tol);
    return *frame_;
  }
  const StrengthSample& strength() {
    if (!strength_) strength_ = field_strength_from_frame(frame(), s_.omega, s_.fd, s_.tol);
    return *strength_;
  }
  const CurvatureSample& curvature() {
    if (!curvature_) {
      curvature_ = curvature_from_frame(frame(), s_.basis, s_.omega, s_.fd, s_.tol);
    }
    return *curvature_;
  }
  const std::array<BiquatMatrix, 4>& commutator() {
    if (!direct_) {
      direct_ = basis_commutator_direct(frame(), s_.basis, s_.omega, s_.fd, s_.tol);
    }
    return *direct_;
  }
  CovarianceSetup covariance() const {
    CovarianceSetup c{s_.basis, s_.omega, s_.psi_l, s_.psi_r, s_.vector, {}, s_.phase};
    if (s_.lorentz) c.lambda = *s_.lorentz;
    return c;
  }
  double covariance(CovarianceKind kind) {
    return covariance_residual(kind, covariance(), p_, s_.fd, s_.tol);
  }

 private:
  const Scenario& s_;
  Point p_;
  std::optional<LocalFrame> frame_;
  std::optional<StrengthSample> strength_;
  std::optional<CurvatureSample> curvature_;
  std::optional<std::array<BiquatMatrix, 4>> direct_;
};

namespace {

bool always(const Scenario&) { return true; }
bool has_lorentz(const Scenario& s) { return s.lorentz.has_value(); }
bool has_phase(const Scenario& s) { return s.phase.has_value(); }

std::vector<CheckSpec> build_registry() {
  std::vector<CheckSpec> r;
  const auto add = [&](std::string name, std::string description, double tol,
                       std::function<bool(const Scenario&)> applicable,
                       std::function<double(PointContext&)> evaluate) {
    r.push_back({std::move(name), std::move(description), tol, Bound::kAtMost,
                 false, std::move(applicable), std::move(evaluate)});
  };

  add("minus_part", "basis lies in the minus part", 1e-12, always,
      [](PointContext& c) {
        double m = 0.0;
        for (const auto& v : c.frame().s) m = std::max(m, magnitude(pm_split(v).plus));
        return m;
      });
  add("metric_realness", "imaginary residue of <s_mu, s_nu>", 1e-12, always,
      [](PointContext& c) { return c.frame().metric.imag_residue; });
  add("omega_condition", "Scal(omega + bar-star omega) = 0", 1e-12, always,
      [](PointContext& c) { return omega_condition_residual(c.frame().omega); });
  add("gamma_realness", "imaginary residue of the minimal connection", 1e-10,
      always, [](PointContext& c) { return c.frame().connection.imag_residue; });
  add("minimality", "D_rho s_nu = 0", 1e-8, always,
      [](PointContext& c) { return minimality_residual(c.frame()); });
  add("metric_compatibility", "nabla_rho g_mu_nu = 0", 1e-8, always,
      [](PointContext& c) {
        const auto& s = c.scenario();
        return max_abs(nabla_metric(c.frame(), metric_gradient(s.basis, c.point(), s.fd)));
      });
  add("metric_leibniz", "D g built from D s equals nabla g", 1e-8, always,
      [](PointContext& c) {
        const auto& s = c.scenario();
        return max_abs(metric_leibniz_residual(s.basis, s.omega, c.point(), s.fd, s.tol));
      });
  r.push_back({"torsion_present", "largest torsion component (lower bound)", 1e-3,
               Bound::kAtLeast, true, always, [](PointContext& c) {
                 return max_abs(torsion_at(c.frame().connection));
               }});
  add("torsion_curl", "F - (dA - dA) equals the torsion term", 1e-7, always,
      [](PointContext& c) {
        const auto& s = c.scenario();
        return torsion_curl_residual(c.frame(), c.strength(), s.omega, s.fd, s.tol);
      });
  add("strength_decomposition", "Omega = K + i g F", 1e-10, always,
      [](PointContext& c) { return c.strength().decomposition_residual(); });
  add("strength_antisymmetry", "Omega_rho_sigma = -Omega_sigma_rho", 1e-10,
      always, [](PointContext& c) { return c.strength().antisymmetry_residual(); });
  add("strength_vector_part", "K has no scalar part", 1e-10, always,
      [](PointContext& c) { return c.strength().k_scalar_residual(); });
  add("strength_relation", "[nabla, nabla] s + Omega s + s bar-star Omega = 0",
      1e-7, always, [](PointContext& c) {
        return strength_relation_residual(c.frame(), c.strength(), c.commutator());
      });
  add("riemann_antisymmetry", "R^mu_nu_rho_sigma = -R^mu_nu_sigma_rho", 1e-10,
      always, [](PointContext& c) { return c.curvature().riemann_antisymmetry(); });
  add("curvature_crosscheck", "curvature from Gamma matches the direct commutator",
      1e-6, always, [](PointContext& c) {
        return curvature_crosscheck_residual(c.frame(), c.curvature(), c.commutator());
      });
  add("lagrangian_eh", "Ricci contraction equals the Omega form", 1e-6, always,
      [](PointContext& c) {
        const auto eh = lagrangian_eh(c.frame(), c.curvature(), c.strength());
        return std::abs(eh.via_ricci - eh.via_omega);
      });
  add("lagrangian_quadratic", "<Omega, Omega> = <K, K> - g^2 F F", 1e-10, always,
      [](PointContext& c) {
        return lagrangian_quadratic(c.frame(), c.strength()).identity_residual();
      });
  add("component_identity", "<s^mu, D V> = dV^mu + Gamma V", 1e-8,
      [](const Scenario& s) { return s.vector_components.has_value(); },
      [](PointContext& c) {
        const auto& s = c.scenario();
        return max_abs(component_identity_check(*s.vector_components, s.basis,
                                                s.omega, c.point(), s.fd, s.tol));
      });

  add("lorentz_basis", "transformed basis stays in the minus part", 1e-12,
      has_lorentz, [](PointContext& c) {
        const auto& s = c.scenario();
        double m = 0.0;
        for (const auto& v : transform_basis(s.basis, *s.lorentz, s.tol)(c.point())) {
          m = std::max(m, magnitude(pm_split(v).plus));
        }
        return m;
      });
  add("lorentz_metric", "metric invariance under Lambda", 1e-11, has_lorentz,
      [](PointContext& c) { return c.covariance(CovarianceKind::kMetric); });
  add("lorentz_gamma", "Gamma invariance under Lambda", 1e-8, has_lorentz,
      [](PointContext& c) { return c.covariance(CovarianceKind::kGamma); });
  add("lorentz_left_spinor", "D psi_L covariance under Lambda", 1e-7,
      [](const Scenario& s) { return has_lorentz(s) && s.psi_l; },
      [](PointContext& c) { return c.covariance(CovarianceKind::kLeftSpinor); });
  add("lorentz_right_spinor", "D psi_R covariance under Lambda", 1e-7,
      [](const Scenario& s) { return has_lorentz(s) && s.psi_r; },
      [](PointContext& c) { return c.covariance(CovarianceKind::kRightSpinor); });
  add("lorentz_vector", "D V covariance under Lambda", 1e-7,
      [](const Scenario& s) { return has_lorentz(s) && s.vector; },
      [](PointContext& c) { return c.covariance(CovarianceKind::kVector); });

  add("u1_omega_condition", "transformed omega stays admissible", 1e-12,
      has_phase, [](PointContext& c) {
        const auto& s = c.scenario();
        return omega_condition_residual(
            u1_transform(s.omega, {}, {}, *s.phase, s.fd).omega(c.point()));
      });
  add("u1_left_spinor", "D psi_L covariance under U(1)", 1e-8,
      [](const Scenario& s) { return has_phase(s) && s.psi_l; },
      [](PointContext& c) { return c.covariance(CovarianceKind::kLeftSpinorU1); });
  add("u1_right_spinor", "D psi_R covariance under U(1)", 1e-8,
      [](const Scenario& s) { return has_phase(s) && s.psi_r; },
      [](PointContext& c) { return c.covariance(CovarianceKind::kRightSpinorU1); });
  add("u1_vector", "D V invariance under U(1)", 1e-10,
      [](const Scenario& s) { return has_phase(s) && s.vector; },
      [](PointContext& c) { return c.covariance(CovarianceKind::kVectorU1); });
  add("u1_gamma", "Gamma invariance under U(1)", 1e-8, has_phase,
      [](PointContext& c) { return c.covariance(CovarianceKind::kGammaU1); });
  add("u1_unified", "unified Lambda = exp(i phi) law matches the U(1) law",
      1e-10, has_phase, [](PointContext& c) {
        const auto& s = c.scenario();
        return unified_u1_residual(s.omega, *s.phase, c.point(), s.fd, s.tol);
      });

  const auto has_map = [](const Scenario& s) { return s.coordinate_map.has_value(); };
  add("coordinate_jacobian", "supplied jacobian matches the forward map", 1e-8,
      has_map, [](PointContext& c) {
        const auto& s = c.scenario();
        return jacobian_mismatch(*s.coordinate_map, c.point(), s.fd);
      });
  add("coordinate_gamma", "Gamma follows the inhomogeneous coordinate law", 1e-6,
      has_map, [](PointContext& c) {
        const auto& s = c.scenario();
        return coordinate_gamma_check(s.basis, s.omega, *s.coordinate_map,
                                      c.point(), s.fd, s.tol);
      });
  return r;
}

}  // namespace

const std::vector<CheckSpec>& check_registry() {
  static const std::vector<CheckSpec> registry = build_registry();
  return registry;
}

const CheckSpec* find_check(std::string_view name) {
  for (const auto& c : check_registry()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<const CheckSpec*> resolve_checks(const Scenario& s) {
  std::vector<const CheckSpec*> out;
  if (s.checks.empty()) {
    for (const auto& c : check_registry()) {
      if (!c.opt_in && c.applicable(s)) out.push_back(&c);
    }
  } else {
    for (const auto& name : s.checks) {
      const auto* c = find_check(name);
      if (!c) throw ScenarioError(s.source.string() + ": unknown check '" + name + "'");
      if (!c->applicable(s)) {
        throw ScenarioError(s.source.string() + ": check '" + name +
                            "' needs inputs this scenario does not provide");
      }
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
  }
  for (const auto& [name, tol] : s.tolerances) {
    if (!find_check(name)) {
      throw ScenarioError(s.source.string() + ": tolerance given for unknown check '" +
                          name + "'");
    }
    if (!(tol >= 0.0)) {
      throw ScenarioError(s.source.string() + ": tolerance for '" + name +
                          "' must be >= 0");
    }
  }
  return out;
}

double effective_tolerance(const Scenario& s, const CheckSpec& c) {
  if (s.global_tolerance) return *s.global_tolerance;
  if (const auto it = s.tolerances.find(c.name); it != s.tolerances.end()) {
    return it->second;
  }
  return c.tolerance;
}

Report run_checks(const Scenario& s) {
  const auto checks = resolve_checks(s);
  Report report;
  report.scenario = s.echo;
  for (const auto* c : checks) report.checks.push_back(c->name);

  const std::size_t n_points = s.points.size();
  report.records.resize(checks.size() * n_points);
  for (std::size_t pi = 0; pi < n_points; ++pi) {
    PointContext ctx(s, s.points[pi]);
    for (std::size_t ci = 0; ci < checks.size(); ++ci) {
      const auto& spec = *checks[ci];
      auto& rec = report.records[ci * n_points + pi];
      rec.check = spec.name;
      rec.point_index = pi;
      rec.point = s.points[pi];
      rec.tolerance = effective_tolerance(s, spec);
      rec.bound = spec.bound;
      try {
        const double v = spec.evaluate(ctx);
        rec.residual = v;
        if (!std::isfinite(v)) {
          rec.diagnostic = "residual is not finite";
        } else {
          rec.pass = spec.bound == Bound::kAtMost ? v <= rec.tolerance : v >= rec.tolerance;
        }
      } catch (const std::exception& e) {
        rec.diagnostic = e.what();
      }
    }
  }
  for (const auto& rec : report.records) (rec.pass ? report.passed : report.failed)++;
  return report;
}

}  // namespace qframe::cli
