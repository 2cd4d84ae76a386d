#pragma once

// Local Lorentz (Sp(1,C)) and U(1) transformations and the residual checks
// for each transformation law. Everything on the primed side is recomputed
// from transformed fields; no law is substituted into another.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qframe/gauge.hpp"
#include "qframe/geometry.hpp"

namespace qframe {

// Λ(p) = exp(q(p)) for a generator q in C⊗Vec(H); unit by construction.
struct LorentzField {
  FieldFn generator;

  Biquaternion operator()(const Point& p) const {
    return exp_vec(generator(p));
  }
  operator FieldFn() const {  // NOLINT(google-explicit-constructor)
    return [g = generator](const Point& p) { return exp_vec(g(p)); };
  }
};

// Real phase φ(p). Evaluation rejects a non-negligible imaginary part.
struct U1Field {
  ScalarFn phi;

  double operator()(const Point& p) const {
    const Complex v = phi(p);
    if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real()))) {
      throw PreconditionError("U(1) phase is not real at this point");
    }
    return v.real();
  }
  // e^{iφ} as a biquaternion field.
  FieldFn element() const {
    return [self = *this](const Point& p) {
      return Biquaternion{std::polar(1.0, self(p))};
    };
  }
};

inline FieldFn lorentz_element(FieldFn generator) {
  return LorentzField{std::move(generator)};
}

inline FieldFn u1_element(ScalarFn phi) { return U1Field{std::move(phi)}.element(); }

// |N(Λ)| - 1. Zero for Sp(1,C) elements and for e^{iφ}, the two kinds of
// Λ the unified treatment admits.
inline double unit_defect(const Biquaternion& lambda) {
  return std::abs(std::abs(norm(lambda)) - 1.0);
}

inline void require_unit(const Biquaternion& lambda, const Tolerance& tol) {
  const double d = unit_defect(lambda);
  if (!tol.accepts(d, 1.0)) {
    throw NonUnitTransformError("transformation element is not unit (|N| - 1 = " +
                                std::to_string(d) + ")");
  }
}

// s'_μ = Λ s_μ Λ̄*.
inline BasisField transform_basis(const BasisField& basis, FieldFn lambda,
                                  const Tolerance& tol = {}) {
  BasisField out;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    out.s[mu] = [s = basis.s[mu], lambda, tol](const Point& p) {
      const auto l = lambda(p);
      require_unit(l, tol);
      return l * s(p) * bar_star(l);
    };
  }
  return out;
}

namespace detail {

inline Biquaternion checked_inverse(const Biquaternion& x,
                                    const Tolerance& tol) {
  auto r = norm_and_inverse(x, tol);
  if (!r.inverse) {
    throw ZeroDivisorError("transformation element is a zero divisor");
  }
  return *r.inverse;
}

}  // namespace detail

// ω'_μ = Λ ω_μ Λ⁻¹ - (∂_μ Λ) Λ⁻¹, with ∂Λ by finite differences.
inline GaugeConnection transformed_connection(const GaugeConnection& omega,
                                              FieldFn lambda,
                                              const FDConfig& fd,
                                              const Tolerance& tol = {}) {
  GaugeConnection out;
  out.coupling = omega.coupling;
  for (int mu = 0; mu < 4; ++mu) {
    const auto m = static_cast<std::size_t>(mu);
    out.omega[m] = [w = omega.omega[m], lambda, fd, tol, mu](const Point& p) {
      const auto checked = [&](const Point& q) {
        const auto l = lambda(q);
        detail::checked_inverse(l, tol);
        return l;
      };
      const auto l = lambda(p);
      const auto inv = detail::checked_inverse(l, tol);
      return l * w(p) * inv - partial(checked, mu, p, fd) * inv;
    };
  }
  return out;
}

inline BasisValues transform_connection(const GaugeConnection& omega,
                                        FieldFn lambda, const Point& p,
                                        const FDConfig& fd,
                                        const Tolerance& tol = {}) {
  return transformed_connection(omega, std::move(lambda), fd, tol)(p);
}

inline Biquaternion transform_value(Species species, const Biquaternion& lambda,
                                    const Biquaternion& value) {
  switch (species) {
    case Species::kLeftSpinor:
      return lambda * value;
    case Species::kRightSpinor:
      return value * bar_star(lambda);
    case Species::kVector:
      return lambda * value * bar_star(lambda);
    case Species::kScalar:
      return value;
  }
  return value;
}

inline FieldFn transform_species(FieldFn f, Species species, FieldFn lambda) {
  return [f = std::move(f), species, lambda = std::move(lambda)](const Point& p) {
    return transform_value(species, lambda(p), f(p));
  };
}

inline TensorField transform_tensor(const TensorField& f, FieldFn lambda) {
  return {f.tag, [fn = f.fn, species = f.tag.species, lambda = std::move(lambda)](
                     const Point& p, std::span<const int> idx) {
            return transform_value(species, lambda(p), fn(p, idx));
          }};
}

struct U1Transformed {
  GaugeConnection omega;
  FieldFn psi_l;
  FieldFn psi_r;
};

// ω' = ω - i∂φ, ψ_L' = e^{iφ} ψ_L, ψ_R' = e^{-iφ} ψ_R.
inline U1Transformed u1_transform(const GaugeConnection& omega, FieldFn psi_l,
                                  FieldFn psi_r, const U1Field& phi,
                                  const FDConfig& fd) {
  U1Transformed out;
  out.omega.coupling = omega.coupling;
  for (int mu = 0; mu < 4; ++mu) {
    const auto m = static_cast<std::size_t>(mu);
    out.omega.omega[m] = [w = omega.omega[m], phi, fd, mu](const Point& p) {
      const double dphi = partial(phi, mu, p, fd);
      return w(p) - Biquaternion{Complex{0.0, dphi}};
    };
  }
  if (psi_l) {
    out.psi_l = [f = std::move(psi_l), phi](const Point& p) {
      return std::polar(1.0, phi(p)) * f(p);
    };
  }
  if (psi_r) {
    out.psi_r = [f = std::move(psi_r), phi](const Point& p) {
      return std::polar(1.0, -phi(p)) * f(p);
    };
  }
  return out;
}

enum class CovarianceKind {
  kLeftSpinor,
  kRightSpinor,
  kVector,
  kMetric,
  kGamma,
  kLeftSpinorU1,
  kRightSpinorU1,
  kVectorU1,
  kGammaU1,
};

// The pieces a covariance residual may draw on. Unused members may be empty.
struct CovarianceSetup {
  BasisField basis;
  GaugeConnection omega;
  FieldFn psi_l;
  FieldFn psi_r;
  FieldFn vector;
  FieldFn lambda;                 // Lorentz element field
  std::optional<U1Field> phase;   // U(1) phase
};

namespace detail {

inline double derivative_covariance(Species species, const FieldFn& f,
                                    const FieldFn& f_primed,
                                    const GaugeConnection& omega,
                                    const GaugeConnection& omega_primed,
                                    const Biquaternion& lambda_at_p,
                                    const Point& p, const FDConfig& fd) {
  const auto w = omega(p);
  const auto wp = omega_primed(p);
  const auto v = f(p);
  const auto vp = f_primed(p);
  double r = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    const auto m = static_cast<std::size_t>(mu);
    const auto lhs = partial(f_primed, mu, p, fd) + species_coupling(species, wp[m], vp);
    const auto d = partial(f, mu, p, fd) + species_coupling(species, w[m], v);
    r = std::max(r, magnitude(lhs - transform_value(species, lambda_at_p, d)));
  }
  return r;
}

inline const FieldFn& require_field(const FieldFn& f, const char* what) {
  if (!f) throw PreconditionError(std::string("covariance check needs ") + what);
  return f;
}

inline const U1Field& require_phase(const CovarianceSetup& s) {
  if (!s.phase) throw PreconditionError("covariance check needs a U(1) phase");
  return *s.phase;
}

inline double gamma_difference(const BasisField& b1, const GaugeConnection& w1,
                               const BasisField& b2, const GaugeConnection& w2,
                               const Point& p, const FDConfig& fd,
                               const Tolerance& tol) {
  const auto g1 = gamma_minimal_at(b1, w1, p, fd, tol);
  const auto g2 = gamma_minimal_at(b2, w2, p, fd, tol);
  double r = 0.0;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t c = 0; c < 4; ++c)
        r = std::max(r, std::abs(g1.gamma[a][b][c] - g2.gamma[a][b][c]));
  return r;
}

}  // namespace detail

inline double covariance_residual(CovarianceKind kind,
                                  const CovarianceSetup& setup, const Point& p,
                                  const FDConfig& fd,
                                  const Tolerance& tol = {}) {
  using detail::require_field;
  switch (kind) {
    case CovarianceKind::kLeftSpinor:
    case CovarianceKind::kRightSpinor:
    case CovarianceKind::kVector: {
      const auto& lambda = require_field(setup.lambda, "a Lorentz field");
      const Species species = kind == CovarianceKind::kLeftSpinor
                                  ? Species::kLeftSpinor
                                  : kind == CovarianceKind::kRightSpinor
                                        ? Species::kRightSpinor
                                        : Species::kVector;
      const auto& f = require_field(
          species == Species::kLeftSpinor    ? setup.psi_l
          : species == Species::kRightSpinor ? setup.psi_r
                                             : setup.vector,
          "the transformed field");
      const auto l = lambda(p);
      require_unit(l, tol);
      return detail::derivative_covariance(
          species, f, transform_species(f, species, lambda), setup.omega,
          transformed_connection(setup.omega, lambda, fd, tol), l, p, fd);
    }
    case CovarianceKind::kMetric: {
      const auto& lambda = require_field(setup.lambda, "a Lorentz field");
      const auto g = raw_gram(setup.basis(p));
      const auto gp = raw_gram(transform_basis(setup.basis, lambda, tol)(p));
      double r = 0.0;
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) r = std::max(r, std::abs(gp[a][b] - g[a][b]));
      return r;
    }
    case CovarianceKind::kGamma: {
      const auto& lambda = require_field(setup.lambda, "a Lorentz field");
      return detail::gamma_difference(
          transform_basis(setup.basis, lambda, tol),
          transformed_connection(setup.omega, lambda, fd, tol), setup.basis,
          setup.omega, p, fd, tol);
    }
    case CovarianceKind::kLeftSpinorU1:
    case CovarianceKind::kRightSpinorU1: {
      const auto& phase = detail::require_phase(setup);
      const bool left = kind == CovarianceKind::kLeftSpinorU1;
      const auto& f = require_field(left ? setup.psi_l : setup.psi_r,
                                    left ? "a left spinor" : "a right spinor");
      const auto u = u1_transform(setup.omega, left ? f : FieldFn{},
                                  left ? FieldFn{} : f, phase, fd);
      return detail::derivative_covariance(
          left ? Species::kLeftSpinor : Species::kRightSpinor, f,
          left ? u.psi_l : u.psi_r, setup.omega, u.omega,
          phase.element()(p), p, fd);
    }
    case CovarianceKind::kVectorU1: {
      const auto& phase = detail::require_phase(setup);
      const auto& f = require_field(setup.vector, "a vector field");
      const auto u = u1_transform(setup.omega, {}, {}, phase, fd);
      // V is U(1)-neutral, so D'V' must equal DV itself.
      return detail::derivative_covariance(
          Species::kVector, f, f, setup.omega, u.omega, Biquaternion::one(), p,
          fd);
    }
    case CovarianceKind::kGammaU1: {
      const auto& phase = detail::require_phase(setup);
      const auto u = u1_transform(setup.omega, {}, {}, phase, fd);
      return detail::gamma_difference(setup.basis, u.omega, setup.basis,
                                      setup.omega, p, fd, tol);
    }
  }
  return 0.0;
}

// max_μ |ω'_μ from the unified Λ = e^{iφ} law - ω'_μ from the U(1) law|.
inline double unified_u1_residual(const GaugeConnection& omega,
                                  const U1Field& phase, const Point& p,
                                  const FDConfig& fd,
                                  const Tolerance& tol = {}) {
  const auto unified = transform_connection(omega, phase.element(), p, fd, tol);
  const auto direct = u1_transform(omega, {}, {}, phase, fd).omega(p);
  double r = 0.0;
  for (std::size_t m = 0; m < 4; ++m) r = std::max(r, magnitude(unified[m] - direct[m]));
  return r;
}

// x' = x'(x) with its Jacobian J^μ_ν = ∂x'^μ/∂x^ν supplied separately.
struct CoordinateMap {
  std::array<ScalarFn, 4> forward;
  std::array<std::array<ScalarFn, 4>, 4> jacobian;

  static CoordinateMap identity() {
    CoordinateMap m;
    for (std::size_t mu = 0; mu < 4; ++mu) {
      m.forward[mu] = [mu](const Point& p) { return Complex{p[mu]}; };
      for (std::size_t nu = 0; nu < 4; ++nu) {
        const double v = mu == nu ? 1.0 : 0.0;
        m.jacobian[mu][nu] = [v](const Point&) { return Complex{v}; };
      }
    }
    return m;
  }
};

inline Matrix4 jacobian_at(const CoordinateMap& map, const Point& p,
                           const Tolerance& tol = {}) {
  Matrix4 j;
  double scale = 0.0;
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      const Complex v =
          map.jacobian[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)](p);
      if (!tol.accepts(std::abs(v.imag()), std::abs(v))) {
        throw RealnessError("jacobian entry is not real");
      }
      j(m, n) = v.real();
      scale = std::max(scale, std::abs(v));
    }
  }
  if (std::abs(j.determinant()) <= tol.bound(std::pow(scale, 4))) {
    throw SingularJacobianError("jacobian is singular at this point");
  }
  return j;
}

// max |∂_ν x'^μ (finite differences) - J^μ_ν (supplied)|.
inline double jacobian_mismatch(const CoordinateMap& map, const Point& p,
                                const FDConfig& fd) {
  const Matrix4 j = jacobian_at(map, p);
  double r = 0.0;
  for (int m = 0; m < 4; ++m) {
    const auto& f = map.forward[static_cast<std::size_t>(m)];
    const auto real = [&](const Point& q) { return f(q).real(); };
    for (int n = 0; n < 4; ++n) {
      r = std::max(r, std::abs(partial(real, n, p, fd) - j(m, n)));
    }
  }
  return r;
}

// Γ' in primed coordinates, built from s'_ν = (∂x^α/∂x'^ν) s_α and the same
// law for ω, compared against the tensorial part J Γ J⁻¹ J⁻¹ plus the
// inhomogeneous term J^μ_α ∂²x^α/∂x'^ν∂x'^ρ. Returns the max difference.
inline double coordinate_gamma_check(const BasisField& basis,
                                     const GaugeConnection& omega,
                                     const CoordinateMap& map, const Point& p,
                                     const FDConfig& fd,
                                     const Tolerance& tol = {}) {
  const auto inv_at = [&](const Point& q) {
    return to_rank2(jacobian_at(map, q, tol).inverse());
  };
  const Matrix4 j = jacobian_at(map, p, tol);
  const Rank2 ji = inv_at(p);  // ji[α][ν] = ∂x^α/∂x'^ν

  // Primed side, from primed fields only.
  const auto primed_basis = [&](const Point& q) {
    const auto s = evaluate_basis(basis, q, tol);
    const auto k = inv_at(q);
    BasisValues out{};
    for (std::size_t n = 0; n < 4; ++n)
      for (std::size_t a = 0; a < 4; ++a) out[n] += k[a][n] * s[a];
    return out;
  };
  const auto sp = primed_basis(p);
  const auto dsp_unprimed = gradient(primed_basis, p, fd);  // [beta][nu]
  const auto w = omega(p);
  BasisValues wp{};
  for (std::size_t n = 0; n < 4; ++n)
    for (std::size_t a = 0; a < 4; ++a) wp[n] += ji[a][n] * w[a];
  const auto metric = metric_from_values(sp, p, tol);
  const auto dual = raise(sp, metric.g_inv);

  Rank3 lhs{};
  for (std::size_t n = 0; n < 4; ++n) {
    for (std::size_t r = 0; r < 4; ++r) {
      Biquaternion x = vector_coupling(wp[r], sp[n]);
      for (std::size_t b = 0; b < 4; ++b) x += ji[b][r] * dsp_unprimed[b][n];
      for (std::size_t m = 0; m < 4; ++m) lhs[m][n][r] = inner(dual[m], x).real();
    }
  }

  // Prediction from the unprimed Γ.
  const auto gamma = gamma_minimal_at(basis, omega, p, fd, tol);
  const auto dji = gradient(inv_at, p, fd);  // [beta][alpha][nu]
  double r_max = 0.0;
  for (std::size_t m = 0; m < 4; ++m) {
    for (std::size_t n = 0; n < 4; ++n) {
      for (std::size_t r = 0; r < 4; ++r) {
        double pred = 0.0;
        for (std::size_t a = 0; a < 4; ++a) {
          const double jm = j(static_cast<int>(m), static_cast<int>(a));
          if (jm == 0.0) continue;
          double t = 0.0;
          for (std::size_t b = 0; b < 4; ++b) {
            for (std::size_t c = 0; c < 4; ++c) {
              t += ji[b][n] * ji[c][r] * gamma.gamma[a][b][c];
            }
            t += ji[b][r] * dji[b][a][n];
          }
          pred += jm * t;
        }
        r_max = std::max(r_max, std::abs(lhs[m][n][r] - pred));
      }
    }
  }
  return r_max;
}

}  // namespace qframe
