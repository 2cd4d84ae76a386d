#pragma once

// Gauge sector: field strength of ω, its K/F split, curvature of the minimal
// connection, and the two candidate Lagrangians.
//
// Curvature conventions. riemann_at returns the usual expression in Γ,
//
//   R^μ_νρσ = ∂_ρ Γ^μ_νσ - ∂_σ Γ^μ_νρ + Γ^μ_τρ Γ^τ_νσ - Γ^μ_τσ Γ^τ_νρ,
//
// while the basis commutator curvature is C^μ_νρσ = <s^μ, [∇_ρ, ∇_σ] s_ν>
// with ∇ acting on every coordinate index (so torsion contributes). The two
// are related by
//
//   C^μ_νρσ = -R^μ_νρσ + T^τ_ρσ <s^μ, ∇_τ s_ν>,
//
// and it is C that enters 0 = C^μ_νρσ + <s^μ, Ω_ρσ s_ν + s_ν Ω̄*_ρσ>.
// The Einstein-Hilbert-like scalar is the contraction g^να C^μ_αμν.

#include <array>
#include <cmath>
#include <string>

#include "qframe/geometry.hpp"

namespace qframe {

using BiquatMatrix = std::array<BasisValues, 4>;

// max_μ |Scal(ω_μ + ω̄*_μ)|. Zero iff every ω_μ has a purely imaginary scalar
// part.
inline double omega_condition_residual(const BasisValues& omega) {
  double r = 0.0;
  for (const auto& w : omega) r = std::max(r, std::abs((w + bar_star(w))[0]));
  return r;
}

inline double check_omega_condition(const GaugeConnection& omega,
                                    const Point& p) {
  return omega_condition_residual(omega(p));
}

struct OmegaDecomposition {
  BasisValues chi{};          // vector parts, in C⊗Vec(H)
  std::array<double, 4> a{};  // ω_μ = χ_μ + i g A_μ
};

inline OmegaDecomposition decompose_omega(const BasisValues& omega,
                                          double coupling,
                                          const Tolerance& tol = {}) {
  OmegaDecomposition out;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    const auto& w = omega[mu];
    const double scalar_re = std::abs(w[0].real());
    if (!tol.accepts(2.0 * scalar_re, magnitude(w))) {
      throw PreconditionError("ω_" + std::to_string(mu) +
                              " violates the scalar condition Scal(ω + ω̄*) = 0");
    }
    out.chi[mu] = w.vector_part();
    const double im = w[0].imag();
    if (coupling == 0.0) {
      if (!tol.accepts(std::abs(im), magnitude(w))) {
        throw DecompositionError(
            "coupling g = 0 but ω_" + std::to_string(mu) +
            " has an imaginary scalar part; A is undefined");
      }
      out.a[mu] = 0.0;
    } else {
      out.a[mu] = im / coupling;
    }
  }
  return out;
}

inline OmegaDecomposition decompose_omega(const GaugeConnection& omega,
                                          const Point& p,
                                          const Tolerance& tol = {}) {
  return decompose_omega(omega(p), omega.coupling, tol);
}

struct StrengthSample {
  BiquatMatrix omega{};  // Ω_ρσ
  BiquatMatrix k{};      // K_ρσ
  Rank2 f{};             // F_ρσ
  double coupling = 1.0;
  Point point{};

  // max |Ω - K - i g F|
  double decomposition_residual() const {
    double r = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = 0; b < 4; ++b) {
        const auto d = omega[a][b] - k[a][b] -
                       Biquaternion{Complex{0.0, coupling * f[a][b]}};
        r = std::max(r, magnitude(d));
      }
    }
    return r;
  }
  double antisymmetry_residual() const {
    double r = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = 0; b < 4; ++b) {
        r = std::max(r, magnitude(omega[a][b] + omega[b][a]));
      }
    }
    return r;
  }
  // max |Scal K|: K must stay in C⊗Vec(H).
  double k_scalar_residual() const {
    double r = 0.0;
    for (const auto& row : k) {
      for (const auto& v : row) r = std::max(r, std::abs(v[0]));
    }
    return r;
  }
};

namespace detail {

// ∇_ρ X_σ - ∇_σ X_ρ for a covector X with derivatives dx[rho][sigma].
template <class V>
std::array<std::array<V, 4>, 4> covariant_curl(
    const std::array<std::array<V, 4>, 4>& dx, const std::array<V, 4>& x,
    const ConnectionSample& gamma) {
  std::array<std::array<V, 4>, 4> nab{};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t s = 0; s < 4; ++s) {
      V v = dx[r][s];
      for (std::size_t t = 0; t < 4; ++t) {
        v -= gamma.gamma[t][s][r] * x[t];
      }
      nab[r][s] = v;
    }
  }
  std::array<std::array<V, 4>, 4> out{};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t s = 0; s < 4; ++s) out[r][s] = nab[r][s] - nab[s][r];
  }
  return out;
}

}  // namespace detail

inline StrengthSample field_strength_from_frame(const LocalFrame& frame,
                                                const GaugeConnection& omega,
                                                const FDConfig& fd,
                                                const Tolerance& tol = {}) {
  const Point& p = frame.point;
  const double g = omega.coupling;
  const auto dec = decompose_omega(frame.omega, g, tol);

  const auto omega_at = [&](const Point& q) { return omega(q); };
  const auto chi_at = [&](const Point& q) {
    return decompose_omega(omega(q), g, tol).chi;
  };
  const auto a_at = [&](const Point& q) {
    return decompose_omega(omega(q), g, tol).a;
  };

  StrengthSample out;
  out.coupling = g;
  out.point = p;
  out.omega = detail::covariant_curl(gradient(omega_at, p, fd), frame.omega,
                                     frame.connection);
  out.k = detail::covariant_curl(gradient(chi_at, p, fd), dec.chi,
                                 frame.connection);
  out.f = detail::covariant_curl(gradient(a_at, p, fd), dec.a, frame.connection);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t s = 0; s < 4; ++s) {
      out.omega[r][s] += commutator(frame.omega[r], frame.omega[s]);
      out.k[r][s] += commutator(dec.chi[r], dec.chi[s]);
    }
  }
  return out;
}

inline StrengthSample field_strength_at(const GaugeConnection& omega,
                                        const BasisField& basis,
                                        const Point& p, const FDConfig& fd,
                                        const Tolerance& tol = {}) {
  return field_strength_from_frame(frame_at(basis, omega, p, fd, tol), omega,
                                   fd, tol);
}

// |F_μν - (∂_μ A_ν - ∂_ν A_μ) - T^τ_μν A_τ|, max over μ, ν. The torsion term
// is why F does not reduce to the coordinate curl of A.
inline double torsion_curl_residual(const LocalFrame& frame,
                                    const StrengthSample& strength,
                                    const GaugeConnection& omega,
                                    const FDConfig& fd,
                                    const Tolerance& tol = {}) {
  const auto a_at = [&](const Point& q) {
    return decompose_omega(omega(q), omega.coupling, tol).a;
  };
  const auto da = gradient(a_at, frame.point, fd);
  const auto a = a_at(frame.point);
  const auto t = torsion_at(frame.connection);
  double r = 0.0;
  for (std::size_t m = 0; m < 4; ++m) {
    for (std::size_t n = 0; n < 4; ++n) {
      double torsion_term = 0.0;
      for (std::size_t k = 0; k < 4; ++k) torsion_term += t[k][m][n] * a[k];
      const double curl = da[m][n] - da[n][m];
      r = std::max(r, std::abs(strength.f[m][n] - curl - torsion_term));
    }
  }
  return r;
}

struct CurvatureSample {
  Rank4 riemann{};     // R^μ_νρσ from Γ, [mu][nu][rho][sigma]
  Rank4 commutator{};  // C^μ_νρσ = <s^μ, [∇_ρ, ∇_σ] s_ν>
  double imag_residue = 0.0;
  Point point{};

  double riemann_antisymmetry() const {
    double r = 0.0;
    for (std::size_t m = 0; m < 4; ++m)
      for (std::size_t n = 0; n < 4; ++n)
        for (std::size_t a = 0; a < 4; ++a)
          for (std::size_t b = 0; b < 4; ++b)
            r = std::max(r, std::abs(riemann[m][n][a][b] + riemann[m][n][b][a]));
    return r;
  }
};

inline CurvatureSample curvature_from_frame(const LocalFrame& frame,
                                            const BasisField& basis,
                                            const GaugeConnection& omega,
                                            const FDConfig& fd,
                                            const Tolerance& tol = {}) {
  const Point& p = frame.point;
  double imag = frame.connection.imag_residue;
  const auto gamma_at = [&](const Point& q) {
    const auto c = gamma_minimal_at(basis, omega, q, fd, tol);
    imag = std::max(imag, c.imag_residue);
    return c.gamma;
  };
  const auto dgamma = gradient(gamma_at, p, fd);  // [rho][mu][nu][sigma]
  const auto& G = frame.connection.gamma;
  const auto t = torsion_at(frame.connection);
  const auto nabla_s = nabla_basis(frame);

  // <s^μ, ∇_τ s_ν>, indexed [mu][nu][tau]
  Rank3 proj{};
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t n = 0; n < 4; ++n)
      for (std::size_t k = 0; k < 4; ++k)
        proj[m][n][k] = inner(frame.dual[m], nabla_s[k][n]).real();

  CurvatureSample out;
  out.point = p;
  for (std::size_t m = 0; m < 4; ++m) {
    for (std::size_t n = 0; n < 4; ++n) {
      for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t s = 0; s < 4; ++s) {
          double v = dgamma[r][m][n][s] - dgamma[s][m][n][r];
          for (std::size_t k = 0; k < 4; ++k) {
            v += G[m][k][r] * G[k][n][s] - G[m][k][s] * G[k][n][r];
          }
          out.riemann[m][n][r][s] = v;
          double c = -v;
          for (std::size_t k = 0; k < 4; ++k) c += t[k][r][s] * proj[m][n][k];
          out.commutator[m][n][r][s] = c;
        }
      }
    }
  }
  out.imag_residue = imag;
  return out;
}

inline CurvatureSample riemann_at(const BasisField& basis,
                                  const GaugeConnection& omega, const Point& p,
                                  const FDConfig& fd,
                                  const Tolerance& tol = {}) {
  return curvature_from_frame(frame_at(basis, omega, p, fd, tol), basis, omega,
                              fd, tol);
}

// [∇_ρ, ∇_σ] s_ν by differencing ∇_σ s_ν directly, indexed [rho][sigma][nu].
// Independent of the Γ-derivative route used by riemann_at.
inline std::array<BiquatMatrix, 4> basis_commutator_direct(
    const LocalFrame& frame, const BasisField& basis,
    const GaugeConnection& omega, const FDConfig& fd,
    const Tolerance& tol = {}) {
  const auto nabla_at = [&](const Point& q) {
    return nabla_basis(frame_at(basis, omega, q, fd, tol));
  };
  const auto dn = gradient(nabla_at, frame.point, fd);  // [rho][sigma][nu]
  const auto n = nabla_basis(frame);
  const auto& G = frame.connection.gamma;
  std::array<BiquatMatrix, 4> out{};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t s = 0; s < 4; ++s) {
      for (std::size_t v = 0; v < 4; ++v) {
        auto x = dn[r][s][v] - dn[s][r][v];
        for (std::size_t k = 0; k < 4; ++k) {
          x += (G[k][r][s] - G[k][s][r]) * n[k][v];
          x += G[k][v][s] * n[r][k] - G[k][v][r] * n[s][k];
        }
        out[r][s][v] = x;
      }
    }
  }
  return out;
}

// max |C^μ_νρσ (from riemann_at) - <s^μ, [∇_ρ, ∇_σ] s_ν> (direct)|.
inline double curvature_crosscheck_residual(
    const LocalFrame& frame, const CurvatureSample& curvature,
    const std::array<BiquatMatrix, 4>& direct) {
  double r = 0.0;
  for (std::size_t m = 0; m < 4; ++m)
    for (std::size_t n = 0; n < 4; ++n)
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b)
          r = std::max(r, std::abs(curvature.commutator[m][n][a][b] -
                                   inner(frame.dual[m], direct[a][b][n])));
  return r;
}

// max over (μ, ρ, σ) of |[∇_ρ, ∇_σ] s_μ + Ω_ρσ s_μ + s_μ Ω̄*_ρσ|.
inline double strength_relation_residual(
    const LocalFrame& frame, const StrengthSample& strength,
    const std::array<BiquatMatrix, 4>& direct) {
  double r = 0.0;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t m = 0; m < 4; ++m)
        r = std::max(r, magnitude(direct[a][b][m] +
                                  vector_coupling(strength.omega[a][b],
                                                  frame.s[m])));
  return r;
}

inline double strength_relation_residual(const BasisField& basis,
                                         const GaugeConnection& omega,
                                         const Point& p, const FDConfig& fd,
                                         const Tolerance& tol = {}) {
  const auto frame = frame_at(basis, omega, p, fd, tol);
  const auto strength = field_strength_from_frame(frame, omega, fd, tol);
  return strength_relation_residual(
      frame, strength, basis_commutator_direct(frame, basis, omega, fd, tol));
}

struct EinsteinHilbertSample {
  double via_ricci = 0.0;  // g^να C^μ_αμν
  double via_omega = 0.0;  // -2 Re <s^μ s̄^ν, Ω_μν>
  // g^να R^μ_αμν with R from the Γ formula. Differs from via_ricci by the
  // sign and a torsion term; reported, not asserted.
  double gamma_formula = 0.0;
};

inline EinsteinHilbertSample lagrangian_eh(const LocalFrame& frame,
                                           const CurvatureSample& curvature,
                                           const StrengthSample& strength) {
  EinsteinHilbertSample out;
  const auto& gi = frame.metric.g_inv;
  for (std::size_t m = 0; m < 4; ++m) {
    for (std::size_t n = 0; n < 4; ++n) {
      for (std::size_t a = 0; a < 4; ++a) {
        const double w = gi(static_cast<int>(n), static_cast<int>(a));
        out.via_ricci += w * curvature.commutator[m][a][m][n];
        out.gamma_formula += w * curvature.riemann[m][a][m][n];
      }
    }
  }
  Complex acc{};
  for (std::size_t m = 0; m < 4; ++m) {
    for (std::size_t n = 0; n < 4; ++n) {
      acc += inner(frame.dual[m] * bar(frame.dual[n]), strength.omega[m][n]);
    }
  }
  out.via_omega = -2.0 * acc.real();
  return out;
}

inline EinsteinHilbertSample lagrangian_eh_at(const BasisField& basis,
                                              const GaugeConnection& omega,
                                              const Point& p,
                                              const FDConfig& fd,
                                              const Tolerance& tol = {}) {
  const auto frame = frame_at(basis, omega, p, fd, tol);
  return lagrangian_eh(frame, curvature_from_frame(frame, basis, omega, fd, tol),
                       field_strength_from_frame(frame, omega, fd, tol));
}

struct QuadraticSample {
  double total = 0.0;  // Re <Ω^μν, Ω_μν>
  double kk = 0.0;     // Re <K^μν, K_μν>
  double ff = 0.0;     // F^μν F_μν
  double coupling = 1.0;

  double identity_residual() const {
    return std::abs(total - (kk - coupling * coupling * ff));
  }
};

namespace detail {

template <class V>
std::array<std::array<V, 4>, 4> raise_both(
    const std::array<std::array<V, 4>, 4>& x, const Matrix4& gi) {
  std::array<std::array<V, 4>, 4> out{};
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          const double w = gi(m, a) * gi(n, b);
          if (w != 0.0) {
            out[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)] +=
                w * x[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
          }
        }
  return out;
}

}  // namespace detail

inline QuadraticSample lagrangian_quadratic(const LocalFrame& frame,
                                            const StrengthSample& strength) {
  QuadraticSample out;
  out.coupling = strength.coupling;
  const auto& gi = frame.metric.g_inv;
  const auto omega_up = detail::raise_both(strength.omega, gi);
  const auto k_up = detail::raise_both(strength.k, gi);
  const auto f_up = detail::raise_both(strength.f, gi);
  for (std::size_t m = 0; m < 4; ++m) {
    for (std::size_t n = 0; n < 4; ++n) {
      out.total += inner(omega_up[m][n], strength.omega[m][n]).real();
      out.kk += inner(k_up[m][n], strength.k[m][n]).real();
      out.ff += f_up[m][n] * strength.f[m][n];
    }
  }
  return out;
}

inline QuadraticSample lagrangian_quadratic_at(const BasisField& basis,
                                               const GaugeConnection& omega,
                                               const Point& p,
                                               const FDConfig& fd,
                                               const Tolerance& tol = {}) {
  const auto frame = frame_at(basis, omega, p, fd, tol);
  return lagrangian_quadratic(frame,
                              field_strength_from_frame(frame, omega, fd, tol));
}

}  // namespace qframe
