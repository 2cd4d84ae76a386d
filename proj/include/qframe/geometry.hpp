#pragma once

// Frame-free metric structure built from a basis s_μ ∈ (C⊗H)⁻ and a gauge
// connection ω_μ:
//
//   g_μν = <s_μ, s_ν>,    s^μ = g^μν s_ν,
//   Γ^μ_νρ = <s^μ, ∂_ρ s_ν + ω_ρ s_ν + s_ν ω̄*_ρ>       (minimal connection)
//
// Index conventions for arrays: Γ is stored as gamma[mu][nu][rho] with rho the
// derivative slot, so ∇_ρ s_ν = ∂_ρ s_ν - Γ^μ_νρ s_μ.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "qframe/algebra.hpp"
#include "qframe/fields.hpp"

namespace qframe {

using BasisValues = std::array<Biquaternion, 4>;
using Matrix4 = Eigen::Matrix4d;
using Rank2 = std::array<std::array<double, 4>, 4>;
using Rank3 = std::array<Rank2, 4>;
using Rank4 = std::array<Rank3, 4>;

template <class A>
double max_abs(const A& a) {
  if constexpr (std::is_arithmetic_v<A>) {
    return std::abs(a);
  } else {
    double m = 0.0;
    for (const auto& x : a) m = std::max(m, max_abs(x));
    return m;
  }
}

// s_0..s_3. Every value must lie in (C⊗H)⁻ and span C⊗H over C.
struct BasisField {
  std::array<FieldFn, 4> s;

  BasisValues operator()(const Point& p) const {
    return {s[0](p), s[1](p), s[2](p), s[3](p)};
  }
};

// ω_0..ω_3 with coupling g. Admissible when Scal(ω_μ + ω̄*_μ) = 0.
struct GaugeConnection {
  std::array<FieldFn, 4> omega;
  double coupling = 1.0;

  BasisValues operator()(const Point& p) const {
    return {omega[0](p), omega[1](p), omega[2](p), omega[3](p)};
  }

  static GaugeConnection zero(double coupling = 1.0) {
    const FieldFn z = constant_field({});
    return {{z, z, z, z}, coupling};
  }
};

// Throws BasisError when some s_μ(p) has a (C⊗H)⁺ component above tolerance.
inline void require_minus_part(const BasisValues& s, const Tolerance& tol) {
  for (int mu = 0; mu < 4; ++mu) {
    const auto& v = s[static_cast<std::size_t>(mu)];
    const double plus = magnitude(pm_split(v).plus);
    if (!tol.accepts(plus, magnitude(v))) {
      throw BasisError("basis s_" + std::to_string(mu) +
                           " is not in the minus part (|plus part| = " +
                           std::to_string(plus) + ")",
                       mu);
    }
  }
}

inline BasisValues evaluate_basis(const BasisField& basis, const Point& p,
                                  const Tolerance& tol = {}) {
  auto s = basis(p);
  require_minus_part(s, tol);
  return s;
}

// <s_μ, s_ν> without any checks; entries may carry an imaginary residue.
inline std::array<std::array<Complex, 4>, 4> raw_gram(const BasisValues& s) {
  std::array<std::array<Complex, 4>, 4> g{};
  for (std::size_t m = 0; m < 4; ++m) {
    for (std::size_t n = m; n < 4; ++n) {
      g[m][n] = inner(s[m], s[n]);
      g[n][m] = g[m][n];
    }
  }
  return g;
}

struct MetricSample {
  Matrix4 g;
  Matrix4 g_inv;
  double det = 0.0;
  // max |Im <s_μ, s_ν>| before it was discarded.
  double imag_residue = 0.0;
  Point point{};
};

inline MetricSample metric_from_values(const BasisValues& s, const Point& p,
                                       const Tolerance& tol = {}) {
  const auto gram = raw_gram(s);
  MetricSample out;
  out.point = p;
  double scale = 0.0;
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      const auto& v = gram[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)];
      out.g(m, n) = v.real();
      out.imag_residue = std::max(out.imag_residue, std::abs(v.imag()));
      scale = std::max(scale, std::abs(v));
    }
  }
  if (!tol.accepts(out.imag_residue, scale)) {
    throw RealnessError("metric has an imaginary residue of " +
                        std::to_string(out.imag_residue));
  }
  out.det = out.g.determinant();
  if (std::abs(out.det) <= tol.bound(std::pow(scale, 4))) {
    throw DegenerateMetricError("metric is degenerate (det g = " +
                                std::to_string(out.det) + ")");
  }
  const Matrix4 inv = out.g.inverse();
  out.g_inv = 0.5 * (inv + inv.transpose());
  return out;
}

inline MetricSample metric_at(const BasisField& basis, const Point& p,
                              const Tolerance& tol = {}) {
  return metric_from_values(evaluate_basis(basis, p, tol), p, tol);
}

inline BasisValues raise(const BasisValues& lower, const Matrix4& g_inv) {
  BasisValues up{};
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      up[static_cast<std::size_t>(m)] +=
          g_inv(m, n) * lower[static_cast<std::size_t>(n)];
    }
  }
  return up;
}

inline BasisValues dual_basis_at(const BasisField& basis, const Point& p,
                                 const Tolerance& tol = {}) {
  const auto s = evaluate_basis(basis, p, tol);
  return raise(s, metric_from_values(s, p, tol).g_inv);
}

struct ConnectionSample {
  Rank3 gamma{};  // gamma[mu][nu][rho]
  double imag_residue = 0.0;
  Point point{};

  double operator()(int mu, int nu, int rho) const {
    return gamma[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)]
                [static_cast<std::size_t>(rho)];
  }
};

// Everything the pointwise checks need about (s, ω) at one point.
struct LocalFrame {
  Point point{};
  BasisValues s{};
  BasisValues dual{};
  MetricSample metric;
  BasisValues omega{};
  // ds[rho][nu] = ∂_ρ s_ν
  std::array<BasisValues, 4> ds{};
  ConnectionSample connection;
};

// x ↦ ω x + x ω̄*, the vector-species coupling.
inline Biquaternion vector_coupling(const Biquaternion& omega,
                                    const Biquaternion& x) {
  return omega * x + x * bar_star(omega);
}

inline LocalFrame frame_at(const BasisField& basis,
                           const GaugeConnection& omega, const Point& p,
                           const FDConfig& fd, const Tolerance& tol = {}) {
  fd.validate();
  LocalFrame f;
  f.point = p;
  f.s = evaluate_basis(basis, p, tol);
  f.metric = metric_from_values(f.s, p, tol);
  f.dual = raise(f.s, f.metric.g_inv);
  f.omega = omega(p);
  const auto checked = [&](const Point& q) { return evaluate_basis(basis, q, tol); };
  f.ds = gradient(checked, p, fd);

  f.connection.point = p;
  double scale = 0.0;
  for (std::size_t nu = 0; nu < 4; ++nu) {
    for (std::size_t rho = 0; rho < 4; ++rho) {
      const auto x = f.ds[rho][nu] + vector_coupling(f.omega[rho], f.s[nu]);
      for (std::size_t mu = 0; mu < 4; ++mu) {
        const auto v = inner(f.dual[mu], x);
        f.connection.gamma[mu][nu][rho] = v.real();
        f.connection.imag_residue =
            std::max(f.connection.imag_residue, std::abs(v.imag()));
        scale = std::max(scale, std::abs(v));
      }
    }
  }
  // Differencing amplifies rounding in s by ~1/h, so the gate allows for it
  // on top of the algebraic tolerance.
  double s_mag = 0.0;
  double dual_mag = 0.0;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    s_mag = std::max(s_mag, magnitude(f.s[mu]));
    dual_mag = std::max(dual_mag, magnitude(f.dual[mu]));
  }
  const double h = *std::min_element(fd.step.begin(), fd.step.end());
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * s_mag * dual_mag / h;
  if (f.connection.imag_residue > tol.bound(scale) + noise) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "connection coefficients have an imaginary residue of %.3e",
                  f.connection.imag_residue);
    throw RealnessError(msg);
  }
  return f;
}

inline ConnectionSample gamma_minimal_at(const BasisField& basis,
                                         const GaugeConnection& omega,
                                         const Point& p, const FDConfig& fd,
                                         const Tolerance& tol = {}) {
  return frame_at(basis, omega, p, fd, tol).connection;
}

// ∇_ρ s_ν = ∂_ρ s_ν - Γ^μ_νρ s_μ, indexed [rho][nu].
inline std::array<BasisValues, 4> nabla_basis(const LocalFrame& f) {
  std::array<BasisValues, 4> out{};
  for (std::size_t rho = 0; rho < 4; ++rho) {
    for (std::size_t nu = 0; nu < 4; ++nu) {
      auto v = f.ds[rho][nu];
      for (std::size_t mu = 0; mu < 4; ++mu) {
        v -= f.connection.gamma[mu][nu][rho] * f.s[mu];
      }
      out[rho][nu] = v;
    }
  }
  return out;
}

// D_ρ s_ν = ∇_ρ s_ν + ω_ρ s_ν + s_ν ω̄*_ρ, indexed [rho][nu].
inline std::array<BasisValues, 4> covariant_basis_derivative(
    const LocalFrame& f) {
  auto out = nabla_basis(f);
  for (std::size_t rho = 0; rho < 4; ++rho) {
    for (std::size_t nu = 0; nu < 4; ++nu) {
      out[rho][nu] += vector_coupling(f.omega[rho], f.s[nu]);
    }
  }
  return out;
}

// max_{ρ,ν} |D_ρ s_ν|; zero when Γ is the minimal connection.
inline double minimality_residual(const LocalFrame& f) {
  double m = 0.0;
  for (const auto& row : covariant_basis_derivative(f)) {
    for (const auto& v : row) m = std::max(m, magnitude(v));
  }
  return m;
}

enum class Species { kLeftSpinor, kRightSpinor, kVector, kScalar };

// Transformation behaviour plus the number of coordinate indices. Index
// values are passed contravariant slots first, then covariant slots.
struct SpeciesTag {
  Species species = Species::kScalar;
  int contravariant = 0;
  int covariant = 0;

  int rank() const noexcept { return contravariant + covariant; }
};

using TensorFn = std::function<Biquaternion(const Point&, std::span<const int>)>;

struct TensorField {
  SpeciesTag tag;
  TensorFn fn;

  static TensorField rank0(Species species, FieldFn f) {
    return {{species, 0, 0},
            [f = std::move(f)](const Point& p, std::span<const int>) {
              return f(p);
            }};
  }

  // s_ν as a type (0,1) tensor-valued vector field.
  static TensorField basis(const BasisField& b) {
    return {{Species::kVector, 0, 1},
            [b](const Point& p, std::span<const int> idx) {
              return b.s[static_cast<std::size_t>(idx[0])](p);
            }};
  }
};

// Species coupling term added after ∇.
inline Biquaternion species_coupling(Species species, const Biquaternion& omega,
                                     const Biquaternion& value) {
  switch (species) {
    case Species::kLeftSpinor:
      return omega * value;
    case Species::kRightSpinor:
      return value * bar_star(omega);
    case Species::kVector:
      return vector_coupling(omega, value);
    case Species::kScalar:
      return {};
  }
  return {};
}

// D_ρ f at p for one tensor component.
inline Biquaternion covariant_derivative_at(const TensorField& f,
                                            std::span<const int> indices,
                                            int rho,
                                            const BasisValues& omega_at_p,
                                            const ConnectionSample& gamma,
                                            const Point& p,
                                            const FDConfig& fd) {
  if (static_cast<int>(indices.size()) != f.tag.rank()) {
    throw RankMismatchError("covariant derivative: expected " +
                            std::to_string(f.tag.rank()) + " indices, got " +
                            std::to_string(indices.size()));
  }
  for (int i : indices) {
    if (i < 0 || i > 3) throw RankMismatchError("index out of range");
  }
  std::vector<int> idx(indices.begin(), indices.end());
  const auto value_at = [&](const Point& q) { return f.fn(q, idx); };
  Biquaternion out = partial(value_at, rho, p, fd);

  for (int slot = 0; slot < f.tag.rank(); ++slot) {
    const bool upper = slot < f.tag.contravariant;
    const int original = idx[static_cast<std::size_t>(slot)];
    for (int tau = 0; tau < 4; ++tau) {
      idx[static_cast<std::size_t>(slot)] = tau;
      const double c = upper ? gamma(original, tau, rho) : -gamma(tau, original, rho);
      if (c != 0.0) out += c * f.fn(p, idx);
    }
    idx[static_cast<std::size_t>(slot)] = original;
  }
  const auto value = f.fn(p, idx);
  return out + species_coupling(f.tag.species,
                                omega_at_p[static_cast<std::size_t>(rho)], value);
}

inline Biquaternion covariant_derivative_at(const TensorField& f,
                                            std::span<const int> indices,
                                            int rho,
                                            const GaugeConnection& omega,
                                            const ConnectionSample& gamma,
                                            const Point& p,
                                            const FDConfig& fd) {
  return covariant_derivative_at(f, indices, rho, omega(p), gamma, p, fd);
}

// T^ρ_μν = Γ^ρ_μν - Γ^ρ_νμ, stored torsion[rho][mu][nu].
inline Rank3 torsion_at(const ConnectionSample& c) {
  Rank3 t{};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t m = 0; m < 4; ++m) {
      for (std::size_t n = 0; n < 4; ++n) {
        t[r][m][n] = c.gamma[r][m][n] - c.gamma[r][n][m];
      }
    }
  }
  return t;
}

inline Rank2 to_rank2(const Matrix4& m) {
  Rank2 out{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    }
  }
  return out;
}

// ∂_ρ g_μν by differencing the metric itself, indexed [rho][mu][nu].
inline Rank3 metric_gradient(const BasisField& basis, const Point& p,
                             const FDConfig& fd) {
  const auto g = [&](const Point& q) {
    const auto gram = raw_gram(basis(q));
    Rank2 out{};
    for (std::size_t m = 0; m < 4; ++m) {
      for (std::size_t n = 0; n < 4; ++n) out[m][n] = gram[m][n].real();
    }
    return out;
  };
  return gradient(g, p, fd);
}

// ∇_ρ g_μν = ∂_ρ g_μν - Γ^σ_μρ g_σν - Γ^σ_νρ g_μσ, indexed [rho][mu][nu].
inline Rank3 nabla_metric(const LocalFrame& f, const Rank3& dg) {
  Rank3 out{};
  const auto& G = f.connection.gamma;
  const auto& g = f.metric.g;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t m = 0; m < 4; ++m) {
      for (std::size_t n = 0; n < 4; ++n) {
        double v = dg[r][m][n];
        for (std::size_t s = 0; s < 4; ++s) {
          v -= G[s][m][r] * g(static_cast<int>(s), static_cast<int>(n)) +
               G[s][n][r] * g(static_cast<int>(m), static_cast<int>(s));
        }
        out[r][m][n] = v;
      }
    }
  }
  return out;
}

inline Rank3 nabla_metric_residual(const BasisField& basis,
                                   const GaugeConnection& omega,
                                   const Point& p, const FDConfig& fd,
                                   const Tolerance& tol = {}) {
  const auto f = frame_at(basis, omega, p, fd, tol);
  return nabla_metric(f, metric_gradient(basis, p, fd));
}

// D_ρ g_μν built by the Leibniz rule from D_ρ s, <D_ρ s_μ, s_ν> + <s_μ, D_ρ s_ν>,
// minus ∇_ρ g_μν. Zero when ω obeys the scalar condition.
inline Rank3 metric_leibniz_residual(const BasisField& basis,
                                     const GaugeConnection& omega,
                                     const Point& p, const FDConfig& fd,
                                     const Tolerance& tol = {}) {
  const auto f = frame_at(basis, omega, p, fd, tol);
  const auto ds = covariant_basis_derivative(f);
  const auto nabla = nabla_metric(f, metric_gradient(basis, p, fd));
  Rank3 out{};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t m = 0; m < 4; ++m) {
      for (std::size_t n = 0; n < 4; ++n) {
        const auto dg = inner(ds[r][m], f.s[n]) + inner(f.s[m], ds[r][n]);
        out[r][m][n] = std::abs(dg - nabla[r][m][n]);
      }
    }
  }
  return out;
}

// Christoffel symbols of g_μν, stored [rho][mu][nu] = {ρ, μν}.
inline Rank3 christoffel_at(const BasisField& basis, const Point& p,
                            const FDConfig& fd, const Tolerance& tol = {}) {
  const auto metric = metric_at(basis, p, tol);
  const auto dg = metric_gradient(basis, p, fd);
  Rank3 out{};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t m = 0; m < 4; ++m) {
      for (std::size_t n = 0; n < 4; ++n) {
        double v = 0.0;
        for (std::size_t s = 0; s < 4; ++s) {
          v += metric.g_inv(static_cast<int>(r), static_cast<int>(s)) *
               (dg[m][s][n] + dg[n][m][s] - dg[s][m][n]);
        }
        out[r][m][n] = 0.5 * v;
      }
    }
  }
  return out;
}

// Γ^ρ_μν - {ρ, μν}, with the minimal Γ's derivative slot last. Diagnostic
// only: nothing forces the minimal connection to be the Levi-Civita one.
inline Rank3 christoffel_difference_at(const BasisField& basis,
                                       const GaugeConnection& omega,
                                       const Point& p, const FDConfig& fd,
                                       const Tolerance& tol = {}) {
  const auto gamma = gamma_minimal_at(basis, omega, p, fd, tol);
  const auto chris = christoffel_at(basis, p, fd, tol);
  Rank3 out{};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t m = 0; m < 4; ++m) {
      for (std::size_t n = 0; n < 4; ++n) {
        out[r][m][n] = gamma.gamma[r][m][n] - chris[r][m][n];
      }
    }
  }
  return out;
}

// For V = V^μ s_μ: |<s^μ, D_ρ V> - (∂_ρ V^μ + Γ^μ_νρ V^ν)|, indexed [mu][rho].
inline Rank2 component_identity_check(const std::array<ScalarFn, 4>& components,
                                      const BasisField& basis,
                                      const GaugeConnection& omega,
                                      const Point& p, const FDConfig& fd,
                                      const Tolerance& tol = {}) {
  const auto f = frame_at(basis, omega, p, fd, tol);
  const auto assembled = [&](const Point& q) {
    const auto s = basis(q);
    Biquaternion v;
    for (std::size_t m = 0; m < 4; ++m) v += components[m](q) * s[m];
    return v;
  };
  const auto comps = [&](const Point& q) {
    std::array<Complex, 4> c{};
    for (std::size_t m = 0; m < 4; ++m) c[m] = components[m](q);
    return c;
  };
  const auto v = assembled(p);
  const auto c = comps(p);
  Rank2 out{};
  for (int rho = 0; rho < 4; ++rho) {
    const auto r = static_cast<std::size_t>(rho);
    const auto dv = partial(assembled, rho, p, fd) +
                    vector_coupling(f.omega[r], v);
    const auto dc = partial(comps, rho, p, fd);
    for (std::size_t mu = 0; mu < 4; ++mu) {
      Complex rhs = dc[mu];
      for (std::size_t nu = 0; nu < 4; ++nu) {
        rhs += f.connection.gamma[mu][nu][r] * c[nu];
      }
      out[mu][r] = std::abs(inner(f.dual[mu], dv) - rhs);
    }
  }
  return out;
}

}  // namespace qframe
