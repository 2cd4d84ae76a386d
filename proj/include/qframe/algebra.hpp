#pragma once

// Complexified quaternions C⊗H.
//
// An element is stored as four complex coefficients on the units
// {1, e1, e2, e3} with e1 e2 = e3, e2 e3 = e1, e3 e1 = e2 and e_k² = -1.
// The complex unit i commutes with every e_k.

#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <optional>
#include <ostream>

#include "qframe/errors.hpp"

namespace qframe {

// Absolute/relative tolerance pair. A residual r measured against a value of
// magnitude s is accepted when r <= abs + rel * s.
struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-12;

  constexpr bool valid() const noexcept {
    return abs >= 0.0 && rel >= 0.0 && std::isfinite(abs) && std::isfinite(rel);
  }
  constexpr double bound(double scale = 0.0) const noexcept {
    return abs + rel * scale;
  }
  constexpr bool accepts(double residual, double scale = 0.0) const noexcept {
    return residual <= bound(scale);
  }
};

enum class Conjugation {
  kQuaternionic,  // x̄: negates the vector part
  kComplex,       // x*: conjugates every coefficient
  kBarStar,       // x̄*: both, in either order
};

template <std::floating_point T>
class BasicBiquaternion {
 public:
  using scalar_type = std::complex<T>;

  constexpr BasicBiquaternion() = default;
  constexpr BasicBiquaternion(scalar_type c0, scalar_type c1 = {},
                              scalar_type c2 = {}, scalar_type c3 = {})
      : c_{c0, c1, c2, c3} {}
  constexpr explicit BasicBiquaternion(const std::array<scalar_type, 4>& c)
      : c_(c) {}

  static constexpr BasicBiquaternion one() { return {scalar_type{1}}; }
  static constexpr BasicBiquaternion imag() { return {scalar_type{0, 1}}; }
  // Unit k in {0: 1, 1: e1, 2: e2, 3: e3}.
  static constexpr BasicBiquaternion unit(int k) {
    BasicBiquaternion u;
    u.c_[static_cast<std::size_t>(k)] = scalar_type{1};
    return u;
  }

  constexpr const scalar_type& operator[](int k) const {
    return c_[static_cast<std::size_t>(k)];
  }
  constexpr scalar_type& operator[](int k) {
    return c_[static_cast<std::size_t>(k)];
  }
  constexpr const std::array<scalar_type, 4>& coefficients() const noexcept {
    return c_;
  }

  constexpr BasicBiquaternion scalar_part() const { return {c_[0]}; }
  constexpr BasicBiquaternion vector_part() const {
    return {scalar_type{}, c_[1], c_[2], c_[3]};
  }

  constexpr BasicBiquaternion& operator+=(const BasicBiquaternion& o) {
    for (std::size_t k = 0; k < 4; ++k) c_[k] += o.c_[k];
    return *this;
  }
  constexpr BasicBiquaternion& operator-=(const BasicBiquaternion& o) {
    for (std::size_t k = 0; k < 4; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  constexpr BasicBiquaternion& operator*=(scalar_type s) {
    for (auto& c : c_) c *= s;
    return *this;
  }
  constexpr BasicBiquaternion& operator*=(T s) {
    for (auto& c : c_) c *= s;
    return *this;
  }
  constexpr BasicBiquaternion& operator/=(T s) {
    for (auto& c : c_) c /= s;
    return *this;
  }

  friend constexpr BasicBiquaternion operator+(BasicBiquaternion a,
                                               const BasicBiquaternion& b) {
    return a += b;
  }
  friend constexpr BasicBiquaternion operator-(BasicBiquaternion a,
                                               const BasicBiquaternion& b) {
    return a -= b;
  }
  friend constexpr BasicBiquaternion operator-(BasicBiquaternion a) {
    for (auto& c : a.c_) c = -c;
    return a;
  }
  friend constexpr BasicBiquaternion operator*(BasicBiquaternion a,
                                               scalar_type s) {
    return a *= s;
  }
  friend constexpr BasicBiquaternion operator*(scalar_type s,
                                               BasicBiquaternion a) {
    return a *= s;
  }
  friend constexpr BasicBiquaternion operator*(BasicBiquaternion a, T s) {
    return a *= s;
  }
  friend constexpr BasicBiquaternion operator*(T s, BasicBiquaternion a) {
    return a *= s;
  }
  friend constexpr BasicBiquaternion operator/(BasicBiquaternion a, T s) {
    return a /= s;
  }

  // The C⊗H product.
  friend constexpr BasicBiquaternion operator*(const BasicBiquaternion& a,
                                               const BasicBiquaternion& b) {
    const auto& x = a.c_;
    const auto& y = b.c_;
    return {x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3],
            x[0] * y[1] + x[1] * y[0] + x[2] * y[3] - x[3] * y[2],
            x[0] * y[2] + x[2] * y[0] + x[3] * y[1] - x[1] * y[3],
            x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]};
  }

  friend constexpr bool operator==(const BasicBiquaternion&,
                                   const BasicBiquaternion&) = default;

  friend std::ostream& operator<<(std::ostream& os,
                                  const BasicBiquaternion& x) {
    return os << '[' << x.c_[0] << ", " << x.c_[1] << " e1, " << x.c_[2]
              << " e2, " << x.c_[3] << " e3]";
  }

 private:
  std::array<scalar_type, 4> c_{};
};

using Complex = std::complex<double>;
using Biquaternion = BasicBiquaternion<double>;

template <std::floating_point T>
constexpr BasicBiquaternion<T> mul(const BasicBiquaternion<T>& x,
                                   const BasicBiquaternion<T>& y) {
  return x * y;
}

template <std::floating_point T>
constexpr BasicBiquaternion<T> bar(const BasicBiquaternion<T>& x) {
  return {x[0], -x[1], -x[2], -x[3]};
}

template <std::floating_point T>
constexpr BasicBiquaternion<T> star(const BasicBiquaternion<T>& x) {
  return {std::conj(x[0]), std::conj(x[1]), std::conj(x[2]), std::conj(x[3])};
}

template <std::floating_point T>
constexpr BasicBiquaternion<T> bar_star(const BasicBiquaternion<T>& x) {
  return {std::conj(x[0]), -std::conj(x[1]), -std::conj(x[2]),
          -std::conj(x[3])};
}

template <std::floating_point T>
constexpr BasicBiquaternion<T> conjugate(const BasicBiquaternion<T>& x,
                                         Conjugation kind) {
  switch (kind) {
    case Conjugation::kQuaternionic:
      return bar(x);
    case Conjugation::kComplex:
      return star(x);
    case Conjugation::kBarStar:
      return bar_star(x);
  }
  return x;
}

template <std::floating_point T>
struct ScalVecParts {
  BasicBiquaternion<T> scal;
  BasicBiquaternion<T> vec;
};

template <std::floating_point T>
constexpr ScalVecParts<T> scal_vec_split(const BasicBiquaternion<T>& x) {
  return {x.scalar_part(), x.vector_part()};
}

// (C⊗H)⁻ = {x̄* = -x} and (C⊗H)⁺ = {x̄* = +x}.
template <std::floating_point T>
struct PlusMinusParts {
  BasicBiquaternion<T> minus;
  BasicBiquaternion<T> plus;
};

template <std::floating_point T>
constexpr PlusMinusParts<T> pm_split(const BasicBiquaternion<T>& x) {
  const auto xs = bar_star(x);
  return {(x - xs) * T(0.5), (x + xs) * T(0.5)};
}

// Euclidean length of the eight real components. Used for residuals only.
template <std::floating_point T>
T magnitude(const BasicBiquaternion<T>& x) {
  T sum = 0;
  for (const auto& c : x.coefficients()) sum += std::norm(c);
  return std::sqrt(sum);
}

template <std::floating_point T>
bool is_finite(const BasicBiquaternion<T>& x) {
  for (const auto& c : x.coefficients()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

// Bilinear inner product, 2<x,y> = x ȳ + y x̄. The vector part of the
// right-hand side vanishes identically, so only the scalar is returned.
template <std::floating_point T>
constexpr std::complex<T> inner(const BasicBiquaternion<T>& x,
                                const BasicBiquaternion<T>& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3];
}

// N(x) = x x̄ (a complex scalar).
template <std::floating_point T>
constexpr std::complex<T> norm(const BasicBiquaternion<T>& x) {
  return inner(x, x);
}

template <std::floating_point T>
struct NormInverse {
  std::complex<T> norm;
  // Empty when x is a zero divisor (|N(x)| within tolerance of zero).
  std::optional<BasicBiquaternion<T>> inverse;
};

template <std::floating_point T>
NormInverse<T> norm_and_inverse(const BasicBiquaternion<T>& x,
                                const Tolerance& tol = {}) {
  const auto n = norm(x);
  const T scale = magnitude(x) * magnitude(x);
  if (std::abs(n) <= tol.bound(scale)) return {n, std::nullopt};
  auto inv = bar(x);
  inv *= std::complex<T>(1) / n;
  return {n, inv};
}

template <std::floating_point T>
BasicBiquaternion<T> inverse(const BasicBiquaternion<T>& x,
                             const Tolerance& tol = {}) {
  auto r = norm_and_inverse(x, tol);
  if (!r.inverse) throw ZeroDivisorError("biquaternion is a zero divisor");
  return *r.inverse;
}

// exp(q) for q in C⊗Vec(H). With θ² = N(q) = -q², exp(q) = cos θ + (sin θ/θ) q.
// Both factors are even in θ, so the branch of the square root is irrelevant.
template <std::floating_point T>
BasicBiquaternion<T> exp_vec(const BasicBiquaternion<T>& q,
                             const Tolerance& tol = {}) {
  if (std::abs(q[0]) > tol.bound(magnitude(q))) {
    throw PreconditionError("exp_vec: generator has a nonzero scalar part");
  }
  const auto theta2 = q[1] * q[1] + q[2] * q[2] + q[3] * q[3];
  std::complex<T> c;
  std::complex<T> sinc;
  if (std::abs(theta2) < T(1e-8)) {
    const auto theta4 = theta2 * theta2;
    c = T(1) - theta2 / T(2) + theta4 / T(24);
    sinc = T(1) - theta2 / T(6) + theta4 / T(120);
  } else {
    const auto theta = std::sqrt(theta2);
    c = std::cos(theta);
    sinc = std::sin(theta) / theta;
  }
  return {c, sinc * q[1], sinc * q[2], sinc * q[3]};
}

template <std::floating_point T>
constexpr BasicBiquaternion<T> commutator(const BasicBiquaternion<T>& x,
                                          const BasicBiquaternion<T>& y) {
  return x * y - y * x;
}

}  // namespace qframe
