#pragma once

#include <array>
#include <complex>
#include <random>
#include <string>

#include "qframe/transform.hpp"

namespace qframe::test {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double real(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  Complex complex(double scale = 1.0) {
    return {scale * real(), scale * real()};
  }
  Biquaternion biquat(double scale = 1.0) {
    return {complex(scale), complex(scale), complex(scale), complex(scale)};
  }
  Biquaternion vector(double scale = 1.0) {
    return {0.0, complex(scale), complex(scale), complex(scale)};
  }
  Biquaternion minus_part(double scale = 1.0) { return pm_split(biquat(scale)).minus; }
  Point point(double scale = 0.5) {
    return {real(-scale, scale), real(-scale, scale), real(-scale, scale),
            real(-scale, scale)};
  }

 private:
  std::mt19937_64 rng_;
};

// Independent representation: e_k -> -i sigma_k on 2x2 complex matrices.
// Product becomes the matrix product, bar the adjugate, N the determinant.
using Mat2 = std::array<Complex, 4>;  // row-major a b / c d

inline Mat2 to_matrix(const Biquaternion& x) {
  const Complex i{0.0, 1.0};
  // c0 I - i (c1 s1 + c2 s2 + c3 s3)
  return {x[0] - i * x[3], -i * x[1] - x[2], -i * x[1] + x[2], x[0] + i * x[3]};
}

inline Biquaternion from_matrix(const Mat2& m) {
  const Complex i{0.0, 1.0};
  const Complex c0 = 0.5 * (m[0] + m[3]);
  const Complex c3 = 0.5 * i * (m[0] - m[3]);
  const Complex c1 = 0.5 * i * (m[1] + m[2]);
  const Complex c2 = 0.5 * (m[2] - m[1]);
  return {c0, c1, c2, c3};
}

inline Mat2 mat_mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}
inline Mat2 adjugate(const Mat2& a) { return {a[3], -a[1], -a[2], a[0]}; }
inline Complex det(const Mat2& a) { return a[0] * a[3] - a[1] * a[2]; }

inline FieldFn field(const std::array<std::string, 4>& texts,
                     const Chart& chart = Chart()) {
  return BiquatField::parse(texts, chart);
}

inline ScalarFn scalar(const std::string& text, const Chart& chart = Chart()) {
  return scalar_field(parse_expr(text, chart));
}

inline BasisField flat_basis() {
  return {{field({"im", "0", "0", "0"}), field({"0", "1", "0", "0"}),
           field({"0", "0", "1", "0"}), field({"0", "0", "0", "1"})}};
}

// g_00 = -exp(2t), others flat.
inline BasisField scaled_basis() {
  return {{field({"im*exp(t)", "0", "0", "0"}), field({"0", "1", "0", "0"}),
           field({"0", "0", "1", "0"}), field({"0", "0", "0", "1"})}};
}

inline BasisField mixing_basis() {
  return {{field({"im", "0", "0", "0"}), field({"0", "1", "t", "0"}),
           field({"0", "0", "1", "0"}), field({"0", "0", "0", "1"})}};
}

// A generic curved basis with a gauge field carrying both vector and U(1)
// parts; reference values for it were produced by an independent
// implementation.
inline BasisField generic_basis() {
  return {{field({"im*exp(0.3*x)", "0", "0", "0"}), field({"0", "1", "0.5*t", "0"}),
           field({"0", "0", "1", "0.2*y"}), field({"0", "0.1*z", "0", "1"})}};
}

inline GaugeConnection generic_omega(double coupling = 1.0) {
  return {{field({"0.2*im*x", "0.3*y", "0.1*im*t", "0.05*z*t"}),
           field({"0.1*im", "0.2*t", "0.1*z", "0.3*im*x"}),
           field({"0", "0.1*x*t", "0.2*im", "0.1"}),
           field({"0.3*im*t", "0.1", "0.2*y", "0.1*im*x*z"})},
          coupling};
}

inline constexpr Point kGenericPoint{0.3, 0.2, -0.1, 0.4};

// A_1 = t as a pure U(1) gauge field.
inline GaugeConnection u1_omega(double coupling = 1.0) {
  const std::string a = std::to_string(coupling) + "*im*t";
  return {{field({"0", "0", "0", "0"}), field({a, "0", "0", "0"}),
           field({"0", "0", "0", "0"}), field({"0", "0", "0", "0"})},
          coupling};
}

inline double distance(const Biquaternion& a, const Biquaternion& b) {
  return magnitude(a - b);
}

}  // namespace qframe::test
