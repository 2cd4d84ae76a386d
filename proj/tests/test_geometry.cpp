#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace qframe {
namespace {

using test::field;

const FDConfig kFD;
const Complex kI{0.0, 1.0};

TEST(Geometry, FlatMetricIsMinkowski) {
  const auto m = metric_at(test::flat_basis(), {0.1, -0.2, 0.3, 0.4});
  Matrix4 eta = Matrix4::Identity();
  eta(0, 0) = -1.0;
  EXPECT_LE((m.g - eta).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_EQ(m.imag_residue, 0.0);
  EXPECT_DOUBLE_EQ(m.det, -1.0);
}

TEST(Geometry, ScaledMetric) {
  const Point p{0.4, 0.0, 0.1, 0.0};
  const auto m = metric_at(test::scaled_basis(), p);
  EXPECT_NEAR(m.g(0, 0), -std::exp(0.8), 1e-14);
  for (int i = 1; i < 4; ++i) EXPECT_EQ(m.g(0, i), 0.0);
}

TEST(Geometry, DegenerateAndInvalidBases) {
  BasisField repeated = test::flat_basis();
  repeated.s[0] = field({"0", "1", "0", "0"});
  EXPECT_THROW(metric_at(repeated, {}), DegenerateMetricError);

  BasisField plus = test::flat_basis();
  plus.s[0] = field({"1", "0", "0", "0"});
  try {
    metric_at(plus, {});
    FAIL();
  } catch (const BasisError& e) {
    EXPECT_EQ(e.index(), 0);
    EXPECT_NE(std::string(e.what()).find("s_0"), std::string::npos);
  }
}

TEST(Geometry, DualBasis) {
  const auto flat = dual_basis_at(test::flat_basis(), {});
  EXPECT_EQ(flat[0], -kI * Biquaternion::one());
  for (int k = 1; k < 4; ++k) EXPECT_EQ(flat[static_cast<std::size_t>(k)], Biquaternion::unit(k));

  const double t = 0.3;
  const auto scaled = dual_basis_at(test::scaled_basis(), {t, 0, 0, 0});
  EXPECT_LE(test::distance(scaled[0], -std::exp(-t) * kI * Biquaternion::one()), 1e-15);
}

TEST(Geometry, DualPairingAndRoundTrip) {
  test::Sampler rng(41);
  const auto basis = test::generic_basis();
  for (int n = 0; n < 100; ++n) {
    const auto p = rng.point();
    const auto s = basis(p);
    const auto m = metric_from_values(s, p);
    const auto up = raise(s, m.g_inv);
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = 0; b < 4; ++b) {
        ASSERT_LE(std::abs(inner(up[a], s[b]) - (a == b ? 1.0 : 0.0)), 1e-10);
      }
    }
    ASSERT_LE((m.g * m.g_inv - Matrix4::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    ASSERT_EQ(m.g, m.g.transpose());
    ASSERT_LE(m.imag_residue, 1e-13);
  }
}

TEST(Geometry, FlatConnectionVanishes) {
  const auto c = gamma_minimal_at(test::flat_basis(), GaugeConnection::zero(), {0.1, 0.2, 0.3, 0.4}, kFD);
  EXPECT_EQ(max_abs(c.gamma), 0.0);
}

// ω s + s ω̄* vanishes for a purely imaginary scalar ω.
TEST(Geometry, PureU1LeavesConnectionZero) {
  const auto c = gamma_minimal_at(test::flat_basis(), test::u1_omega(0.7), {0.3, 0.1, 0, 0}, kFD);
  EXPECT_EQ(max_abs(c.gamma), 0.0);
}

TEST(Geometry, ScaledConnection) {
  const auto c = gamma_minimal_at(test::scaled_basis(), GaugeConnection::zero(), {0.2, 0.1, -0.3, 0.0}, kFD);
  EXPECT_NEAR(c(0, 0, 0), 1.0, 1e-10);
  Rank3 rest = c.gamma;
  rest[0][0][0] = 0.0;
  EXPECT_LE(max_abs(rest), 1e-12);
}

// s_1 = e1 + t e2: ∂_t s_1 = e2 = s_2, so the only nonzero coefficient is
// Γ^2_10 = 1 and the torsion is T^2_10 = -T^2_01 = 1.
TEST(Geometry, MixingBasisTorsion) {
  const auto c = gamma_minimal_at(test::mixing_basis(), GaugeConnection::zero(), {0.4, 0.1, 0.2, 0.3}, kFD);
  EXPECT_NEAR(c(2, 1, 0), 1.0, 1e-10);
  Rank3 rest = c.gamma;
  rest[2][1][0] = 0.0;
  EXPECT_LE(max_abs(rest), 1e-10);
  const auto t = torsion_at(c);
  EXPECT_NEAR(t[2][1][0], 1.0, 1e-10);
  EXPECT_NEAR(t[2][0][1], -1.0, 1e-10);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t m = 0; m < 4; ++m) EXPECT_EQ(t[r][m][m], 0.0);
}

GaugeConnection random_constant_omega(test::Sampler& rng) {
  GaugeConnection w;
  for (auto& f : w.omega) {
    auto v = rng.vector(0.5);
    v[0] = Complex(0.0, rng.real(-0.5, 0.5));
    f = constant_field(v);
  }
  return w;
}

TEST(Geometry, ConnectionIsRealForAdmissibleOmega) {
  test::Sampler rng(42);
  for (int n = 0; n < 50; ++n) {
    const auto c = gamma_minimal_at(test::generic_basis(), random_constant_omega(rng), rng.point(), kFD);
    ASSERT_LE(c.imag_residue, 1e-10);
  }
}

TEST(Geometry, MinimalityAndCompatibility) {
  test::Sampler rng(43);
  const auto basis = test::generic_basis();
  const auto omega = test::generic_omega();
  for (int n = 0; n < 25; ++n) {
    const auto p = rng.point();
    const auto f = frame_at(basis, omega, p, kFD);
    ASSERT_LE(minimality_residual(f), 1e-8);
    ASSERT_LE(max_abs(nabla_metric_residual(basis, omega, p, kFD)), 1e-8);
    ASSERT_LE(max_abs(metric_leibniz_residual(basis, omega, p, kFD)), 1e-8);
  }
}

TEST(Geometry, CompatibilityConverges) {
  const auto basis = test::generic_basis();
  const auto omega = test::generic_omega();
  const double coarse = max_abs(nabla_metric_residual(basis, omega, test::kGenericPoint, FDConfig::uniform(0.04)));
  const double fine = max_abs(nabla_metric_residual(basis, omega, test::kGenericPoint, FDConfig::uniform(0.02)));
  EXPECT_GT(coarse, 1e-9);
  EXPECT_GE(coarse / fine, 8.0);
}

// A real scalar ω_ρ = c breaks compatibility by exactly -4 c g.
TEST(Geometry, InadmissibleOmegaBreaksCompatibility) {
  GaugeConnection w = GaugeConnection::zero();
  w.omega[2] = constant_field(Biquaternion{0.1});
  const auto r = nabla_metric_residual(test::flat_basis(), w, {}, kFD);
  const auto g = metric_at(test::flat_basis(), {}).g;
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      EXPECT_NEAR(r[2][static_cast<std::size_t>(m)][static_cast<std::size_t>(n)], -0.4 * g(m, n), 1e-12);
      EXPECT_EQ(r[0][static_cast<std::size_t>(m)][static_cast<std::size_t>(n)], 0.0);
    }
  }
}

TEST(Geometry, CovariantDerivativeSpecies) {
  const Point p{0.1, 0.2, 0.3, 0.4};
  const auto gamma0 = gamma_minimal_at(test::flat_basis(), GaugeConnection::zero(), p, kFD);

  const auto s = TensorField::rank0(Species::kScalar, constant_field(Biquaternion{2.0, 1.0}));
  for (int r = 0; r < 4; ++r) {
    EXPECT_EQ(covariant_derivative_at(s, {}, r, GaugeConnection::zero(), gamma0, p, kFD), Biquaternion{});
  }

  // ω = i c: the vector coupling cancels and D V = ∂ V.
  GaugeConnection w;
  for (auto& f : w.omega) f = constant_field(Complex(0.0, 0.3) * Biquaternion::one());
  const auto vf = field({"t", "x*y", "im*z", "1"});
  const auto v = TensorField::rank0(Species::kVector, vf);
  const auto gamma = gamma_minimal_at(test::flat_basis(), w, p, kFD);
  for (int r = 0; r < 4; ++r) {
    EXPECT_LE(test::distance(covariant_derivative_at(v, {}, r, w, gamma, p, kFD), partial(vf, r, p, kFD)),
              1e-15);
  }
  EXPECT_THROW(covariant_derivative_at(v, std::vector<int>{0}, 0, w, gamma, p, kFD), RankMismatchError);
}

TEST(Geometry, BasisAndDualAreCovariantlyConstant) {
  const auto basis = test::generic_basis();
  const auto omega = test::generic_omega();
  const auto p = test::kGenericPoint;
  const auto gamma = gamma_minimal_at(basis, omega, p, kFD);
  const auto lower = TensorField::basis(basis);
  const TensorField upper{{Species::kVector, 1, 0},
                          [&](const Point& q, std::span<const int> idx) {
                            return dual_basis_at(basis, q)[static_cast<std::size_t>(idx[0])];
                          }};
  double worst = 0.0;
  for (int nu = 0; nu < 4; ++nu) {
    const std::array<int, 1> idx{nu};
    for (int r = 0; r < 4; ++r) {
      worst = std::max(worst, magnitude(covariant_derivative_at(lower, idx, r, omega, gamma, p, kFD)));
      worst = std::max(worst, magnitude(covariant_derivative_at(upper, idx, r, omega, gamma, p, kFD)));
    }
  }
  EXPECT_LE(worst, 1e-8);
}

TEST(Geometry, ComponentIdentity) {
  const std::array<ScalarFn, 4> constant{test::scalar("1"), test::scalar("2"), test::scalar("im"),
                                         test::scalar("0.5")};
  EXPECT_LE(max_abs(component_identity_check(constant, test::flat_basis(), GaugeConnection::zero(),
                                             {0.1, 0.2, 0.3, 0.4}, kFD)),
            1e-12);

  const std::array<ScalarFn, 4> polynomial{test::scalar("t"), test::scalar("x^2"), test::scalar("0"),
                                           test::scalar("0")};
  EXPECT_LE(max_abs(component_identity_check(polynomial, test::scaled_basis(), GaugeConnection::zero(),
                                             {0.2, 0.3, 0.1, -0.2}, kFD)),
            1e-8);

  test::Sampler rng(44);
  for (int n = 0; n < 10; ++n) {
    const auto a = rng.real();
    const auto b = rng.real();
    const std::array<ScalarFn, 4> comps{
        test::scalar(std::to_string(a) + "*t*x + y"), test::scalar(std::to_string(b) + "*z^2"),
        test::scalar("im*t*y"), test::scalar("1 + x^3")};
    ASSERT_LE(max_abs(component_identity_check(comps, test::generic_basis(), test::generic_omega(),
                                               rng.point(), kFD)),
              1e-7);
  }
}

TEST(Geometry, ChristoffelDiagnostic) {
  const Point p{0.2, 0.1, 0.0, 0.3};
  EXPECT_EQ(max_abs(christoffel_at(test::flat_basis(), p, kFD)), 0.0);
  // For this diagonal basis the minimal connection happens to be Levi-Civita.
  EXPECT_LE(max_abs(christoffel_difference_at(test::scaled_basis(), GaugeConnection::zero(), p, kFD)), 1e-10);
  // With torsion it cannot be.
  EXPECT_GT(max_abs(christoffel_difference_at(test::mixing_basis(), GaugeConnection::zero(), p, kFD)), 0.1);
}

}  // namespace
}  // namespace qframe
