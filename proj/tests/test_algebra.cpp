#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"

namespace qframe {
namespace {

using test::distance;
using test::Sampler;

constexpr int kSamples = 10000;
const Complex kI{0.0, 1.0};

Biquaternion e(int k) { return Biquaternion::unit(k); }

TEST(Algebra, UnitTable) {
  EXPECT_EQ(e(1) * e(2), e(3));
  EXPECT_EQ(e(2) * e(3), e(1));
  EXPECT_EQ(e(3) * e(1), e(2));
  EXPECT_EQ(e(2) * e(1), -e(3));
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(e(k) * e(k), -Biquaternion::one());
}

TEST(Algebra, MulExamples) {
  Sampler rng(11);
  const auto x = rng.biquat();
  EXPECT_EQ(mul(Biquaternion::one(), x), x);
  EXPECT_EQ(mul(Biquaternion::one() + e(1), Biquaternion::one() - e(1)),
            2.0 * Biquaternion::one());
}

TEST(Algebra, ProductMatchesMatrixOracle) {
  Sampler rng(12);
  for (int n = 0; n < kSamples; ++n) {
    const auto x = rng.biquat();
    const auto y = rng.biquat();
    const auto expect = test::from_matrix(test::mat_mul(test::to_matrix(x), test::to_matrix(y)));
    ASSERT_LE(distance(x * y, expect), 1e-14);
  }
}

TEST(Algebra, BarAndNormMatchMatrixOracle) {
  Sampler rng(13);
  for (int n = 0; n < kSamples; ++n) {
    const auto x = rng.biquat();
    ASSERT_LE(distance(bar(x), test::from_matrix(test::adjugate(test::to_matrix(x)))), 1e-15);
    ASSERT_LE(std::abs(norm(x) - test::det(test::to_matrix(x))), 1e-14);
  }
}

TEST(Algebra, Associativity) {
  Sampler rng(14);
  for (int n = 0; n < kSamples; ++n) {
    const auto x = rng.biquat();
    const auto y = rng.biquat();
    const auto z = rng.biquat();
    const auto lhs = (x * y) * z;
    ASSERT_LE(distance(lhs, x * (y * z)), 1e-13 * (1.0 + magnitude(lhs)));
  }
}

TEST(Algebra, ConjugationExamples) {
  EXPECT_EQ(conjugate(e(1), Conjugation::kQuaternionic), -e(1));
  EXPECT_EQ(conjugate(kI * Biquaternion::one(), Conjugation::kBarStar),
            -kI * Biquaternion::one());
  Sampler rng(15);
  const auto x = rng.biquat();
  EXPECT_EQ(bar(star(x)), star(bar(x)));
  EXPECT_EQ(bar_star(x), bar(star(x)));
  EXPECT_EQ(conjugate(x, Conjugation::kComplex), star(x));
}

TEST(Algebra, ConjugationProductRules) {
  Sampler rng(16);
  for (int n = 0; n < kSamples; ++n) {
    const auto x = rng.biquat();
    const auto y = rng.biquat();
    const double s = 1e-12 * (1.0 + magnitude(x) * magnitude(y));
    ASSERT_LE(distance(bar(x * y), bar(y) * bar(x)), s);
    ASSERT_LE(distance(star(x * y), star(x) * star(y)), s);
    ASSERT_LE(distance(bar_star(x * y), bar_star(y) * bar_star(x)), s);
  }
}

TEST(Algebra, ScalVecSplit) {
  auto p = scal_vec_split(Biquaternion{2.0, 3.0, 0.0, 0.0});
  EXPECT_EQ(p.scal, 2.0 * Biquaternion::one());
  EXPECT_EQ(p.vec, 3.0 * e(1));
  p = scal_vec_split(e(2));
  EXPECT_EQ(p.scal, Biquaternion{});
  EXPECT_EQ(p.vec, e(2));
  p = scal_vec_split(Biquaternion{kI, 0.0, 0.0, kI});
  EXPECT_EQ(p.scal, kI * Biquaternion::one());
  EXPECT_EQ(p.vec, kI * e(3));

  Sampler rng(17);
  for (int n = 0; n < 1000; ++n) {
    const auto x = rng.biquat();
    const auto s = scal_vec_split(x);
    ASSERT_EQ(s.scal + s.vec, x);
    ASSERT_EQ(bar(s.scal), s.scal);
    ASSERT_EQ(bar(s.vec), -s.vec);
  }
}

TEST(Algebra, PlusMinusSplit) {
  auto p = pm_split(kI * Biquaternion::one());
  EXPECT_EQ(p.minus, kI * Biquaternion::one());
  EXPECT_EQ(p.plus, Biquaternion{});
  p = pm_split(Biquaternion::one());
  EXPECT_EQ(p.minus, Biquaternion{});
  EXPECT_EQ(p.plus, Biquaternion::one());
  p = pm_split(e(1));
  EXPECT_EQ(p.minus, e(1));
  EXPECT_EQ(p.plus, Biquaternion{});

  Sampler rng(18);
  for (int n = 0; n < kSamples; ++n) {
    const auto x = rng.biquat();
    const auto s = pm_split(x);
    ASSERT_LE(distance(s.minus + s.plus, x), 1e-15);
    ASSERT_LE(distance(bar_star(s.minus), -s.minus), 1e-15);
    ASSERT_LE(distance(bar_star(s.plus), s.plus), 1e-15);
    const auto again_minus = pm_split(s.minus);
    const auto again_plus = pm_split(s.plus);
    ASSERT_LE(distance(again_minus.minus, s.minus), 1e-15);
    ASSERT_LE(magnitude(again_minus.plus), 1e-15);
    ASSERT_LE(distance(again_plus.plus, s.plus), 1e-15);
    ASSERT_LE(magnitude(again_plus.minus), 1e-15);
  }
}

TEST(Algebra, InnerExamples) {
  EXPECT_EQ(inner(Biquaternion::one(), Biquaternion::one()), Complex(1.0));
  EXPECT_EQ(inner(e(1), e(1)), Complex(1.0));
  const auto i1 = kI * Biquaternion::one();
  EXPECT_EQ(inner(i1, i1), Complex(-1.0));
}

// 2<x,y> = x ȳ + y x̄ has no vector part, and its scalar is what inner returns.
TEST(Algebra, InnerMatchesDefinition) {
  Sampler rng(19);
  for (int n = 0; n < kSamples; ++n) {
    const auto x = rng.biquat();
    const auto y = rng.biquat();
    const auto two = x * bar(y) + y * bar(x);
    ASSERT_LE(magnitude(two.vector_part()), 1e-14);
    ASSERT_LE(std::abs(0.5 * two[0] - inner(x, y)), 1e-14);
  }
}

TEST(Algebra, InnerProductIdentities) {
  Sampler rng(20);
  double worst = 0.0;
  for (int n = 0; n < kSamples; ++n) {
    const auto x = rng.biquat();
    const auto y = rng.biquat();
    const auto z = rng.biquat();
    const auto xy = inner(x, y);
    const double s = 1.0 + std::abs(xy);
    worst = std::max(worst, std::abs(xy - inner(y, x)) / s);
    worst = std::max(worst, std::abs(xy - inner(bar(x), bar(y))) / s);
    const auto left = inner(x, y * z);
    worst = std::max(worst, std::abs(left - inner(bar(y) * x, z)) / (1.0 + std::abs(left)));
    const auto right = inner(x * y, z);
    worst = std::max(worst, std::abs(right - inner(x, z * bar(y))) / (1.0 + std::abs(right)));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Algebra, CompositionProperty) {
  Sampler rng(21);
  for (int n = 0; n < kSamples; ++n) {
    const auto x = rng.biquat();
    const auto y = rng.biquat();
    const auto lhs = norm(x * y);
    const auto rhs = norm(x) * norm(y);
    ASSERT_LE(std::abs(lhs - rhs), 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST(Algebra, MinusPartInnerProductIsReal) {
  Sampler rng(22);
  for (int n = 0; n < kSamples; ++n) {
    ASSERT_LE(std::abs(inner(rng.minus_part(), rng.minus_part()).imag()), 1e-13);
  }
}

TEST(Algebra, ScalarsOrthogonalToVectors) {
  Sampler rng(23);
  for (int n = 0; n < kSamples; ++n) {
    const Biquaternion s{rng.complex()};
    ASSERT_EQ(inner(s, rng.vector()), Complex(0.0));
  }
}

TEST(Algebra, NormAndInverseExamples) {
  auto r = norm_and_inverse(Biquaternion::one() + e(1));
  EXPECT_EQ(r.norm, Complex(2.0));
  ASSERT_TRUE(r.inverse);
  EXPECT_LE(distance(*r.inverse, 0.5 * (Biquaternion::one() - e(1))), 1e-16);

  r = norm_and_inverse(e(2));
  EXPECT_EQ(r.norm, Complex(1.0));
  ASSERT_TRUE(r.inverse);
  EXPECT_EQ(*r.inverse, -e(2));

  r = norm_and_inverse(Biquaternion::one() + kI * e(1));
  EXPECT_EQ(r.norm, Complex(0.0));
  EXPECT_FALSE(r.inverse);
  EXPECT_THROW(inverse(Biquaternion::one() + kI * e(1)), ZeroDivisorError);
}

TEST(Algebra, InverseIsTwoSided) {
  Sampler rng(24);
  for (int n = 0; n < kSamples; ++n) {
    const auto x = rng.biquat();
    const auto inv = inverse(x);
    const double s = 1e-11 * magnitude(x) * magnitude(inv);
    ASSERT_LE(distance(x * inv, Biquaternion::one()), s);
    ASSERT_LE(distance(inv * x, Biquaternion::one()), s);
  }
}

TEST(Algebra, ExpVecExamples) {
  EXPECT_EQ(exp_vec(Biquaternion{}), Biquaternion::one());
  EXPECT_LE(distance(exp_vec(std::numbers::pi / 2 * e(1)), e(1)), 1e-15);
  const auto boost = exp_vec(0.3 * kI * e(3));
  EXPECT_LE(distance(boost, Biquaternion{std::cosh(0.3), 0.0, 0.0, kI * std::sinh(0.3)}),
            1e-15);
  EXPECT_LE(distance(bar(boost) * boost, Biquaternion::one()), 1e-15);
  EXPECT_THROW(exp_vec(Biquaternion::one() + e(1)), PreconditionError);
}

TEST(Algebra, ExpVecIsUnit) {
  Sampler rng(25);
  for (int n = 0; n < kSamples; ++n) {
    auto q = rng.vector();
    q = (2.0 * rng.real(0.0, 1.0) / magnitude(q)) * q;
    const auto l = exp_vec(q);
    ASSERT_LE(distance(bar(l) * l, Biquaternion::one()), 1e-12);
    ASSERT_LE(distance(l * bar(l), Biquaternion::one()), 1e-12);
  }
}

// Near θ = 0 the series branch must agree with the closed form.
TEST(Algebra, ExpVecSeriesBranchIsContinuous) {
  for (double s : {1e-3, 1e-4, 2e-5, 1e-6}) {
    const auto q = s * (e(1) + kI * e(2) + 0.5 * e(3));
    const auto l = exp_vec(q);
    // Matrix exponential oracle by a long Taylor sum.
    Biquaternion term = Biquaternion::one();
    Biquaternion sum = term;
    for (int k = 1; k < 12; ++k) {
      term = (1.0 / k) * (term * q);
      sum += term;
    }
    EXPECT_LE(distance(l, sum), 4e-16);
  }
}

TEST(Algebra, Commutator) {
  EXPECT_EQ(commutator(e(1), e(2)), 2.0 * e(3));
  Sampler rng(26);
  for (int n = 0; n < kSamples; ++n) {
    const auto x = rng.biquat();
    const auto y = rng.biquat();
    ASSERT_EQ(commutator(x, x), Biquaternion{});
    ASSERT_LE(distance(commutator(bar_star(x), bar_star(y)), -bar_star(commutator(x, y))),
              1e-13);
  }
}

TEST(Algebra, ToleranceValidity) {
  EXPECT_TRUE(Tolerance{}.valid());
  EXPECT_FALSE((Tolerance{-1.0, 0.0}.valid()));
  EXPECT_FALSE((Tolerance{0.0, std::nan("")}.valid()));
}

}  // namespace
}  // namespace qframe
