#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace qframe {
namespace {

using test::field;

TEST(Fields, EvalExamples) {
  const BiquatField i1 = BiquatField::parse({"im", "0", "0", "0"}, Chart());
  EXPECT_EQ(eval_field(i1, {5, 6, 7, 8}), Biquaternion::imag());
  const BiquatField te1 = BiquatField::parse({"0", "t", "0", "0"}, Chart());
  EXPECT_EQ(eval_field(te1, {2, 0, 0, 0}), 2.0 * Biquaternion::unit(1));

  const Chart polar({"t", "r", "θ", "φ"});
  const auto f = BiquatField::parse({"im*exp(r)", "0", "0", "0"}, polar);
  EXPECT_LE(test::distance(eval_field(f, {0, 1, 0, 0}),
                           Complex(0.0, std::exp(1.0)) * Biquaternion::one()),
            1e-15);
}

TEST(Fields, DomainErrorNamesComponent) {
  const auto f = BiquatField::parse({"1", "0", "log(x)", "0"}, Chart());
  try {
    f({0, -1, 0, 0});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.component(), 2);
  }
  EXPECT_THROW(eval_field(f, {0, std::nan(""), 0, 0}), PreconditionError);
}

TEST(Fields, PartialExamples) {
  const auto f = field({"0", "t", "0", "0"});
  const auto d = partial(f, 0, {0.2, 0.1, 0, 0}, FDConfig::uniform(1e-4, 2));
  EXPECT_LE(test::distance(d, Biquaternion::unit(1)), 1e-10);

  const auto c = field({"1", "im", "2", "3"});
  EXPECT_EQ(partial(c, 1, {0.3, 0.2, 0.1, 0}, FDConfig{}), Biquaternion{});
}

double sin_error(double h, int order) {
  const auto f = field({"sin(t)", "0", "0", "0"});
  return std::abs(partial(f, 0, {0, 0, 0, 0}, FDConfig::uniform(h, order))[0] - 1.0);
}

TEST(Fields, ConvergenceOrder) {
  for (int order : {2, 4}) {
    const double h = 0.1;
    const double rate = std::log2(sin_error(h, order) / sin_error(h / 2, order));
    EXPECT_GE(rate, order - 0.5) << "order " << order;
    EXPECT_LE(rate, order + 0.5) << "order " << order;
  }
  EXPECT_NEAR(sin_error(0.02, 2) / sin_error(0.01, 2), 4.0, 0.05);
}

TEST(Fields, Linearity) {
  test::Sampler rng(31);
  const auto f = field({"sin(t)*x", "im*y^2", "exp(z)", "t*x*y"});
  const auto g = field({"cos(x)", "t", "im*z*t", "1 + y"});
  const FDConfig fd;
  for (int n = 0; n < 50; ++n) {
    const auto a = rng.complex();
    const auto b = rng.complex();
    const auto p = rng.point();
    const auto combo = [&](const Point& q) { return a * f(q) + b * g(q); };
    for (int mu = 0; mu < 4; ++mu) {
      const auto lhs = partial(combo, mu, p, fd);
      const auto rhs = a * partial(f, mu, p, fd) + b * partial(g, mu, p, fd);
      ASSERT_LE(test::distance(lhs, rhs), 1e-10);
    }
  }
}

TEST(Fields, PartialCommutesWithConjugation) {
  test::Sampler rng(32);
  const auto f = field({"sin(t)*x + im*y", "im*y^2", "exp(im*z)", "t*x*y"});
  const FDConfig fd;
  for (int n = 0; n < 50; ++n) {
    const auto p = rng.point();
    for (int mu = 0; mu < 4; ++mu) {
      const auto d = partial(f, mu, p, fd);
      for (auto kind : {Conjugation::kQuaternionic, Conjugation::kComplex,
                        Conjugation::kBarStar}) {
        const auto conj = [&](const Point& q) { return conjugate(f(q), kind); };
        ASSERT_EQ(conjugate(d, kind), partial(conj, mu, p, fd));
      }
    }
  }
}

TEST(Fields, PartialOnNestedValues) {
  const auto f = [](const Point& p) {
    return std::array<std::array<double, 2>, 2>{{{p[0], 2 * p[1]}, {p[2] * p[2], 1.0}}};
  };
  const auto d = gradient(f, {0.1, 0.2, 0.3, 0.4}, FDConfig{});
  EXPECT_NEAR(d[0][0][0], 1.0, 1e-10);
  EXPECT_NEAR(d[1][0][1], 2.0, 1e-10);
  EXPECT_NEAR(d[2][1][0], 0.6, 1e-10);
  EXPECT_EQ(d[3][1][1], 0.0);
}

TEST(Fields, ConfigValidation) {
  EXPECT_NO_THROW(FDConfig{}.validate());
  EXPECT_THROW(FDConfig::uniform(0.0).validate(), PreconditionError);
  EXPECT_THROW(FDConfig::uniform(1e-3, 3).validate(), PreconditionError);
}

}  // namespace
}  // namespace qframe
