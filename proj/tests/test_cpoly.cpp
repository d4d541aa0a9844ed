#include <gtest/gtest.h>

#include <random>

#include "phbiarc/cpoly.hpp"

using namespace phbiarc;
using C = Complex<double>;
using Poly = BernsteinPoly<double>;

namespace {

C power_form_square_at(const Poly& p, double t) {
  // Independent oracle: Bernstein basis evaluated from binomials.
  C v{};
  const std::size_t m = p.degree();
  for (std::size_t i = 0; i <= m; ++i)
    v += detail::binomial<double>(m, i) * std::pow(1 - t, double(m - i)) * std::pow(t, double(i)) * p[i];
  return v * v;
}

Poly random_cubic(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2, 2);
  return Poly{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
}

}  // namespace

TEST(Eval, ConstantPolynomial) { EXPECT_EQ(eval(Poly{{1, 0}}, 0.37), C(1, 0)); }

TEST(Eval, LinearIsIdentity) {
  const C v = eval(Poly{{0, 0}, {1, 0}}, 0.25);
  EXPECT_DOUBLE_EQ(v.real(), 0.25);
  EXPECT_DOUBLE_EQ(v.imag(), 0.0);
}

TEST(Eval, QuadraticByHand) {
  const C v = eval(Poly{{1, 0}, {0, 1}, {-1, 0}}, 0.5);
  EXPECT_NEAR(v.real(), 0.0, 1e-16);
  EXPECT_NEAR(v.imag(), 0.5, 1e-16);
}

TEST(Eval, RejectsParameterOutsideUnitInterval) {
  const Poly p{{1, 0}, {2, 0}};
  EXPECT_THROW(eval(p, -1e-12), DomainError);
  EXPECT_THROW(eval(p, 1.0 + 1e-12), DomainError);
  EXPECT_THROW(eval(p, std::nan("")), DomainError);
}

TEST(Eval, EndpointsAreExact) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    const Poly p = random_cubic(rng);
    EXPECT_EQ(eval(p, 0.0), p[0]);
    EXPECT_EQ(eval(p, 1.0), p[3]);
  }
}

TEST(BernsteinPolyType, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(Poly(std::vector<C>{}), DomainError);
  EXPECT_THROW((Poly{{1, 0}, {std::numeric_limits<double>::infinity(), 0}}), DomainError);
  EXPECT_THROW((Poly{{std::nan(""), 0}}), DomainError);
}

TEST(Square, ConstantCase) { EXPECT_EQ(square(Poly{{2, 1}})[0], C(3, 4)); }

TEST(Square, PureFirstBasisFunction) {
  const Poly s = square(Poly{{1, 0}, {0, 0}, {0, 0}, {0, 0}});
  ASSERT_EQ(s.degree(), 6u);
  EXPECT_EQ(s[0], C(1, 0));
  for (std::size_t i = 1; i <= 6; ++i) EXPECT_EQ(s[i], C(0, 0));
}

TEST(Square, MatchesPointwiseSquareAtChebyshevNodes) {
  std::mt19937_64 rng(11);
  const Poly p = random_cubic(rng);
  const Poly s = square(p);
  for (int k = 0; k < 20; ++k) {
    const double t = 0.5 - 0.5 * std::cos((2 * k + 1) * std::numbers::pi / 40);
    EXPECT_LE(std::abs(eval(s, t) - power_form_square_at(p, t)), 1e-13 * (1 + std::norm(eval(p, t))));
  }
}

TEST(Square, PropertyRandomCubics) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ut(0, 1);
  for (int k = 0; k < 50; ++k) {
    const Poly p = random_cubic(rng);
    const Poly s = square(p);
    const double t = ut(rng);
    const C v = eval(p, t);
    EXPECT_LE(std::abs(eval(s, t) - v * v), 1e-12 * (1 + std::norm(v)));
  }
}

TEST(HermitianProduct, Constant) {
  const auto h = hermitian_product(Poly{{1, 1}}, Poly{{1, 1}});
  ASSERT_EQ(h.size(), 1u);
  EXPECT_DOUBLE_EQ(h[0], 2.0);
}

TEST(HermitianProduct, ProductOfOppositeCubicBasisFunctions) {
  const auto h = hermitian_product(Poly{{1, 0}, {0, 0}, {0, 0}, {0, 0}}, Poly{{0, 0}, {0, 0}, {0, 0}, {1, 0}});
  ASSERT_EQ(h.size(), 7u);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_NEAR(h[i], i == 3 ? 1.0 / 20.0 : 0.0, 1e-17);
}

TEST(HermitianProduct, SelfProductIsSquaredModulus) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ut(0, 1);
  for (int k = 0; k < 50; ++k) {
    const Poly p = random_cubic(rng);
    const auto h = hermitian_product(p, p);
    const double t = ut(rng);
    const double expect = std::norm(eval(p, t));
    EXPECT_NEAR(eval_real<double>(h, t), expect, 1e-12 * (1 + expect));
    for (double c : {0.0, 0.25, 0.5, 0.75, 1.0}) EXPECT_GE(eval_real<double>(h, c), -1e-14);
  }
}

TEST(HermitianProduct, MeanEqualsIntegralOfSquaredModulus) {
  // Simpson on a fine grid as an independent integral.
  std::mt19937_64 rng(9);
  const Poly p = random_cubic(rng);
  const auto h = hermitian_product(p, p);
  double mean = 0;
  for (double v : h) mean += v;
  mean /= 7;
  const int n = 2000;
  double simpson = 0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    simpson += w * std::norm(eval(p, double(i) / n));
  }
  simpson /= 3.0 * n;
  EXPECT_NEAR(mean, simpson, 1e-11);
}

TEST(Chi, Examples) {
  EXPECT_EQ(chi(C{1, 0}), C(1, 0));
  const C r = chi(C{0, 1});
  EXPECT_NEAR(r.real(), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(r.imag(), std::sqrt(0.5), 1e-15);
  EXPECT_EQ(chi(C{-4, 0}), C(0, 2));
  EXPECT_EQ(chi(C{-4, -0.0}), C(0, 2));
  EXPECT_EQ(chi(C{0, 0}), C(0, 0));
}

TEST(Chi, SquaresBackAcrossMagnitudes) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi), mag(-6, 6);
  for (int k = 0; k < 1000; ++k) {
    const C c = std::polar(std::pow(10.0, mag(rng)), ang(rng));
    const C r = chi(c);
    EXPECT_GE(r.real(), 0.0);
    EXPECT_LE(std::abs(r * r - c), 1e-13 * std::abs(c));
  }
}

TEST(Chi, ContinuousAcrossPositiveRealAxis) {
  for (double x : {1e-6, 1.0, 1e6}) {
    const C above = chi(C{x, 1e-12 * x});
    const C below = chi(C{x, -1e-12 * x});
    EXPECT_LE(std::abs(above - below), 1e-11 * std::sqrt(x));
  }
}

TEST(Derivative, MatchesFiniteDifference) {
  std::mt19937_64 rng(17);
  const Poly p = random_cubic(rng);
  const Poly d = p.derivative();
  const double t = 0.3, h = 1e-6;
  EXPECT_LE(std::abs(eval(d, t) - (eval(p, t + h) - eval(p, t - h)) / (2 * h)), 1e-8);
}
