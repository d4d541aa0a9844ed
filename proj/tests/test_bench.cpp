#include <gtest/gtest.h>

#include <boost/math/tools/minima.hpp>

#ifdef PHBIARC_HAVE_QUAD
#include "phbiarc/quad.hpp"
#endif

#include "fixtures.hpp"

using namespace phbiarc;
using namespace fixtures;
using C = Complex<double>;

namespace {

template <class F>
double simpson(F f, double a, double b, int n = 4000) {
  double s = 0;
  const double h = (b - a) / n;
  for (int i = 0; i <= n; ++i) s += ((i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2)) * f(a + i * h);
  return s * h / 3;
}

// f composed with an affine map t -> a + h t.
struct AffineSpiral {
  LogSpiral<double> f;
  double a, h;
  C displacement(double t) const { return f.displacement(a, h * t); }
  C derivative(double t, std::size_t k) const { return k == 1 ? h * f.d1(a + h * t) : h * h * f.d2(a + h * t); }
};

}  // namespace

TEST(LogSpiralCurve, CurvatureMatchesDerivatives) {
  for (double w : {0.0, 0.2, -0.7}) {
    const LogSpiral<double> f{w};
    for (double s : {0.0, 0.8, 2.5}) {
      const C d1 = f.d1(s), d2 = f.d2(s);
      const double k = (std::conj(d1) * d2).imag() / std::pow(std::abs(d1), 3);
      EXPECT_NEAR(f.curvature(s), k, 1e-13 * (1 + std::abs(k)));
      const double h = 1e-5;
      EXPECT_LE(std::abs((f.point(s + h) - f.point(s - h)) / (2 * h) - d1), 1e-9);
    }
  }
}

TEST(LogSpiralCurve, LengthMatchesQuadrature) {
  for (double w : {0.2, -0.5, 1e-7}) {
    const LogSpiral<double> f{w};
    const double q = simpson([&](double s) { return std::abs(f.d1(s)); }, 0.3, 2.1);
    EXPECT_NEAR(f.length(0.3, 2.1), q, 1e-12 * q);
  }
}

TEST(LogSpiralCurve, LengthContinuousAtZeroOmega) {
  const LogSpiral<double> f{1e-9};
  EXPECT_NEAR(f.length(0.5, 2.5), 2.0, 1e-8 * 2.0);
  EXPECT_DOUBLE_EQ(LogSpiral<double>{0}.length(0, std::numbers::pi), std::numbers::pi);
}

TEST(LogSpiralCurve, DisplacementAccurateForTinySteps) {
  const LogSpiral<double> f{0.2};
  const double a = 1.3, d = 1e-7;
  const C direct = f.d1(a) * d + 0.5 * f.d2(a) * d * d;
  EXPECT_LE(std::abs(f.displacement(a, d) - direct), 1e-20);
}

TEST(SampleHermite, SpiralOnUnitInterval) {
  const auto d = sample_hermite(LogSpiral<double>{0.2}, 0.0, 1.0);
  EXPECT_NEAR(d.k0, -1 / std::sqrt(1.04), 1e-15);
  EXPECT_NEAR(d.k0, -0.9805807, 1e-7);
  EXPECT_NEAR(d.L, std::sqrt(1.04) / 0.2 * (std::exp(0.2) - 1), 1e-14);
  EXPECT_EQ(d.P0, C(-1, 0));
  EXPECT_NEAR(std::abs(d.t0), 1.0, 1e-15);
  const auto local = sample_hermite(LogSpiral<double>{0.2}, 0.0, 1.0, true);
  EXPECT_EQ(local.P0, C(0, 0));
  EXPECT_LE(std::abs(local.delta() - d.delta()), 1e-15);
}

TEST(SampleHermite, Semicircle) {
  const auto d = sample_hermite(LogSpiral<double>{0}, 0.0, pi);
  EXPECT_DOUBLE_EQ(d.k0, -1.0);
  EXPECT_DOUBLE_EQ(d.k1, -1.0);
  EXPECT_DOUBLE_EQ(d.L, pi);
  EXPECT_LE(std::abs(d.P1 - C(1, 0)), 1e-15);
  EXPECT_THROW(sample_hermite(LogSpiral<double>{0}, 1.0, 1.0), DomainError);
}

TEST(SampleHermite, SemicircleBiarc) {
  const auto b = interpolate(sample_hermite(LogSpiral<double>{0}, 0.0, pi)).best();
  EXPECT_TRUE(sig_digits(b.alpha0(), 1.77441, 6));
  EXPECT_TRUE(sig_digits(b.alpha1(), 1.77441, 6));
  // Finite-difference oracle for the joint curvature. The curve runs
  // clockwise, so kappa is near -1; at the joint it deviates by 2.6e-3.
  const double h = 1e-4;
  const C p0 = b.point(0.5 - h), p1 = b.point(0.5), p2 = b.point(0.5 + h);
  const C d1 = (p2 - p0) / (2 * h), d2 = (p2 - 2.0 * p1 + p0) / (h * h);
  const double fd = (std::conj(d1) * d2).imag() / std::pow(std::abs(d1), 3);
  EXPECT_NEAR(b.evaluate(0.5).curvature, fd, 1e-7);
  EXPECT_NEAR(b.evaluate(0.5).curvature, -0.997379, 1e-6);
  EXPECT_NEAR(std::abs(b.evaluate(0.5).curvature), 1.0, 3e-3);
  EXPECT_NEAR(b.energy_ds(), pi, 1e-2);
}

TEST(ReparamPhi, AffineReparameterizationIsRecovered) {
  const AffineSpiral r{LogSpiral<double>{0.2}, 0.4, 0.7};
  const auto rp = reparam_phi<double>(r, r.f, 0.4, 1.1);
  EXPECT_TRUE(rp.valid);
  EXPECT_NEAR(rp.phi.c[1], 0.7, 1e-13);
  for (int k = 2; k <= 5; ++k) EXPECT_NEAR(rp.phi.c[k], 0.0, 1e-12);
  EXPECT_LE(e_err<double>(r, r.f, rp.phi), 1e-15);
}

TEST(ReparamPhi, MatchesEndDerivativesOfBiarc) {
  const LogSpiral<double> f{0.2};
  const auto b = interpolate(sample_hermite(f, 0.0, 1.0, true)).best();
  const auto rp = reparam_phi<double>(b, f, 0.0, 1.0);
  EXPECT_TRUE(rp.valid);
  EXPECT_LE(rp.normal_residual[0], 1e-9);
  EXPECT_LE(rp.normal_residual[1], 1e-9);
  EXPECT_NEAR(rp.phi(0.0), 0.0, 1e-15);
  EXPECT_NEAR(rp.phi(1.0), 1.0, 1e-14);
  for (double t : {0.0, 1.0}) {
    // (f o phi)' = f'(phi) phi' and (f o phi)'' = f'' phi'^2 + f' phi''.
    const double s = rp.phi(t), p1 = rp.phi.dpsi(t), p2 = rp.phi.ddpsi(t);
    EXPECT_LE(std::abs(b.derivative(t, 1) - f.d1(s) * p1), 1e-12);
    EXPECT_LE(std::abs(b.derivative(t, 2) - (f.d2(s) * p1 * p1 + f.d1(s) * p2)), 1e-9);
  }
}

TEST(EErr, SpiralReferenceRows) {
  const LogSpiral<double> f{0.2};
  EXPECT_TRUE(sig_digits(approximation_error(f, 0.0, 1.0, Method::Biarc).e_err, 5.23963e-6, 4));
  EXPECT_TRUE(sig_digits(approximation_error(f, 0.0, 0.25, Method::Biarc).e_err, 4.45464e-9, 4));
  EXPECT_TRUE(sig_digits(approximation_error(f, 0.0, 1.0, Method::Single).e_err, 1.02470e-5, 4));
}

TEST(EErr, BoundsDistanceToCurve) {
  // The parametric distance is never below the geometric distance of sampled
  // points to the curve.
  const LogSpiral<double> f{0.2};
  const auto b = interpolate(sample_hermite(f, 0.0, 1.0, true)).best();
  const auto rp = reparam_phi<double>(b, f, 0.0, 1.0);
  const double err = e_err<double>(b, f, rp.phi);
  for (int i = 0; i <= 20; ++i) {
    const double t = i / 20.0;
    auto dist = [&](double s) { return std::abs(b.displacement(t) - f.displacement(0.0, s)); };
    double s_best = -0.1;
    for (int j = 0; j <= 2400; ++j) {
      const double s = -0.1 + 1.2 * j / 2400.0;
      if (dist(s) < dist(s_best)) s_best = s;
    }
    const auto [s_min, best] = boost::math::tools::brent_find_minima(dist, s_best - 5e-4, s_best + 5e-4, 50);
    EXPECT_LE(best, err * (1 + 1e-6) + 1e-12) << "t = " << t << ", s = " << s_min;
  }
}

TEST(DecayTable, BiarcExponentsApproachFive) {
  std::vector<double> hs;
  for (int k = 0; k <= 4; ++k) hs.push_back(std::ldexp(1.0, -k));
  const auto rows = decay_table(LogSpiral<double>{0.2}, hs, Method::Biarc);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_FALSE(rows[0].decay.has_value());
  EXPECT_TRUE(sig_digits(*rows[1].decay, 5.14323, 4));
  EXPECT_TRUE(sig_digits(*rows[2].decay, 5.05671, 4));
  for (std::size_t k = 2; k < rows.size(); ++k) {
    EXPECT_LT(*rows[k].decay, *rows[k - 1].decay);
    EXPECT_GT(*rows[k].decay, 5.0);
  }
  for (const auto& r : rows) EXPECT_TRUE(r.valid);
}

TEST(DecayTable, SingleCurveExponentsApproachSix) {
  const auto rows = decay_table(LogSpiral<double>{0.2}, std::vector<double>{1.0, 0.5, 0.25}, Method::Single);
  EXPECT_TRUE(sig_digits(*rows[1].decay, 6.08555, 4));
  EXPECT_GT(*rows[2].decay, 6.0);
  EXPECT_LT(*rows[2].decay, *rows[1].decay);
}

TEST(CircleSpline, CircleReferenceAnchorsAndRotationalInvariance) {
  const auto two = circle_spline<double>(2);
  EXPECT_TRUE(sig_digits(two.e_err, 6.38885e-4, 4));
  const auto sixteen = circle_spline<double>(16);
  EXPECT_TRUE(sig_digits(sixteen.e_err, 1.71943e-8, 4));
  ASSERT_EQ(sixteen.span_errors.size(), 16u);
  for (double e : sixteen.span_errors) EXPECT_NEAR(e, sixteen.e_err, 1e-14);
  EXPECT_NEAR(sixteen.spline.arc_length(), 2 * pi, 1e-12);
  for (const auto& m : knot_mismatches(sixteen.spline)) {
    EXPECT_LE(m.position, 1e-13);
    EXPECT_LE(m.tangent, 1e-12);
    EXPECT_LE(m.curvature, 1e-9);
  }
  // Closed: the last span ends where the first begins.
  EXPECT_LE(std::abs(sixteen.spline.point_global(16.0) - sixteen.spline.point_global(0.0)), 1e-13);
  EXPECT_THROW(circle_spline<double>(1), DomainError);
}

TEST(CircleOrder, DecayColumn) {
  const auto rows = circle_order<double>(1, 4);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].param, 2.0);
  EXPECT_TRUE(sig_digits(*rows[1].decay, 5.1355, 4));
  EXPECT_NEAR(*rows[3].decay, 5.0, 0.01);
}

TEST(OptimizeLambda, ExampleOneConvexGrid) {
  const auto g = optimize_lambda(convex(), false);
  EXPECT_EQ(g.grid.size(), 100u);
  EXPECT_DOUBLE_EQ(g.lambda, 0.5);
  EXPECT_TRUE(sig_digits(g.energy, 1.559197, 7));
}

TEST(OptimizeLambda, ExampleOneConvexContinuous) {
  const auto c = optimize_lambda(convex(), true);
  EXPECT_NEAR(c.lambda, 0.521524, 5e-6);
  EXPECT_TRUE(sig_digits(c.energy, 1.553895, 7));
}

TEST(OptimizeLambda, SymmetricDataEnergyInvariantUnderInverse) {
  // Reversing mirror-symmetric data swaps alpha0 and alpha1, so E(lambda) = E(1/lambda).
  const auto g = optimize_lambda(symmetric(), false);
  auto energy_at = [&](double l) {
    for (const auto& [lam, e] : g.grid)
      if (std::abs(lam - l) < 1e-12) return e;
    return -1.0;
  };
  for (double l : {0.4, 0.5}) EXPECT_NEAR(energy_at(l), energy_at(1 / l), 1e-9 * energy_at(l));
  const double m = g.lambda;
  EXPECT_NEAR(interpolate(symmetric(), m).best().energy(), interpolate(symmetric(), 1 / m).best().energy(),
              1e-9 * g.energy);
}

TEST(OptimizeBeta, ExampleOneConvex) {
  const auto o = optimize_beta(convex(), 0.521524);
  EXPECT_LE(o.energy, 1.5432);
  EXPECT_NEAR(o.beta0, 2.90509, 1e-3);
  EXPECT_NEAR(o.beta1, -1.51279, 1e-3);
  EXPECT_LE(o.evaluations, 500);
}

TEST(OptimizeBeta, NeverWorseThanStart) {
  std::mt19937_64 rng(51);
  for (int k = 0; k < 5; ++k) {
    const auto d = random_hermite(rng);
    const auto o = optimize_beta(d, 1.0, 60);
    EXPECT_LE(o.energy, interpolate(d).best().energy());
  }
}

TEST(OptimizeBeta, SymmetricDataOptimumHasMirrorPartner) {
  // Mirror symmetry maps (beta0, beta1) to (-beta1, -beta0) at equal energy.
  const auto o = optimize_beta(symmetric(), 1.0);
  const auto partner = interpolate(symmetric(), 1.0, -o.beta1, -o.beta0);
  ASSERT_FALSE(partner.empty());
  EXPECT_NEAR(partner.best().energy(), o.energy, 1e-9 * o.energy);
  EXPECT_LT(o.energy, interpolate(symmetric()).best().energy());
}

TEST(SolveSeeded, FloatSeedsReproduceDoubleSearch) {
  for (const auto& d : {set1(), convex()}) {
    const auto direct = solve(SinglePHProblem<double>{d, 1.0});
    const auto seeded = solve_seeded<double, float>(SinglePHProblem<double>{d, 1.0});
    ASSERT_EQ(seeded.size(), direct.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
      EXPECT_NEAR(seeded[i].alpha0, direct[i].alpha0, 1e-9 * direct[i].alpha0);
      EXPECT_NEAR(seeded[i].energy, direct[i].energy, 1e-8 * direct[i].energy);
    }
  }
}

TEST(Polish, RefinesPerturbedSolution) {
  const auto sols = solve(SinglePHProblem<double>{set1(), 1.0});
  ASSERT_FALSE(sols.empty());
  const auto& s = sols.front();
  const auto p = polish(SinglePHProblem<double>{set1(), 1.0}, s.alpha0 * (1 + 1e-4), s.alpha1 * (1 + 1e-4),
                        s.beta0 + 1e-4, s.beta1 - 1e-4);
  ASSERT_TRUE(p.has_value());
  EXPECT_NEAR(p->alpha0, s.alpha0, 1e-10 * s.alpha0);
  EXPECT_LE(p->residual, 1e-12);
  // The L = 1.05 data have no single-curve interpolant at all.
  EXPECT_FALSE(polish(SinglePHProblem<double>{set2(), 1.0}, s.alpha0, s.alpha1, s.beta0, s.beta1).has_value());
}

#ifdef PHBIARC_HAVE_QUAD
TEST(QuadPrecision, FinestSpiralRowsResolve) {
  // A one-ulp change of L in long double moves these rows by up to 10x.
  const LogSpiral<Quad> f{Quad(2) / Quad(10)};
  const auto biarc = approximation_error(f, Quad(0), Quad(1) / Quad(256), Method::Biarc);
  EXPECT_TRUE(sig_digits(double(biarc.e_err), 4.01726e-18, 2));
  const auto single = approximation_error(f, Quad(0), Quad(1) / Quad(256), Method::Single);
  EXPECT_TRUE(sig_digits(double(single.e_err), 3.25473e-20, 3));
}
#endif
