#ifndef PHBIARC_TEST_FIXTURES_HPP
#define PHBIARC_TEST_FIXTURES_HPP

#include <cmath>
#include <numbers>
#include <random>

#include "phbiarc.hpp"

namespace fixtures {

using phbiarc::HermiteData;
constexpr double pi = std::numbers::pi;

// Unit-chord data P0 = 0, P1 = 1 with tangents given by angle.
template <class Real = double>
HermiteData<Real> unit_chord(Real th0, Real th1, Real k0, Real k1, Real length) {
  return HermiteData<Real>::from_angles({0, 0}, {1, 0}, th0, th1, k0, k1, length);
}

template <class Real = double>
HermiteData<Real> set1() { return unit_chord<Real>(-pi / 4, -pi / 8, 1, -1, Real(1.1)); }
template <class Real = double>
HermiteData<Real> set2() { return unit_chord<Real>(-pi / 4, -pi / 8, 1, -1, Real(1.05)); }
template <class Real = double>
HermiteData<Real> convex() { return unit_chord<Real>(-pi / 4, pi / 8, 1, 1, Real(1.1)); }
template <class Real = double>
HermiteData<Real> parallel() { return unit_chord<Real>(pi / 4, pi / 4, Real(-0.5), Real(0.5), Real(1.5)); }
template <class Real = double>
HermiteData<Real> symmetric() { return unit_chord<Real>(pi / 3, -pi / 3, Real(-0.5), Real(-0.5), Real(1.35)); }

// Random feasible data with unit chord, L in (1, 3], |kappa| <= 2.
inline HermiteData<double> random_hermite(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(-pi, pi), kap(-2, 2), len(0, 2);
  const double rot = ang(rng);
  const std::complex<double> p0{len(rng) - 1, len(rng) - 1};
  const auto p1 = p0 + std::polar(1.0, rot);
  double l = 1 + len(rng);
  if (l <= 1) l = 1.5;
  return HermiteData<double>(p0, p1, std::polar(1.0, ang(rng)), std::polar(1.0, ang(rng)), kap(rng),
                             kap(rng), l);
}

inline bool rel_close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

// a agrees with the printed value b to n significant digits: within half a
// unit of the n-th digit of b.
inline bool sig_digits(double a, double b, int n) {
  const double e = std::floor(std::log10(std::abs(b)));
  return std::abs(a - b) <= 0.5 * std::pow(10.0, e + 1 - n) * (1 + 1e-9);
}

}  // namespace fixtures

#endif
