#ifndef PHBIARC_HERMITE_HPP
#define PHBIARC_HERMITE_HPP

#include <cmath>
#include <numbers>

#include "phbiarc/phcurve.hpp"

namespace phbiarc {

/// The requested curve cannot exist (length not above the chord, ...).
class InfeasibleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// G2 Hermite data plus a prescribed arc length.
///
/// Tangents are normalized on construction. The length must exceed the chord
/// |P1 - P0| and the end points must differ.
template <std::floating_point Real>
struct HermiteData {
  using C = Complex<Real>;

  C P0, P1;
  C t0, t1;
  Real k0 = 0, k1 = 0;
  Real L = 0;

  HermiteData(C p0, C p1, C tangent0, C tangent1, Real kappa0, Real kappa1, Real length)
      : P0(p0), P1(p1), t0(tangent0), t1(tangent1), k0(kappa0), k1(kappa1), L(length) {
    if (!detail::finite(P0) || !detail::finite(P1) || !detail::finite(t0) || !detail::finite(t1) ||
        !std::isfinite(k0) || !std::isfinite(k1) || !std::isfinite(L))
      throw DomainError("HermiteData: non-finite input");
    const Real n0 = std::abs(t0);
    const Real n1 = std::abs(t1);
    if (n0 == Real(0) || n1 == Real(0)) throw DegenerateError("HermiteData: zero tangent");
    t0 /= n0;
    t1 /= n1;
    if (P0 == P1) throw DegenerateError("HermiteData: coincident end points");
    if (!(L > chord())) throw InfeasibleError("length below chord");
  }

  static HermiteData from_angles(C p0, C p1, Real theta0, Real theta1, Real kappa0, Real kappa1,
                                 Real length) {
    return HermiteData(p0, p1, std::polar(Real(1), theta0), std::polar(Real(1), theta1), kappa0,
                       kappa1, length);
  }

  C delta() const { return P1 - P0; }
  Real chord() const { return std::abs(P1 - P0); }
  C n0() const { return C{0, 1} * t0; }
  C n1() const { return C{0, 1} * t1; }
};

}  // namespace phbiarc

#endif  // PHBIARC_HERMITE_HPP
