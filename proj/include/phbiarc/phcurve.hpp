#ifndef PHBIARC_PHCURVE_HPP
#define PHBIARC_PHCURVE_HPP

// Degree-7 Pythagorean-hodograph segment generated by a cubic complex preimage
// w(u): the hodograph is scale * w(u)^2 in the segment's local parameter u.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>

#include <boost/math/quadrature/gauss.hpp>

#include "phbiarc/cpoly.hpp"

namespace phbiarc {

/// The segment's parametric speed vanishes where a frame was requested.
class CuspError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A construction input collapses the curve (zero preimage, zero alpha, ...).
class DegenerateError : public DomainError {
 public:
  using DomainError::DomainError;
};

namespace detail {

// Composite 15-point Gauss-Legendre, doubling the panel count until two
// successive sums agree to rel_tol.
template <std::floating_point Real, class F>
Real integrate_composite(F&& f, Real a, Real b, Real rel_tol = Real(1e-10),
                         std::size_t max_panels = 1024) {
  using Rule = boost::math::quadrature::gauss<Real, 15>;
  auto composite = [&](std::size_t panels) {
    const Real width = (b - a) / Real(panels);
    Real sum = 0;
    for (std::size_t k = 0; k < panels; ++k) {
      const Real lo = a + width * Real(k);
      const Real hi = (k + 1 == panels) ? b : lo + width;
      sum += Rule::integrate(f, lo, hi);
    }
    return sum;
  };
  Real previous = composite(1);
  for (std::size_t panels = 2; panels <= max_panels; panels *= 2) {
    const Real current = composite(panels);
    const Real diff = std::abs(current - previous);
    if (diff <= rel_tol * std::max(std::abs(current), std::abs(previous))) return current;
    previous = current;
  }
  return previous;
}

}  // namespace detail

template <std::floating_point Real>
struct PreimageCubic {
  std::array<Complex<Real>, 4> w{};

  BernsteinPoly<Real> poly() const { return BernsteinPoly<Real>({w[0], w[1], w[2], w[3]}); }
  bool degenerate() const {
    for (const auto& c : w)
      if (c != Complex<Real>{}) return false;
    return true;
  }
};

/// Explicit product form of the degree-6 hodograph coefficients of w(t)^2.
template <std::floating_point Real>
BernsteinPoly<Real> hodograph(const PreimageCubic<Real>& pre) {
  const auto& [w0, w1, w2, w3] = pre.w;
  return BernsteinPoly<Real>({
      w0 * w0,
      w0 * w1,
      (Real(2) * w0 * w2 + Real(3) * w1 * w1) / Real(5),
      (w0 * w3 + Real(9) * w1 * w2) / Real(10),
      (Real(2) * w1 * w3 + Real(3) * w2 * w2) / Real(5),
      w2 * w3,
      w3 * w3,
  });
}

/// Position and Frenet data at one parameter value.
template <std::floating_point Real>
struct Frame {
  Complex<Real> point;
  Complex<Real> unit_tangent;
  Complex<Real> normal;  // counterclockwise rotation of the tangent
  Real curvature = 0;
  Real speed = 0;  // |dr/du| in the segment's local parameter
};

template <std::floating_point Real>
class PHSegment7 {
 public:
  using C = Complex<Real>;

  PHSegment7(const PreimageCubic<Real>& preimage, C start, Real scale = Real(1))
      : preimage_(preimage), start_(start), scale_(scale) {
    if (preimage_.degenerate()) throw DegenerateError("PHSegment7: zero preimage");
    if (!(scale_ > Real(0)) || !std::isfinite(scale_))
      throw DomainError("PHSegment7: scale must be positive");
    for (const auto& c : preimage_.w)
      if (!detail::finite(c)) throw DomainError("PHSegment7: non-finite preimage");
    hodograph_ = hodograph(preimage_);
    offsets_[0] = C{};
    for (std::size_t i = 1; i < 8; ++i)
      offsets_[i] = offsets_[i - 1] + (scale_ / Real(7)) * hodograph_[i - 1];
    const auto w = preimage_.poly();
    const auto sigma = hermitian_product(w, w);
    std::copy(sigma.begin(), sigma.end(), sigma_.begin());
  }

  const PreimageCubic<Real>& preimage() const { return preimage_; }
  C start() const { return start_; }
  Real scale() const { return scale_; }
  const BernsteinPoly<Real>& hodograph_poly() const { return hodograph_; }
  const std::array<Real, 7>& speed_coeffs() const { return sigma_; }

  std::array<C, 8> control_points() const {
    std::array<C, 8> p;
    for (std::size_t i = 0; i < 8; ++i) p[i] = start_ + offsets_[i];
    return p;
  }
  /// Control points relative to start().
  const std::array<C, 8>& control_offsets() const { return offsets_; }

  C end() const { return start_ + offsets_[7]; }

  Real arc_length() const {
    return scale_ * std::accumulate(sigma_.begin(), sigma_.end(), Real(0)) / Real(7);
  }

  /// r(u) - start(), evaluated from the relative control points.
  C displacement(Real u) const {
    return eval(BernsteinPoly<Real>({offsets_.begin(), offsets_.end()}), u);
  }
  C point(Real u) const { return start_ + displacement(u); }

  /// d^k r / du^k for k >= 0 in the local parameter.
  C derivative(Real u, std::size_t order) const {
    if (order == 0) return point(u);
    if (order > 7) {
      if (!(u >= Real(0) && u <= Real(1))) throw DomainError("derivative: parameter outside [0, 1]");
      return C{};
    }
    std::vector<C> d(offsets_.begin(), offsets_.end());
    for (std::size_t k = 0; k < order; ++k) {
      const Real n = Real(d.size() - 1);
      for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = n * (d[i + 1] - d[i]);
      d.pop_back();
    }
    return eval(BernsteinPoly<Real>(std::move(d)), u);
  }

  /// Preimage w(u) and its derivative dw/du.
  C preimage_at(Real u) const {
    check_parameter(u);
    const auto& [w0, w1, w2, w3] = preimage_.w;
    const Real s = Real(1) - u;
    return s * s * s * w0 + Real(3) * s * s * u * w1 + Real(3) * s * u * u * w2 + u * u * u * w3;
  }
  C preimage_derivative_at(Real u) const {
    check_parameter(u);
    const auto& [w0, w1, w2, w3] = preimage_.w;
    const Real s = Real(1) - u;
    return Real(3) * (s * s * (w1 - w0) + Real(2) * s * u * (w2 - w1) + u * u * (w3 - w2));
  }

  Real speed_at(Real u) const { return scale_ * std::norm(preimage_at(u)); }

  Frame<Real> evaluate(Real u) const {
    const C wu = preimage_at(u);
    const C dwu = preimage_derivative_at(u);
    const Real sigma = std::norm(wu);
    check_speed(sigma);
    Frame<Real> f;
    f.point = point(u);
    f.unit_tangent = wu * wu / sigma;
    f.normal = C{0, 1} * f.unit_tangent;
    f.curvature = Real(2) * (std::conj(wu) * dwu).imag() / (scale_ * sigma * sigma);
    f.speed = scale_ * sigma;
    return f;
  }

  /// Integral of curvature squared over the parameter interval this segment
  /// covers (width scale). This is the fairness figure used for selecting
  /// among interpolants.
  Real bending_energy() const { return energy_integral(4); }

  /// Integral of curvature squared with respect to arc length.
  Real bending_energy_ds() const { return energy_integral(3); }

 private:
  static void check_parameter(Real u) {
    if (!(u >= Real(0) && u <= Real(1))) throw DomainError("PHSegment7: parameter outside [0, 1]");
  }
  // 4 Im(conj(w) w')^2 / (scale sigma^power): power 4 integrates kappa^2 dt,
  // power 3 integrates kappa^2 ds.
  Real energy_integral(int power) const {
    auto integrand = [&](Real u) {
      const C wu = preimage_at(u);
      const Real sigma = std::norm(wu);
      check_speed(sigma);
      const Real im = (std::conj(wu) * preimage_derivative_at(u)).imag();
      Real denom = scale_ * sigma * sigma * sigma;
      if (power == 4) denom *= sigma;
      return Real(4) * im * im / denom;
    };
    return detail::integrate_composite<Real>(integrand, Real(0), Real(1));
  }

  void check_speed(Real sigma) const {
    Real peak = 0;
    for (Real s : sigma_) peak = std::max(peak, std::abs(s));
    if (!(sigma > Real(1e-12) * peak)) throw CuspError("PHSegment7: vanishing parametric speed");
  }

  PreimageCubic<Real> preimage_;
  C start_;
  Real scale_;
  BernsteinPoly<Real> hodograph_;
  std::array<C, 8> offsets_{};
  std::array<Real, 7> sigma_{};
};

template <std::floating_point Real>
std::array<Complex<Real>, 8> control_points(const PHSegment7<Real>& seg) {
  return seg.control_points();
}

template <std::floating_point Real>
Real arc_length(const PHSegment7<Real>& seg) {
  return seg.arc_length();
}

template <std::floating_point Real>
Frame<Real> evaluate(const PHSegment7<Real>& seg, Real u) {
  return seg.evaluate(u);
}

template <std::floating_point Real>
Real bending_energy(const PHSegment7<Real>& seg) {
  return seg.bending_energy();
}

template <std::floating_point Real>
Real bending_energy_ds(const PHSegment7<Real>& seg) {
  return seg.bending_energy_ds();
}

}  // namespace phbiarc

#endif  // PHBIARC_PHCURVE_HPP
