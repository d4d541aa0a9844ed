#ifndef PHBIARC_BIARC_HPP
#define PHBIARC_BIARC_HPP

// Degree-7 PH biarcs interpolating G2 Hermite data with prescribed arc length.
//
// Two PH septics over [0, 1/2] and [1/2, 1] share a C2 preimage at the joint,
// so the curve itself is C3 there. The preimage is fixed in closed form by
// (alpha0, alpha1, beta0, beta1) and the joint sign zeta_d; the length
// condition reduces to one scalar equation e(alpha0) = 0 once alpha1 =
// +-lambda * alpha0 and beta0, beta1 are fixed.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "phbiarc/hermite.hpp"
#include "phbiarc/phcurve.hpp"

namespace phbiarc {

/// No interpolant was found (possible only for nonzero beta).
class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sign relation between the two boundary parameters: alpha1 = +lambda*alpha0
/// or alpha1 = -lambda*alpha0.
enum class Branch { Same, Opposite };

inline int branch_sign(Branch b) { return b == Branch::Same ? 1 : -1; }
inline const char* to_string(Branch b) { return b == Branch::Same ? "(+,+)" : "(+,-)"; }

template <std::floating_point Real>
struct FreeParams {
  Real beta0 = 0;
  Real beta1 = 0;
  Real lambda = 1;
  Branch branch = Branch::Same;
  int zeta_d = 1;
};

template <std::floating_point Real>
struct BoundaryPreimages {
  Complex<Real> wA0, wA1, wB2, wB3;
};

template <std::floating_point Real>
struct JointUV {
  Complex<Real> U, V;
};

namespace detail {

// Closed forms of the boundary preimage coefficients with 1/wA0 and 1/wB3
// cancelled against the unit tangents; valid for alpha = 0 when beta = 0.
template <std::floating_point Real>
BoundaryPreimages<Real> boundary_preimages_unchecked(const HermiteData<Real>& data, Real alpha0,
                                                     Real alpha1, Real beta0, Real beta1) {
  using C = Complex<Real>;
  const C c0 = chi(data.t0);
  const C c1 = chi(data.t1);
  const Real b0 = beta0 == Real(0) ? Real(0) : beta0 / (Real(12) * alpha0);
  const Real b1 = beta1 == Real(0) ? Real(0) : beta1 / (Real(12) * alpha1);
  BoundaryPreimages<Real> w;
  w.wA0 = alpha0 * c0;
  w.wB3 = alpha1 * c1;
  w.wA1 = c0 * C{alpha0 + b0, data.k0 * alpha0 * alpha0 * alpha0 / Real(12)};
  w.wB2 = c1 * C{alpha1 - b1, -data.k1 * alpha1 * alpha1 * alpha1 / Real(12)};
  return w;
}

}  // namespace detail

/// Boundary preimage coefficients wA0, wA1 (first half) and wB2, wB3 (second
/// half) reproducing the end points' tangents and curvatures.
template <std::floating_point Real>
BoundaryPreimages<Real> boundary_preimages(const HermiteData<Real>& data, Real alpha0, Real alpha1,
                                           Real beta0, Real beta1) {
  if (alpha0 == Real(0) || alpha1 == Real(0))
    throw DegenerateError("boundary_preimages: alpha must be nonzero");
  return detail::boundary_preimages_unchecked(data, alpha0, alpha1, beta0, beta1);
}

/// Coefficients of the joint quadratic d^2 + 2 U d + V = 0 that closes the
/// biarc at P1.
template <std::floating_point Real>
JointUV<Real> joint_uv(const HermiteData<Real>& data, const BoundaryPreimages<Real>& w) {
  const auto& [a0, a1, b2, b3] = w;
  JointUV<Real> r;
  r.U = (Real(5) * (a0 + b3) + Real(39) * (a1 + b2)) / Real(52);
  r.V = (Real(40) * (a0 * a0 + b3 * b3) + Real(49) * (a0 * a1 + b2 * b3) +
         Real(62) * (a1 * a1 + b2 * b2) + a0 * b2 + a1 * b3 + Real(28) * a1 * b2 -
         Real(560) * data.delta()) /
        Real(52);
  return r;
}

template <std::floating_point Real>
Complex<Real> solve_joint(const Complex<Real>& U, const Complex<Real>& V, int zeta_d = 1) {
  return Real(zeta_d < 0 ? -1 : 1) * chi(U * U - V) - U;
}

/// Scalar arc-length residual e = |U^2 - V| - |U|^2 + v; zero exactly when
/// the biarc built from these parameters has length L (for either zeta_d).
///
/// At alpha0 = alpha1 = 0 with beta0 = beta1 = 0 it returns the continuous
/// limit (140/13)(|P1 - P0| - L).
template <std::floating_point Real>
Real length_residual(const HermiteData<Real>& data, Real alpha0, Real alpha1, Real beta0,
                     Real beta1) {
  if ((alpha0 == Real(0) && beta0 != Real(0)) || (alpha1 == Real(0) && beta1 != Real(0)))
    throw DegenerateError("length_residual: zero alpha with nonzero beta");
  const auto w = detail::boundary_preimages_unchecked(data, alpha0, alpha1, beta0, beta1);
  const auto [U, V] = joint_uv(data, w);
  const auto& [a0, a1, b2, b3] = w;
  const Real v =
      (Real(40) * std::norm(a0) + Real(40) * std::norm(b3) + Real(62) * std::norm(a1) +
       Real(62) * std::norm(b2) +
       (Real(49) * a0 * std::conj(a1) + Real(49) * b2 * std::conj(b3) + Real(28) * a1 * std::conj(b2) +
        a0 * std::conj(b2) + a1 * std::conj(b3))
           .real() -
       Real(560) * data.L) /
      Real(52);
  return std::abs(U * U - V) - std::norm(U) + v;
}

/// A PH biarc: two degree-7 halves of parameter width 1/2 meeting C3 at t = 1/2.
template <std::floating_point Real>
class PHBiarc {
 public:
  using C = Complex<Real>;

  PHBiarc(PHSegment7<Real> half_a, PHSegment7<Real> half_b, FreeParams<Real> params, Real alpha0,
          Real alpha1, C joint_d, C chord)
      : half_a_(std::move(half_a)),
        half_b_(std::move(half_b)),
        params_(params),
        alpha0_(alpha0),
        alpha1_(alpha1),
        d_(joint_d),
        chord_(chord) {
    try {
      energy_ = half_a_.bending_energy() + half_b_.bending_energy();
    } catch (const CuspError&) {
      energy_ = std::numeric_limits<Real>::infinity();
    }
  }

  const PHSegment7<Real>& half_a() const { return half_a_; }
  const PHSegment7<Real>& half_b() const { return half_b_; }
  const FreeParams<Real>& params() const { return params_; }
  Real alpha0() const { return alpha0_; }
  Real alpha1() const { return alpha1_; }
  C joint_d() const { return d_; }
  /// Integral of kappa(t)^2 over t in [0, 1]; +inf when the curve has a cusp.
  Real energy() const { return energy_; }
  /// Integral of kappa^2 with respect to arc length.
  Real energy_ds() const { return half_a_.bending_energy_ds() + half_b_.bending_energy_ds(); }

  Real arc_length() const { return half_a_.arc_length() + half_b_.arc_length(); }
  C start() const { return half_a_.start(); }
  C end() const { return half_b_.end(); }

  C point(Real t) const { return start() + displacement(t); }

  /// r(t) - r(0), accumulated from relative control points only.
  C displacement(Real t) const {
    check(t);
    if (t < Real(0.5)) return half_a_.displacement(Real(2) * t);
    const Real u = Real(2) * t - Real(1);
    return chord_ - (half_b_.control_offsets()[7] - half_b_.displacement(u));
  }

  /// k-th derivative with respect to the global parameter t; the second half
  /// is used at t = 1/2.
  C derivative(Real t, std::size_t order) const {
    check(t);
    if (order == 0) return point(t);
    const Real factor = std::pow(Real(2), Real(order));
    if (t < Real(0.5)) return factor * half_a_.derivative(Real(2) * t, order);
    return factor * half_b_.derivative(Real(2) * t - Real(1), order);
  }

  Frame<Real> evaluate(Real t) const {
    check(t);
    Frame<Real> f = t < Real(0.5) ? half_a_.evaluate(Real(2) * t)
                                  : half_b_.evaluate(Real(2) * t - Real(1));
    f.speed *= Real(2);
    return f;
  }

  /// Copy rotated about the origin by the unit complex number rot, where
  /// root * root == rot.
  PHBiarc rotated(C rot, C root) const {
    auto spin = [&](const PHSegment7<Real>& s) {
      PreimageCubic<Real> p = s.preimage();
      for (auto& c : p.w) c *= root;
      return PHSegment7<Real>(p, s.start() * rot, s.scale());
    };
    return PHBiarc(spin(half_a_), spin(half_b_), params_, alpha0_, alpha1_, d_ * root, chord_ * rot,
                   energy_);
  }

 private:
  PHBiarc(PHSegment7<Real> a, PHSegment7<Real> b, FreeParams<Real> params, Real alpha0, Real alpha1,
          C d, C chord, Real energy)
      : half_a_(std::move(a)),
        half_b_(std::move(b)),
        params_(params),
        alpha0_(alpha0),
        alpha1_(alpha1),
        d_(d),
        chord_(chord),
        energy_(energy) {}

  static void check(Real t) {
    if (!(t >= Real(0) && t <= Real(1))) throw DomainError("PHBiarc: parameter outside [0, 1]");
  }

  PHSegment7<Real> half_a_;
  PHSegment7<Real> half_b_;
  FreeParams<Real> params_;
  Real alpha0_;
  Real alpha1_;
  C d_;
  C chord_;
  Real energy_ = 0;
};

/// Closed-form biarc for fixed free parameters. Its length equals data.L only
/// when length_residual vanishes at these parameters.
template <std::floating_point Real>
PHBiarc<Real> construct_biarc(const HermiteData<Real>& data, Real alpha0, Real alpha1, Real beta0,
                              Real beta1, int zeta_d = 1, Real lambda = 0) {
  using C = Complex<Real>;
  const auto w = boundary_preimages(data, alpha0, alpha1, beta0, beta1);
  const auto [U, V] = joint_uv(data, w);
  const C d = solve_joint(U, V, zeta_d);
  const C wA2 = (w.wA1 + d) / Real(2);
  const C wB1 = (w.wB2 + d) / Real(2);
  const C mid = (wA2 + wB1) / Real(2);
  PHSegment7<Real> a({{w.wA0, w.wA1, wA2, mid}}, data.P0, Real(0.5));
  PreimageCubic<Real> pre_b{{mid, wB1, w.wB2, w.wB3}};
  // The second half is integrated backwards from P1.
  const PHSegment7<Real> probe(pre_b, C{}, Real(0.5));
  PHSegment7<Real> b(pre_b, data.P1 - probe.control_offsets()[7], Real(0.5));
  FreeParams<Real> params;
  params.beta0 = beta0;
  params.beta1 = beta1;
  params.lambda = lambda > Real(0) ? lambda : std::abs(alpha1 / alpha0);
  params.branch = (alpha0 > Real(0)) == (alpha1 > Real(0)) ? Branch::Same : Branch::Opposite;
  params.zeta_d = zeta_d < 0 ? -1 : 1;
  return PHBiarc<Real>(std::move(a), std::move(b), params, alpha0, alpha1, d, data.delta());
}

/// Diagnostics of one root scan of e along alpha1 = s * lambda * alpha0.
template <std::floating_point Real>
struct AlphaScan {
  std::vector<Real> roots;  // signed alpha0, ascending
  Real x_min = 0, x_max = 0;  // scanned range of alpha0^2
  Real e_at_min = 0, e_at_max = 0;
};

namespace detail {

// Scans alpha0 = side * sqrt(x) on a geometric grid of x, bisects every sign
// change and polishes with a central-difference Newton step.
template <std::floating_point Real>
AlphaScan<Real> scan_alpha_side(const HermiteData<Real>& data, Real lambda, Real beta0, Real beta1,
                                Branch branch, int side) {
  const Real s = Real(branch_sign(branch));
  auto e_of = [&](Real x) {
    const Real a0 = Real(side) * std::sqrt(x);
    return length_residual(data, a0, s * lambda * a0, beta0, beta1);
  };

  AlphaScan<Real> scan;
  const Real ratio = std::pow(Real(2), Real(1) / Real(16));
  const Real x_cap = Real(1e8) * std::max(data.L, Real(1));
  scan.x_min = Real(1e-6) * data.chord();
  Real x_end = Real(16) * data.L;
  while (e_of(x_end) <= Real(0) && x_end < x_cap) x_end *= Real(2);
  scan.x_max = x_end;
  scan.e_at_min = e_of(scan.x_min);
  scan.e_at_max = e_of(scan.x_max);

  std::vector<Real> found;
  Real x_lo = scan.x_min;
  Real e_lo = scan.e_at_min;
  while (x_lo < x_end) {
    const Real x_hi = std::min(x_lo * ratio, x_end);
    const Real e_hi = e_of(x_hi);
    if (e_lo == Real(0)) {
      found.push_back(x_lo);
    } else if ((e_lo < Real(0)) != (e_hi < Real(0)) && e_hi != Real(0)) {
      Real a = x_lo, b = x_hi, ea = e_lo;
      for (int it = 0; it < 200; ++it) {
        const Real m = a + (b - a) / Real(2);
        if (m <= a || m >= b) break;
        const Real em = e_of(m);
        if (em == Real(0)) {
          a = b = m;
          break;
        }
        if ((em < Real(0)) == (ea < Real(0))) {
          a = m;
          ea = em;
        } else {
          b = m;
        }
      }
      Real x = a + (b - a) / Real(2);
      Real ex = e_of(x);
      for (int it = 0; it < 3 && ex != Real(0); ++it) {
        const Real h = Real(1e-6) * x;
        const Real slope = (e_of(x + h) - e_of(x - h)) / (Real(2) * h);
        if (slope == Real(0) || !std::isfinite(slope)) break;
        const Real xn = x - ex / slope;
        if (!(xn > Real(0))) break;
        const Real en = e_of(xn);
        if (!(std::abs(en) < std::abs(ex))) break;
        x = xn;
        ex = en;
      }
      found.push_back(x);
    }
    x_lo = x_hi;
    e_lo = e_hi;
  }
  if (e_lo == Real(0)) found.push_back(x_lo);

  for (Real x : found) {
    const Real a0 = Real(side) * std::sqrt(x);
    if (scan.roots.empty() || std::abs(a0 - scan.roots.back()) > Real(1e-8) * std::max(Real(1), std::abs(a0)))
      scan.roots.push_back(a0);
  }
  std::sort(scan.roots.begin(), scan.roots.end());
  return scan;
}

}  // namespace detail

/// Positive roots alpha0 of the length equation along the given branch,
/// ascending. Never empty for beta0 = beta1 = 0 and lambda > 0.
template <std::floating_point Real>
std::vector<Real> solve_alpha(const HermiteData<Real>& data, Real lambda, Real beta0, Real beta1,
                              Branch branch) {
  if (!(lambda > Real(0))) throw DomainError("solve_alpha: lambda must be positive");
  return detail::scan_alpha_side(data, lambda, beta0, beta1, branch, +1).roots;
}

template <std::floating_point Real>
AlphaScan<Real> scan_alpha(const HermiteData<Real>& data, Real lambda, Real beta0, Real beta1,
                           Branch branch, int side = 1) {
  if (!(lambda > Real(0))) throw DomainError("scan_alpha: lambda must be positive");
  return detail::scan_alpha_side(data, lambda, beta0, beta1, branch, side < 0 ? -1 : 1);
}

template <std::floating_point Real>
struct BiarcSolutions {
  std::vector<PHBiarc<Real>> candidates;
  std::optional<std::size_t> selected;

  bool empty() const { return !selected.has_value(); }
  const PHBiarc<Real>& best() const {
    if (!selected) throw NoSolutionError("no biarc satisfies the length constraint");
    return candidates[*selected];
  }
};

/// All biarcs with zeta_d = +1 meeting the data for fixed lambda and beta,
/// and the index of the one with minimal bending energy.
///
/// Candidates are ordered by branch (same-sign first) and then by alpha0,
/// positive before negative. Equal energies (to 1e-9 relative) are broken by
/// smaller |alpha0|, then the same-sign branch, then positive alpha0.
template <std::floating_point Real>
BiarcSolutions<Real> interpolate(const HermiteData<Real>& data, Real lambda = 1, Real beta0 = 0,
                                 Real beta1 = 0) {
  if (!(lambda > Real(0))) throw DomainError("interpolate: lambda must be positive");
  BiarcSolutions<Real> out;
  for (Branch branch : {Branch::Same, Branch::Opposite}) {
    const Real s = Real(branch_sign(branch));
    std::vector<Real> roots;
    for (int side : {+1, -1}) {
      auto r = detail::scan_alpha_side(data, lambda, beta0, beta1, branch, side);
      roots.insert(roots.end(), r.roots.begin(), r.roots.end());
    }
    std::stable_sort(roots.begin(), roots.end(), [](Real a, Real b) {
      if ((a > Real(0)) != (b > Real(0))) return a > Real(0);
      return std::abs(a) < std::abs(b);
    });
    for (Real a0 : roots)
      out.candidates.push_back(construct_biarc(data, a0, s * lambda * a0, beta0, beta1, 1, lambda));
  }
  auto better = [](const PHBiarc<Real>& x, const PHBiarc<Real>& y) {
    const Real ex = x.energy(), ey = y.energy();
    const bool tie = ex == ey || std::abs(ex - ey) <= Real(1e-9) * std::max(std::abs(ex), std::abs(ey));
    if (!tie) return ex < ey;
    const Real ax = std::abs(x.alpha0()), ay = std::abs(y.alpha0());
    if (std::abs(ax - ay) > Real(1e-9) * std::max(ax, ay)) return ax < ay;
    if (x.params().branch != y.params().branch) return x.params().branch == Branch::Same;
    return x.alpha0() > y.alpha0();
  };
  for (std::size_t i = 0; i < out.candidates.size(); ++i) {
    if (!std::isfinite(out.candidates[i].energy())) continue;
    if (!out.selected || better(out.candidates[i], out.candidates[*out.selected])) out.selected = i;
  }
  return out;
}

template <std::floating_point Real>
struct ExistenceCoefficients {
  Real c0 = 0;     // constant term of e1 = -|U|^2 + v in alpha0
  Real c1 = 0;     // leading (alpha0^6) coefficient of e1
  Real c2 = 0;     // constant term of |U^2 - V|^2
  Real theta = 0;  // Theta(theta0, theta1)
};

/// Constant and leading coefficients of the length equation for beta = 0,
/// as used in the existence argument. Tangent angles are taken in (-pi, pi];
/// an angle of exactly pi makes Theta singular and is rejected.
template <std::floating_point Real>
ExistenceCoefficients<Real> existence_coefficients(const HermiteData<Real>& data, Real lambda,
                                                 Branch branch) {
  auto singular = [](const Complex<Real>& t) { return t.imag() == Real(0) && t.real() < Real(0); };
  if (singular(data.t0) || singular(data.t1))
    throw DomainError("existence_coefficients: tangent angle pi is singular");
  const Real th0 = std::arg(data.t0);
  const Real th1 = std::arg(data.t1);
  ExistenceCoefficients<Real> c;
  c.theta = std::sqrt(std::cos(th0) + Real(1)) * std::sqrt(std::cos(th1) + Real(1)) *
            (std::tan(th0 / Real(2)) * std::tan(th1 / Real(2)) + Real(1));
  const Real l3 = lambda * lambda * lambda;
  c.c0 = -Real(140) / Real(13) * data.L;
  c.c1 = (Real(131) * data.k0 * data.k0 +
          Real(branch_sign(branch)) * Real(61) * c.theta * l3 * data.k0 * data.k1 +
          Real(131) * l3 * l3 * data.k1 * data.k1) /
         Real(29952);
  const Real f = Real(140) / Real(13);
  c.c2 = f * f * std::norm(data.delta());
  return c;
}

}  // namespace phbiarc

#endif  // PHBIARC_BIARC_HPP
