#ifndef PHBIARC_SINGLEPH_HPP
#define PHBIARC_SINGLEPH_HPP

// A single degree-7 PH curve through the same G2 + length data. Three real
// equations (end point, length) in alpha0, beta0, beta1 after fixing
// alpha1 = +-lambda * alpha0; solved by multi-start damped Newton, so roots
// outside the basins of the start grid can be missed.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <tuple>
#include <vector>

#include "phbiarc/biarc.hpp"
#include "phbiarc/hermite.hpp"
#include "phbiarc/phcurve.hpp"

namespace phbiarc {

template <std::floating_point Real>
struct SinglePHProblem {
  HermiteData<Real> data;
  Real lambda = 1;
};

template <std::floating_point Real>
struct SinglePHSolution {
  PHSegment7<Real> segment;
  Real alpha0 = 0;  // normalized to alpha0 > 0
  Real alpha1 = 0;
  Real beta0 = 0;
  Real beta1 = 0;
  Real residual = 0;  // Euclidean norm of the three residuals
  Real energy = 0;    // integral of kappa(t)^2 over [0, 1]
};

namespace detail {

// Symmetric weights M with end-point equation sum M_jk w_j w_k = 70 dP and
// length equation sum M_jk Re(w_j conj(w_k)) = 70 L.
template <std::floating_point Real>
constexpr std::array<std::array<Real, 4>, 4> single_weights() {
  return {{{Real(10), Real(5), Real(2), Real(0.5)},
           {Real(5), Real(6), Real(4.5), Real(2)},
           {Real(2), Real(4.5), Real(6), Real(5)},
           {Real(0.5), Real(2), Real(5), Real(10)}}};
}

template <std::floating_point Real>
struct SingleState {
  std::array<Complex<Real>, 4> w;
  // dw/d(alpha0), dw/d(beta0), dw/d(beta1)
  std::array<std::array<Complex<Real>, 4>, 3> dw;
};

template <std::floating_point Real>
SingleState<Real> single_preimage(const HermiteData<Real>& data, Real sign_lambda, Real alpha0,
                                  Real beta0, Real beta1) {
  using C = Complex<Real>;
  const C c0 = chi(data.t0);
  const C c1 = chi(data.t1);
  const Real a0 = alpha0;
  const Real a1 = sign_lambda * alpha0;
  SingleState<Real> s;
  s.w[0] = a0 * c0;
  s.w[1] = c0 * C{a0 + beta0 / (Real(6) * a0), data.k0 * a0 * a0 * a0 / Real(6)};
  s.w[2] = c1 * C{a1 - beta1 / (Real(6) * a1), -data.k1 * a1 * a1 * a1 / Real(6)};
  s.w[3] = a1 * c1;
  const C dw1_da0 = c0 * C{Real(1) - beta0 / (Real(6) * a0 * a0), data.k0 * a0 * a0 / Real(2)};
  const C dw2_da1 = c1 * C{Real(1) + beta1 / (Real(6) * a1 * a1), -data.k1 * a1 * a1 / Real(2)};
  s.dw[0] = {c0, dw1_da0, sign_lambda * dw2_da1, sign_lambda * c1};
  s.dw[1] = {C{}, c0 / (Real(6) * a0), C{}, C{}};
  s.dw[2] = {C{}, C{}, -c1 / (Real(6) * a1), C{}};
  return s;
}

template <std::floating_point Real>
void single_system(const HermiteData<Real>& data, Real sign_lambda, const std::array<Real, 3>& x,
                   std::array<Real, 3>& f, std::array<std::array<Real, 3>, 3>* jac) {
  using C = Complex<Real>;
  constexpr auto M = single_weights<Real>();
  const auto s = single_preimage(data, sign_lambda, x[0], x[1], x[2]);
  std::array<C, 4> m{};
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) m[j] += M[j][k] * s.w[k];
  C g{};
  Real h = 0;
  for (int j = 0; j < 4; ++j) {
    g += s.w[j] * m[j];
    h += (s.w[j] * std::conj(m[j])).real();
  }
  g -= Real(70) * data.delta();
  h -= Real(70) * data.L;
  f = {g.real(), g.imag(), h};
  if (!jac) return;
  for (int p = 0; p < 3; ++p) {
    C dg{};
    Real dh = 0;
    for (int j = 0; j < 4; ++j) {
      dg += Real(2) * s.dw[p][j] * m[j];
      dh += Real(2) * (s.dw[p][j] * std::conj(m[j])).real();
    }
    (*jac)[0][p] = dg.real();
    (*jac)[1][p] = dg.imag();
    (*jac)[2][p] = dh;
  }
}

// Gaussian elimination with partial pivoting; false when singular.
template <std::floating_point Real>
bool solve3(std::array<std::array<Real, 3>, 3> a, std::array<Real, 3> b, std::array<Real, 3>& x) {
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == Real(0) || !std::isfinite(a[piv][c])) return false;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (int r = c + 1; r < 3; ++r) {
      const Real f = a[r][c] / a[c][c];
      for (int k = c; k < 3; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (int r = 2; r >= 0; --r) {
    Real acc = b[r];
    for (int k = r + 1; k < 3; ++k) acc -= a[r][k] * x[k];
    x[r] = acc / a[r][r];
  }
  return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

template <std::floating_point Real>
Real norm3(const std::array<Real, 3>& f) {
  return std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]);
}

}  // namespace detail

/// Residuals of the end-point equation (real, imaginary) and of the length
/// equation at (alpha0, beta0, beta1), with alpha1 = s * lambda * alpha0.
template <std::floating_point Real>
std::array<Real, 3> residual_system(const SinglePHProblem<Real>& prob, Real alpha0, Real beta0,
                                    Real beta1, Branch branch = Branch::Same) {
  if (alpha0 == Real(0)) throw DegenerateError("residual_system: alpha0 must be nonzero");
  std::array<Real, 3> f{};
  detail::single_system<Real>(prob.data, Real(branch_sign(branch)) * prob.lambda, {alpha0, beta0, beta1},
                        f, nullptr);
  return f;
}

/// Builds the single PH curve for the given parameters (start at P0).
template <std::floating_point Real>
PHSegment7<Real> single_segment(const HermiteData<Real>& data, Real alpha0, Real alpha1, Real beta0,
                                Real beta1) {
  const auto s = detail::single_preimage(data, alpha1 / alpha0, alpha0, beta0, beta1);
  return PHSegment7<Real>(PreimageCubic<Real>{s.w}, data.P0, Real(1));
}

namespace detail {

// Damped Newton on the three residuals starting from x (updated in place).
// Returns the final residual norm, or NaN if the iteration broke down.
template <std::floating_point Real>
Real newton_single(const HermiteData<Real>& data, Real sl, std::array<Real, 3>& x, Real alpha_unit,
                   int max_iter = 200) {
  const Real chord = data.chord();
  const Real eps = std::numeric_limits<Real>::epsilon();
  std::array<Real, 3> f;
  std::array<std::array<Real, 3>, 3> J;
  detail::single_system(data, sl, x, f, &J);
  Real fn = detail::norm3(f);
  if (!std::isfinite(fn)) return std::numeric_limits<Real>::quiet_NaN();
  for (int it = 0; it < max_iter; ++it) {
    if (fn == Real(0)) break;
    std::array<Real, 3> step;
    if (!detail::solve3(J, {-f[0], -f[1], -f[2]}, step)) return std::numeric_limits<Real>::quiet_NaN();
    // Armijo backtracking on 0.5 |F|^2.
    Real t = 1;
    std::array<Real, 3> xn, fnew;
    Real fnn = fn;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      xn = {x[0] + t * step[0], x[1] + t * step[1], x[2] + t * step[2]};
      if (xn[0] == Real(0)) {
        t /= 2;
        continue;
      }
      detail::single_system<Real>(data, sl, xn, fnew, nullptr);
      fnn = detail::norm3(fnew);
      if (std::isfinite(fnn) && fnn * fnn <= (Real(1) - Real(2e-4) * t) * fn * fn) {
        accepted = true;
        break;
      }
      t /= 2;
    }
    if (!accepted) break;
    const Real move = std::abs(xn[0] - x[0]) / (std::abs(x[0]) + alpha_unit) +
                      std::abs(xn[1] - x[1]) / (std::abs(x[1]) + chord) +
                      std::abs(xn[2] - x[2]) / (std::abs(x[2]) + chord);
    x = xn;
    detail::single_system(data, sl, x, f, &J);
    fn = fnn;
    if (move <= Real(4) * eps) break;
  }
  return fn;
}

template <std::floating_point Real>
SinglePHSolution<Real> make_single(const HermiteData<Real>& data, Real a0, Real a1, Real b0, Real b1,
                                   Real res) {
  PHSegment7<Real> seg = single_segment(data, a0, a1, b0, b1);
  Real energy;
  try {
    energy = seg.bending_energy();
  } catch (const CuspError&) {
    energy = std::numeric_limits<Real>::infinity();
  }
  return SinglePHSolution<Real>{std::move(seg), a0, a1, b0, b1, res, energy};
}

}  // namespace detail

namespace detail {

template <std::floating_point Real>
struct SingleRoot {
  Real a0, b0, b1;
  Real sl;  // alpha1 / alpha0
  Real res;
};

template <std::floating_point Real>
Real alpha_unit(const HermiteData<Real>& data) {
  return std::sqrt(data.L);
}

// Converged Newton end points from the whole start grid, not deduplicated.
template <std::floating_point Real>
std::vector<SingleRoot<Real>> single_roots(const SinglePHProblem<Real>& prob) {
  if (!(prob.lambda > Real(0))) throw DomainError("solve: lambda must be positive");
  const auto& data = prob.data;
  const Real chord = data.chord();
  const Real unit = alpha_unit(data);
  // Never below what the type can resolve (matters for float seeds).
  const Real tol = std::max(Real(1e-9), Real(1000) * std::numeric_limits<Real>::epsilon()) * (Real(1) + data.L);
  std::vector<SingleRoot<Real>> raw;
  for (int sgn : {+1, -1}) {
    const Real sl = Real(sgn) * prob.lambda;
    for (int ia = -16; ia <= 16; ++ia) {
      if (ia == 0) continue;
      for (int ib0 = -4; ib0 <= 4; ++ib0) {
        for (int ib1 = -4; ib1 <= 4; ++ib1) {
          std::array<Real, 3> x{Real(ia) * Real(0.25) * unit, Real(8 * ib0) * chord, Real(8 * ib1) * chord};
          const Real fn = newton_single(data, sl, x, unit);
          if (fn <= tol) raw.push_back({x[0], x[1], x[2], sl, fn});
        }
      }
    }
  }
  return raw;
}

// Newton from a given point; kept only if resolved to working precision.
// Near-singular Jacobians at small scales otherwise leave stalled points
// that pass a loose residual test.
template <std::floating_point Real>
std::optional<SingleRoot<Real>> refine_root(const HermiteData<Real>& data, Real sl, std::array<Real, 3> x) {
  // From a good seed Newton converges in a handful of steps.
  const Real fn = newton_single(data, sl, x, alpha_unit(data), 30);
  if (!(fn <= Real(1000) * std::numeric_limits<Real>::epsilon() * (Real(1) + data.L))) return std::nullopt;
  return SingleRoot<Real>{x[0], x[1], x[2], sl, fn};
}

template <std::floating_point Real>
std::vector<SinglePHSolution<Real>> collect(const HermiteData<Real>& data, std::vector<SingleRoot<Real>> raw) {
  const Real chord = data.chord();
  const Real unit = alpha_unit(data);
  // Negating alpha0 and alpha1 together negates w and leaves the curve fixed.
  for (auto& r : raw)
    if (r.a0 < Real(0)) r.a0 = -r.a0;
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
    return std::tie(a.a0, a.b0, a.b1, a.sl) < std::tie(b.a0, b.b0, b.b1, b.sl);
  });
  std::vector<SinglePHSolution<Real>> out;
  std::vector<SingleRoot<Real>> kept;
  for (const auto& r : raw) {
    bool dup = false;
    for (const auto& k : kept) {
      const Real dist =
          std::abs(r.a0 - k.a0) / unit + std::abs(r.b0 - k.b0) / chord + std::abs(r.b1 - k.b1) / chord;
      if (r.sl == k.sl && dist <= Real(1e-6)) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    kept.push_back(r);
    out.push_back(make_single(data, r.a0, r.sl * r.a0, r.b0, r.b1, r.res));
  }
  return out;
}

}  // namespace detail

/// All single-curve interpolants found from the start grid, deduplicated and
/// sorted by (alpha0, beta0, beta1). Both alpha1 = +lambda*alpha0 and
/// alpha1 = -lambda*alpha0 are searched.
template <std::floating_point Real>
std::vector<SinglePHSolution<Real>> solve(const SinglePHProblem<Real>& prob) {
  return detail::collect(prob.data, detail::single_roots(prob));
}

/// Same search with the start grid run in the cheaper type Lo and every
/// converged point refined in Real; meant for emulated wide types, where the
/// grid itself is slow. Points that do not refine to working precision are
/// dropped.
template <std::floating_point Real, std::floating_point Lo>
std::vector<SinglePHSolution<Real>> solve_seeded(const SinglePHProblem<Real>& prob) {
  const auto& d = prob.data;
  auto lo = [](const Complex<Real>& z) { return Complex<Lo>(Lo(z.real()), Lo(z.imag())); };
  const HermiteData<Lo> coarse(lo(d.P0), lo(d.P1), lo(d.t0), lo(d.t1), Lo(d.k0), Lo(d.k1), Lo(d.L));
  // Start points converge to noise clouds around each root; refining one
  // seed per cloud is enough and keeps emulated types affordable.
  const Lo radius = Lo(1e-9) * (std::sqrt(coarse.L) + coarse.chord());
  std::vector<detail::SingleRoot<Lo>> kept;
  std::vector<detail::SingleRoot<Real>> raw;
  for (const auto& r : detail::single_roots(SinglePHProblem<Lo>{coarse, Lo(prob.lambda)})) {
    const bool seen = std::any_of(kept.begin(), kept.end(), [&](const auto& k) {
      return k.sl == r.sl &&
             std::abs(k.a0 - r.a0) + std::abs(k.b0 - r.b0) + std::abs(k.b1 - r.b1) <= radius;
    });
    if (seen) continue;
    kept.push_back(r);
    if (auto q = detail::refine_root(d, Real(r.sl), {Real(r.a0), Real(r.b0), Real(r.b1)})) raw.push_back(*q);
  }
  return detail::collect(d, std::move(raw));
}

/// Newton refinement of a known solution (typically found at lower
/// precision) for the same data; nullopt unless it converges to working
/// precision.
template <std::floating_point Real>
std::optional<SinglePHSolution<Real>> polish(const SinglePHProblem<Real>& prob, Real alpha0, Real alpha1,
                                            Real beta0, Real beta1) {
  if (alpha0 == Real(0)) throw DomainError("polish: alpha0 must be nonzero");
  const auto r = detail::refine_root(prob.data, alpha1 / alpha0, {alpha0, beta0, beta1});
  if (!r) return std::nullopt;
  const Real s = r->a0 < Real(0) ? Real(-1) : Real(1);
  return detail::make_single(prob.data, s * r->a0, s * r->sl * r->a0, r->b0, r->b1, r->res);
}

}  // namespace phbiarc

#endif  // PHBIARC_SINGLEPH_HPP
