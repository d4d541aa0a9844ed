#ifndef PHBIARC_BENCH_HPP
#define PHBIARC_BENCH_HPP

// Numerical experiments: logarithmic-spiral test curves, the parametric
// distance E_err under a quintic reparameterization, decay-exponent tables,
// the full-circle spline study, and energy minimization over lambda and beta.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "phbiarc/biarc.hpp"
#include "phbiarc/singleph.hpp"
#include "phbiarc/spline.hpp"

namespace phbiarc {

namespace detail {

// exp(z) - 1 without cancellation for small |z|.
template <std::floating_point Real>
Complex<Real> expm1(const Complex<Real>& z) {
  const Real x = z.real(), y = z.imag();
  const Real sh = std::sin(y / Real(2));
  return {std::expm1(x) * std::cos(y) - Real(2) * sh * sh, std::exp(x) * std::sin(y)};
}

}  // namespace detail

/// f(s) = -e^{ws} cos s + i e^{ws} sin s = -exp((w - i) s); w = 0 is the
/// unit circle traversed clockwise.
template <std::floating_point Real>
struct LogSpiral {
  using C = Complex<Real>;
  Real omega = 0;

  C rate() const { return {omega, Real(-1)}; }
  C point(Real s) const { return -std::exp(rate() * s); }
  /// f(a + delta) - f(a), accurate for small delta.
  C displacement(Real a, Real delta) const {
    return -std::exp(rate() * a) * detail::expm1(rate() * delta);
  }
  C d1(Real s) const { return -rate() * std::exp(rate() * s); }
  C d2(Real s) const { return -rate() * rate() * std::exp(rate() * s); }
  Real curvature(Real s) const { return -std::exp(-omega * s) / std::sqrt(Real(1) + omega * omega); }
  /// Arc length from f(a) to f(b).
  Real length(Real a, Real b) const {
    const Real h = b - a;
    const Real wh = omega * h;
    const Real g = std::abs(omega) < Real(1e-8)
                       ? h * (Real(1) + wh / Real(2) + wh * wh / Real(6))
                       : std::expm1(wh) / omega;
    return std::sqrt(Real(1) + omega * omega) * std::exp(omega * a) * g;
  }
};

/// Hermite data sampled from the curve on [s0, s1]. With local = true the
/// data is translated so that P0 = 0, which keeps small-interval
/// experiments free of absolute-position rounding.
template <std::floating_point Real>
HermiteData<Real> sample_hermite(const LogSpiral<Real>& f, Real s0, Real s1, bool local = false) {
  if (!(s0 < s1)) throw DomainError("sample_hermite: need s0 < s1");
  const Complex<Real> p0 = local ? Complex<Real>{} : f.point(s0);
  return HermiteData<Real>(p0, p0 + f.displacement(s0, s1 - s0), f.d1(s0), f.d1(s1),
                           f.curvature(s0), f.curvature(s1), f.length(s0, s1));
}

/// phi(t) = a + psi(t), psi a quintic in power form on t in [0, 1].
template <std::floating_point Real>
struct QuinticReparam {
  Real a = 0;
  Real h = 0;
  std::array<Real, 6> c{};  // psi(t) = sum c[k] t^k

  static QuinticReparam hermite(Real a, Real h, Real d0, Real d1, Real s0, Real s1) {
    QuinticReparam q;
    q.a = a;
    q.h = h;
    q.c[0] = 0;
    q.c[1] = d0;
    q.c[2] = s0 / Real(2);
    const Real A = h - q.c[1] - q.c[2];
    const Real B = d1 - q.c[1] - Real(2) * q.c[2];
    const Real Cc = s1 - Real(2) * q.c[2];
    q.c[3] = Real(10) * A - Real(4) * B + Cc / Real(2);
    q.c[4] = Real(-15) * A + Real(7) * B - Cc;
    q.c[5] = Real(6) * A - Real(3) * B + Cc / Real(2);
    return q;
  }

  Real psi(Real t) const {
    Real r = c[5];
    for (int k = 4; k >= 0; --k) r = r * t + c[k];
    return r;
  }
  Real dpsi(Real t) const {
    Real r = Real(5) * c[5];
    for (int k = 4; k >= 1; --k) r = r * t + Real(k) * c[k];
    return r;
  }
  Real ddpsi(Real t) const {
    Real r = Real(20) * c[5];
    for (int k = 4; k >= 2; --k) r = r * t + Real(k * (k - 1)) * c[k];
    return r;
  }
  Real operator()(Real t) const { return a + psi(t); }
};

template <std::floating_point Real>
struct ReparamResult {
  QuinticReparam<Real> phi;
  std::array<Real, 2> normal_residual{};  // chain-rule normal component at t = 0, 1
  bool valid = false;                     // phi' > 0 on the sample
};

/// Curves accepted by the error metric: r(t) - r(0) and global derivatives.
template <class Curve, class Real>
concept ErrorCurve = requires(const Curve& c, Real t) {
  { c.displacement(t) } -> std::convertible_to<Complex<Real>>;
  { c.derivative(t, std::size_t{1}) } -> std::convertible_to<Complex<Real>>;
};

/// Quintic phi: [0, 1] -> [a, b] matching r and f o phi up to second
/// derivatives at both ends. phi''(j) uses the tangential part of the chain
/// rule; the normal part, which vanishes under G2 matching, is reported.
template <std::floating_point Real, ErrorCurve<Real> Curve>
ReparamResult<Real> reparam_phi(const Curve& r, const LogSpiral<Real>& f, Real a, Real b) {
  ReparamResult<Real> out;
  std::array<Real, 2> d{}, s{};
  for (int j = 0; j < 2; ++j) {
    const Real t = Real(j);
    const Real sj = j == 0 ? a : b;
    const Complex<Real> rp = r.derivative(t, 1);
    const Complex<Real> rpp = r.derivative(t, 2);
    const Complex<Real> fp = f.d1(sj);
    const Complex<Real> fpp = f.d2(sj);
    const Real nf = std::norm(fp);
    d[j] = std::abs(rp) / std::sqrt(nf);
    const Complex<Real> rest = (rpp - fpp * d[j] * d[j]) * std::conj(fp);
    s[j] = rest.real() / nf;
    out.normal_residual[j] = std::abs(rest.imag()) / nf;
  }
  out.phi = QuinticReparam<Real>::hermite(a, b - a, d[0], d[1], s[0], s[1]);
  out.valid = true;
  for (int k = 0; k <= 1024; ++k)
    if (!(out.phi.dpsi(Real(k) / Real(1024)) > Real(0))) out.valid = false;
  return out;
}

/// max_t |r(t) - f(phi(t))| from 4096 uniform samples refined by
/// golden-section search around the largest sample.
template <std::floating_point Real, ErrorCurve<Real> Curve>
Real e_err(const Curve& r, const LogSpiral<Real>& f, const QuinticReparam<Real>& phi) {
  auto dist = [&](Real t) { return std::abs(r.displacement(t) - f.displacement(phi.a, phi.psi(t))); };
  constexpr int n = 4096;
  Real best = -1;
  int arg = 0;
  for (int k = 0; k <= n; ++k) {
    const Real v = dist(Real(k) / Real(n));
    if (v > best) {
      best = v;
      arg = k;
    }
  }
  Real lo = Real(std::max(arg - 1, 0)) / Real(n);
  Real hi = Real(std::min(arg + 1, n)) / Real(n);
  const Real g = (std::sqrt(Real(5)) - Real(1)) / Real(2);
  Real x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  Real f1 = dist(x1), f2 = dist(x2);
  for (int it = 0; it < 200 && hi - lo > Real(1e-14); ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = dist(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = dist(x2);
    }
  }
  return std::max({best, f1, f2});
}

enum class Method { Biarc, Single };

template <std::floating_point Real>
struct ErrorReport {
  Real param = 0;  // h, arc angle, or segment count
  Real e_err = 0;
  std::optional<Real> decay;  // from the second row on
  bool valid = true;          // reparameterization monotone
};

/// Minimum-energy single PH interpolant (lambda = 1); empty if none found.
template <std::floating_point Real>
std::optional<SinglePHSolution<Real>> best_single(const HermiteData<Real>& data, Real lambda = 1) {
  std::vector<SinglePHSolution<Real>> sols;
  // The start grid is slow in software quad precision; seed it in long double.
  if constexpr (std::numeric_limits<Real>::digits > std::numeric_limits<long double>::digits)
    sols = solve_seeded<Real, long double>(SinglePHProblem<Real>{data, lambda});
  else
    sols = solve(SinglePHProblem<Real>{data, lambda});
  if (sols.empty()) return std::nullopt;
  auto it = std::min_element(sols.begin(), sols.end(),
                             [](const auto& x, const auto& y) { return x.energy < y.energy; });
  return *it;
}

/// E_err of the minimum-energy interpolant of f on [a, a + h].
template <std::floating_point Real>
ErrorReport<Real> approximation_error(const LogSpiral<Real>& f, Real a, Real h, Method method) {
  const auto data = sample_hermite(f, a, a + h, true);
  ErrorReport<Real> rep;
  rep.param = h;
  auto measure = [&](const auto& curve) {
    const auto rp = reparam_phi<Real>(curve, f, a, a + h);
    rep.valid = rp.valid;
    rep.e_err = e_err<Real>(curve, f, rp.phi);
  };
  if (method == Method::Biarc) {
    measure(interpolate(data).best());
  } else {
    auto s = best_single(data);
    if (!s) throw NoSolutionError("no single PH interpolant found");
    measure(s->segment);
  }
  return rep;
}

template <std::floating_point Real>
void fill_decay(std::vector<ErrorReport<Real>>& rows) {
  for (std::size_t k = 1; k < rows.size(); ++k)
    rows[k].decay = std::log(rows[k - 1].e_err / rows[k].e_err) /
                    std::log(std::abs(rows[k - 1].param / rows[k].param));
}

/// Errors on [0, h] for each h (descending) with decay exponents
/// log(E_{k-1}/E_k) / log(h_{k-1}/h_k), i.e. log2 of the ratio for halving.
template <std::floating_point Real>
std::vector<ErrorReport<Real>> decay_table(const LogSpiral<Real>& f, const std::vector<Real>& h_list,
                                           Method method) {
  std::vector<ErrorReport<Real>> rows;
  for (Real h : h_list) rows.push_back(approximation_error(f, Real(0), h, method));
  fill_decay(rows);
  return rows;
}

template <std::floating_point Real>
struct CircleStudy {
  G2Spline<Real> spline;
  Real e_err = 0;                 // of the generating biarc, computed at the origin
  std::vector<Real> span_errors;  // of every rotated span in place
};

/// Full unit circle from N rotated copies of the biarc for arc angle 2 pi / N.
template <std::floating_point Real>
CircleStudy<Real> circle_spline(int n) {
  if (n < 2) throw DomainError("circle_spline: need N >= 2");
  const LogSpiral<Real> f{0};
  const Real phi = Real(2) * boost::math::constants::pi<Real>() / Real(n);
  const Real err0 = approximation_error(f, Real(0), phi, Method::Biarc).e_err;
  const auto base = interpolate(sample_hermite(f, Real(0), phi)).best();
  std::vector<PHBiarc<Real>> spans;
  std::vector<SplineNode<Real>> nodes;
  std::vector<Real> errors;
  for (int k = 0; k < n; ++k) {
    const Real ang = -phi * Real(k);
    auto span = k == 0 ? base : base.rotated(std::polar(Real(1), ang), std::polar(Real(1), ang / Real(2)));
    const Real s0 = phi * Real(k);
    const auto rp = reparam_phi<Real>(span, f, s0, s0 + phi);
    errors.push_back(e_err<Real>(span, f, rp.phi));
    nodes.push_back({f.point(s0), f.d1(s0) / std::abs(f.d1(s0)), f.curvature(s0)});
    spans.push_back(std::move(span));
  }
  nodes.push_back(nodes.front());
  return {G2Spline<Real>(std::move(nodes), std::move(spans)), err0, std::move(errors)};
}

/// Circle errors for N = 2^k, k in [k_min, k_max].
template <std::floating_point Real>
std::vector<ErrorReport<Real>> circle_order(int k_min, int k_max) {
  std::vector<ErrorReport<Real>> rows;
  const LogSpiral<Real> f{0};
  for (int k = k_min; k <= k_max; ++k) {
    const int n = 1 << k;
    auto rep = approximation_error(f, Real(0), Real(2) * boost::math::constants::pi<Real>() / Real(n),
                                   Method::Biarc);
    rep.param = Real(n);
    rows.push_back(rep);
  }
  fill_decay(rows);
  for (auto& r : rows)
    if (r.decay) r.decay = -*r.decay;
  return rows;
}

/// Error of every span of a spline built from samples of f at the given
/// parameters (one more parameter than spans).
template <std::floating_point Real>
std::vector<Real> spline_span_errors(const G2Spline<Real>& sp, const LogSpiral<Real>& f,
                                     const std::vector<Real>& params) {
  if (params.size() != sp.size() + 1) throw DomainError("spline_span_errors: parameter count");
  std::vector<Real> out;
  for (std::size_t j = 0; j < sp.size(); ++j) {
    const auto rp = reparam_phi<Real>(sp.spans()[j], f, params[j], params[j + 1]);
    out.push_back(e_err<Real>(sp.spans()[j], f, rp.phi));
  }
  return out;
}

/// Spline through samples of f at s_j = a + (b - a) j / n.
template <std::floating_point Real>
std::pair<G2Spline<Real>, std::vector<Real>> spiral_spline(const LogSpiral<Real>& f, Real a, Real b,
                                                           int n) {
  std::vector<SplineNode<Real>> nodes;
  std::vector<Real> params, lengths;
  for (int j = 0; j <= n; ++j) {
    const Real s = a + (b - a) * Real(j) / Real(n);
    params.push_back(s);
    nodes.push_back({f.point(s), f.d1(s) / std::abs(f.d1(s)), f.curvature(s)});
  }
  for (int j = 0; j < n; ++j) lengths.push_back(f.length(params[j], params[j + 1]));
  return {build_spline(std::move(nodes), lengths), params};
}

template <std::floating_point Real>
struct LambdaOptimum {
  Real lambda = 1;
  Real energy = 0;
  std::vector<std::pair<Real, Real>> grid;  // (lambda, minimal energy)
};

/// Minimal energy over lambda with beta0 = beta1 = 0: grid lambda = j/10,
/// j = 1..100, then optional golden-section refinement around the grid
/// minimum to a bracket width of 1e-6.
template <std::floating_point Real>
LambdaOptimum<Real> optimize_lambda(const HermiteData<Real>& data, bool continuous) {
  auto energy = [&](Real lambda) {
    const auto sol = interpolate(data, lambda);
    return sol.empty() ? std::numeric_limits<Real>::infinity() : sol.best().energy();
  };
  LambdaOptimum<Real> out;
  out.energy = std::numeric_limits<Real>::infinity();
  for (int j = 1; j <= 100; ++j) {
    const Real lambda = Real(j) / Real(10);
    const Real e = energy(lambda);
    out.grid.emplace_back(lambda, e);
    if (e < out.energy) {
      out.energy = e;
      out.lambda = lambda;
    }
  }
  if (!continuous) return out;
  Real lo = std::max(out.lambda - Real(0.1), Real(1e-3));
  Real hi = out.lambda + Real(0.1);
  const Real g = (std::sqrt(Real(5)) - Real(1)) / Real(2);
  Real x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  Real f1 = energy(x1), f2 = energy(x2);
  while (hi - lo > Real(1e-6)) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = energy(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = energy(x2);
    }
  }
  const Real lam = (lo + hi) / Real(2);
  const Real e = energy(lam);
  if (e < out.energy) {
    out.energy = e;
    out.lambda = lam;
  }
  return out;
}

template <std::floating_point Real>
struct BetaOptimum {
  Real beta0 = 0;
  Real beta1 = 0;
  Real energy = 0;
  int evaluations = 0;
};

/// Nelder-Mead over (beta0, beta1) at fixed lambda starting from (0, 0);
/// infeasible points score +inf. Returns the best feasible point visited.
template <std::floating_point Real>
BetaOptimum<Real> optimize_beta(const HermiteData<Real>& data, Real lambda, int max_evals = 500) {
  using P = std::array<Real, 2>;
  BetaOptimum<Real> best;
  best.energy = std::numeric_limits<Real>::infinity();
  auto energy = [&](const P& b) {
    ++best.evaluations;
    Real e = std::numeric_limits<Real>::infinity();
    try {
      const auto sol = interpolate(data, lambda, b[0], b[1]);
      if (!sol.empty()) e = sol.best().energy();
    } catch (const DomainError&) {
    }
    if (e < best.energy) {
      best.energy = e;
      best.beta0 = b[0];
      best.beta1 = b[1];
    }
    return e;
  };
  const Real step = data.chord();
  std::array<P, 3> x{P{0, 0}, P{step, 0}, P{0, step}};
  std::array<Real, 3> fx{};
  for (int i = 0; i < 3; ++i) fx[i] = energy(x[i]);
  auto lerp = [](const P& c, const P& p, Real t) {
    return P{c[0] + t * (p[0] - c[0]), c[1] + t * (p[1] - c[1])};
  };
  while (best.evaluations < max_evals) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return fx[i] < fx[j]; });
    const int lo = idx[0], mid = idx[1], hi = idx[2];
    const P c{(x[lo][0] + x[mid][0]) / 2, (x[lo][1] + x[mid][1]) / 2};
    const P xr = lerp(c, x[hi], Real(-1));
    const Real fr = energy(xr);
    if (fr < fx[lo]) {
      const P xe = lerp(c, x[hi], Real(-2));
      const Real fe = energy(xe);
      if (fe < fr) {
        x[hi] = xe;
        fx[hi] = fe;
      } else {
        x[hi] = xr;
        fx[hi] = fr;
      }
    } else if (fr < fx[mid]) {
      x[hi] = xr;
      fx[hi] = fr;
    } else {
      const bool outside = fr < fx[hi];
      const P xc = outside ? lerp(c, xr, Real(0.5)) : lerp(c, x[hi], Real(0.5));
      const Real fc = energy(xc);
      if (fc < (outside ? fr : fx[hi])) {
        x[hi] = xc;
        fx[hi] = fc;
      } else {
        for (int i : {mid, hi}) {
          x[i] = lerp(x[lo], x[i], Real(0.5));
          fx[i] = energy(x[i]);
        }
      }
    }
    const Real spread = std::max({std::abs(x[0][0] - x[1][0]), std::abs(x[0][0] - x[2][0]),
                                  std::abs(x[0][1] - x[1][1]), std::abs(x[0][1] - x[2][1])});
    if (spread < Real(1e-9) * step) break;
  }
  return best;
}

}  // namespace phbiarc

#endif  // PHBIARC_BENCH_HPP
