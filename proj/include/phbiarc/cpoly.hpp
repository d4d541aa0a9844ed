#ifndef PHBIARC_CPOLY_HPP
#define PHBIARC_CPOLY_HPP

// Complex arithmetic helpers and complex-coefficient Bernstein polynomials
// over the unit parameter interval [0, 1].

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace phbiarc {

template <std::floating_point Real>
using Complex = std::complex<Real>;

/// Raised for arguments outside an operation's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

template <std::floating_point Real>
constexpr Real binomial(std::size_t n, std::size_t k) {
  if (k > n) return Real(0);
  if (k > n - k) k = n - k;
  Real r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * Real(n - k + i) / Real(i);
  return r;
}

template <std::floating_point Real>
bool finite(const Complex<Real>& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace detail

/// Polynomial in Bernstein form over [0, 1] with complex coefficients.
template <std::floating_point Real>
class BernsteinPoly {
 public:
  using value_type = Complex<Real>;

  BernsteinPoly() : coeffs_{value_type{}} {}
  explicit BernsteinPoly(std::vector<value_type> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw DomainError("BernsteinPoly: at least one coefficient required");
    for (const auto& c : coeffs_)
      if (!detail::finite(c)) throw DomainError("BernsteinPoly: non-finite coefficient");
  }
  BernsteinPoly(std::initializer_list<value_type> coeffs)
      : BernsteinPoly(std::vector<value_type>(coeffs)) {}

  std::size_t degree() const { return coeffs_.size() - 1; }
  std::span<const value_type> coeffs() const { return coeffs_; }
  const value_type& operator[](std::size_t i) const { return coeffs_[i]; }

  /// de Casteljau evaluation; t must lie in [0, 1].
  value_type operator()(Real t) const;

  /// Bernstein coefficients of the derivative (degree m-1).
  BernsteinPoly derivative() const {
    const std::size_t m = degree();
    if (m == 0) return BernsteinPoly{value_type{}};
    std::vector<value_type> d(m);
    for (std::size_t i = 0; i < m; ++i) d[i] = Real(m) * (coeffs_[i + 1] - coeffs_[i]);
    return BernsteinPoly(std::move(d));
  }

 private:
  std::vector<value_type> coeffs_;
};

template <std::floating_point Real>
Complex<Real> eval(const BernsteinPoly<Real>& p, Real t) {
  if (!(t >= Real(0) && t <= Real(1))) throw DomainError("eval: parameter outside [0, 1]");
  const auto b = p.coeffs();
  if (t == Real(0)) return b.front();
  if (t == Real(1)) return b.back();
  std::vector<Complex<Real>> work(b.begin(), b.end());
  const Real s = Real(1) - t;
  for (std::size_t level = work.size() - 1; level > 0; --level)
    for (std::size_t i = 0; i < level; ++i) work[i] = s * work[i] + t * work[i + 1];
  return work[0];
}

template <std::floating_point Real>
Complex<Real> BernsteinPoly<Real>::operator()(Real t) const {
  return eval(*this, t);
}

/// Bernstein coefficients of p(t)^2 (degree 2m).
template <std::floating_point Real>
BernsteinPoly<Real> square(const BernsteinPoly<Real>& p) {
  const std::size_t m = p.degree();
  std::vector<Complex<Real>> out(2 * m + 1);
  for (std::size_t i = 0; i <= 2 * m; ++i) {
    Complex<Real> acc{};
    const std::size_t lo = i > m ? i - m : 0;
    const std::size_t hi = std::min(m, i);
    for (std::size_t j = lo; j <= hi; ++j)
      acc += detail::binomial<Real>(m, j) * detail::binomial<Real>(m, i - j) * p[j] * p[i - j];
    out[i] = acc / detail::binomial<Real>(2 * m, i);
  }
  return BernsteinPoly<Real>(std::move(out));
}

/// Real Bernstein coefficients of Re(p(t) * conj(q(t))).
template <std::floating_point Real>
std::vector<Real> hermitian_product(const BernsteinPoly<Real>& p, const BernsteinPoly<Real>& q) {
  const std::size_t m = p.degree();
  const std::size_t n = q.degree();
  std::vector<Real> out(m + n + 1);
  for (std::size_t i = 0; i <= m + n; ++i) {
    Real acc = 0;
    const std::size_t lo = i > n ? i - n : 0;
    const std::size_t hi = std::min(m, i);
    for (std::size_t j = lo; j <= hi; ++j)
      acc += detail::binomial<Real>(m, j) * detail::binomial<Real>(n, i - j) *
             (p[j] * std::conj(q[i - j])).real();
    out[i] = acc / detail::binomial<Real>(m + n, i);
  }
  return out;
}

/// Evaluates a real Bernstein coefficient sequence at t in [0, 1].
template <std::floating_point Real>
Real eval_real(std::span<const Real> b, Real t) {
  if (!(t >= Real(0) && t <= Real(1))) throw DomainError("eval_real: parameter outside [0, 1]");
  if (b.empty()) throw DomainError("eval_real: empty coefficient sequence");
  if (t == Real(0)) return b.front();
  if (t == Real(1)) return b.back();
  std::vector<Real> work(b.begin(), b.end());
  const Real s = Real(1) - t;
  for (std::size_t level = work.size() - 1; level > 0; --level)
    for (std::size_t i = 0; i < level; ++i) work[i] = s * work[i] + t * work[i + 1];
  return work[0];
}

/// Principal square root with Re >= 0 and chi(-x) = +i sqrt(x) on the negative
/// real axis. Evaluated without cancellation on either half-plane.
template <std::floating_point Real>
Complex<Real> chi(const Complex<Real>& c) {
  const Real r = std::hypot(c.real(), c.imag());
  if (r == Real(0)) return {};
  if (c.real() >= Real(0)) {
    const Real re = std::sqrt((r + c.real()) / 2);
    return {re, c.imag() / (2 * re)};
  }
  const Real im = std::sqrt((r - c.real()) / 2);
  const Real re = std::abs(c.imag()) / (2 * im);
  return {re, c.imag() < Real(0) ? -im : im};
}

}  // namespace phbiarc

#endif  // PHBIARC_CPOLY_HPP
