#ifndef PHBIARC_SPLINE_HPP
#define PHBIARC_SPLINE_HPP

// Local G2 PH spline: one independently solved biarc per span. Continuity at
// the knots comes from the shared node data, not from coupling equations.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "phbiarc/biarc.hpp"

namespace phbiarc {

template <std::floating_point Real>
struct SplineNode {
  Complex<Real> point;
  Complex<Real> tangent;  // unit
  Real curvature = 0;
};

/// A span of the spline could not be built.
class SpanError : public std::runtime_error {
 public:
  SpanError(std::size_t span, const std::string& what)
      : std::runtime_error("span " + std::to_string(span) + ": " + what), span_(span) {}
  std::size_t span() const { return span_; }

 private:
  std::size_t span_;
};

template <std::floating_point Real>
struct SplineOptions {
  Real lambda = 1;
  Real beta0 = 0;
  Real beta1 = 0;
};

/// Span j covers the global parameter interval [j, j+1].
template <std::floating_point Real>
class G2Spline {
 public:
  G2Spline(std::vector<SplineNode<Real>> nodes, std::vector<PHBiarc<Real>> spans)
      : nodes_(std::move(nodes)), spans_(std::move(spans)) {}

  std::size_t size() const { return spans_.size(); }
  const std::vector<PHBiarc<Real>>& spans() const { return spans_; }
  const std::vector<SplineNode<Real>>& nodes() const { return nodes_; }

  Real arc_length() const {
    Real s = 0;
    for (const auto& b : spans_) s += b.arc_length();
    return s;
  }
  Real energy() const {
    Real s = 0;
    for (const auto& b : spans_) s += b.energy();
    return s;
  }

  /// Frame at global parameter u in [0, N]; knots belong to the span on
  /// their right, except u = N.
  Frame<Real> evaluate_global(Real u) const {
    const auto [j, t] = locate(u);
    return spans_[j].evaluate(t);
  }
  Complex<Real> point_global(Real u) const {
    const auto [j, t] = locate(u);
    return spans_[j].point(t);
  }

 private:
  std::pair<std::size_t, Real> locate(Real u) const {
    const Real n = Real(spans_.size());
    if (!(u >= Real(0) && u <= n)) throw DomainError("G2Spline: parameter outside [0, N]");
    std::size_t j = static_cast<std::size_t>(std::floor(u));
    if (j >= spans_.size()) j = spans_.size() - 1;
    return {j, u - Real(j)};
  }

  std::vector<SplineNode<Real>> nodes_;
  std::vector<PHBiarc<Real>> spans_;
};

/// Builds the minimum-energy biarc on every span [nodes[j], nodes[j+1]] with
/// prescribed length lengths[j].
template <std::floating_point Real>
G2Spline<Real> build_spline(std::vector<SplineNode<Real>> nodes, const std::vector<Real>& lengths,
                            SplineOptions<Real> opt = {}) {
  if (nodes.size() < 2) throw DomainError("build_spline: at least two nodes required");
  if (lengths.size() + 1 != nodes.size())
    throw DomainError("build_spline: need exactly one length per span");
  std::vector<PHBiarc<Real>> spans;
  spans.reserve(lengths.size());
  for (std::size_t j = 0; j < lengths.size(); ++j) {
    const auto& a = nodes[j];
    const auto& b = nodes[j + 1];
    try {
      HermiteData<Real> data(a.point, b.point, a.tangent, b.tangent, a.curvature, b.curvature,
                             lengths[j]);
      spans.push_back(interpolate(data, opt.lambda, opt.beta0, opt.beta1).best());
    } catch (const std::exception& e) {
      throw SpanError(j, e.what());
    }
  }
  return G2Spline<Real>(std::move(nodes), std::move(spans));
}

template <std::floating_point Real>
struct KnotMismatch {
  std::size_t knot = 0;  // interior node index
  Real position = 0;
  Real tangent = 0;
  Real curvature = 0;
};

/// Position, unit-tangent and curvature jumps at each interior knot.
template <std::floating_point Real>
std::vector<KnotMismatch<Real>> knot_mismatches(const G2Spline<Real>& sp) {
  std::vector<KnotMismatch<Real>> out;
  for (std::size_t j = 1; j < sp.size(); ++j) {
    const auto left = sp.spans()[j - 1].evaluate(Real(1));
    const auto right = sp.spans()[j].evaluate(Real(0));
    out.push_back({j, std::abs(left.point - right.point),
                   std::abs(left.unit_tangent - right.unit_tangent),
                   std::abs(left.curvature - right.curvature)});
  }
  return out;
}

}  // namespace phbiarc

#endif  // PHBIARC_SPLINE_HPP
