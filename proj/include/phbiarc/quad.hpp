#ifndef PHBIARC_QUAD_HPP
#define PHBIARC_QUAD_HPP

// 113-bit quad precision for the convergence studies, whose finest rows sit
// below what 80-bit long double can resolve.
//
// Include this before any other phbiarc header: the library calls std::sqrt
// and friends by qualified name, so the __float128 overloads that Boost's
// cstdfloat adds to namespace std must already be declared. Requires GNU
// extensions (-std=gnu++20) and linking libquadmath.

#include <boost/cstdfloat.hpp>

#ifndef BOOST_FLOAT128_C
#error "phbiarc/quad.hpp: this toolchain has no __float128 support"
#endif

#include "phbiarc.hpp"

namespace phbiarc {

using Quad = boost::float128_t;

}  // namespace phbiarc

#endif  // PHBIARC_QUAD_HPP
