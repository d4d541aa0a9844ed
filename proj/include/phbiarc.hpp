#ifndef PHBIARC_HPP
#define PHBIARC_HPP

#include "phbiarc/cpoly.hpp"
#include "phbiarc/phcurve.hpp"
#include "phbiarc/hermite.hpp"
#include "phbiarc/biarc.hpp"
#include "phbiarc/singleph.hpp"
#include "phbiarc/spline.hpp"
#include "phbiarc/bench.hpp"

#endif  // PHBIARC_HPP
