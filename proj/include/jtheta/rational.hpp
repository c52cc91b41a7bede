#pragma once

#include <cstdint>

#include <boost/rational.hpp>

namespace jtheta {

using Rational = boost::rational<std::int64_t>;

}  // namespace jtheta
