#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace samplemine {

// Itemset-universe counts (sum of binomials) routinely overflow 64 bits, and
// the stopping rules compare exact rationals, so the arbitrary-precision types
// are part of the public surface.
using big_int = boost::multiprecision::cpp_int;
using big_rational = boost::multiprecision::cpp_rational;
using big_float = boost::multiprecision::cpp_bin_float_100;

}  // namespace samplemine
