#ifndef BIMEANS_EXTENDED_HPP
#define BIMEANS_EXTENDED_HPP

// Reference evaluation of the means in 50-digit binary floating point.
// Formulas are the textbook ones, evaluated directly on (a, b) with no
// argument canonicalization or log-domain rewriting, so this path is an
// independent check on eval_mean().

#include "bimeans/means.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace bimeans {

using Wide = boost::multiprecision::cpp_bin_float_50;

Wide extended_eval(const MeanKind& kind, const PositivePair& p);

// Same formulas on wide arguments (e.g. a power-lifted pair a^k, b^k).
// Arguments must be positive.
Wide extended_eval(const MeanKind& kind, const Wide& a, const Wide& b);

} // namespace bimeans

#endif
