#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "trn/rational.hpp"

namespace trn {

// 50-digit binary float for the log/power arithmetic around epsilon values.
// Densities stay exact rationals; only exponents and size thresholds go
// through Real, and integer thresholds are taken as ceilings of it.
using Real = boost::multiprecision::cpp_bin_float_50;

inline Real to_real(const Rational& r) {
    return Real(r.num()) / Real(r.den());
}

inline Real rlog(const Real& x) { return boost::multiprecision::log(x); }
inline Real rexp(const Real& x) { return boost::multiprecision::exp(x); }
inline Real rpow(const Real& b, const Real& e) { return boost::multiprecision::pow(b, e); }

// Smallest integer >= x.
inline long long ceil_ll(const Real& x) {
    Real c = boost::multiprecision::ceil(x);
    return c.convert_to<long long>();
}

// Ceiling of the natural log of a positive integer, as an exact integer.
inline int ceil_log_int(long long u) {
    if (u <= 1) return 0;
    int k = 0;
    Real acc = 1;
    while (acc < Real(u)) {
        acc *= rexp(Real(1));
        ++k;
    }
    // acc = e^k >= u > e^(k-1), so ceil(log u) = k unless u is exactly e^j,
    // impossible for integer u > 1.
    return k;
}

} // namespace trn
