#pragma once

// Scalar types and Eigen aliases shared by every module.
//
// Every numerical kernel is templated on the scalar. Two instantiations are
// compiled: `double` for the everyday bases and `Extended` (100 significant
// digits) for quantities whose true value sits far below double round-off
// relative to the individual eigenmode terms, e.g. Green values at the deep
// end of a bead chain.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>

namespace cylmartin {

#ifndef CYLMARTIN_EXTENDED_DIGITS
#define CYLMARTIN_EXTENDED_DIGITS 100
#endif

using Extended = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<CYLMARTIN_EXTENDED_DIGITS>,
                                               boost::multiprecision::et_off>;

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
inline double to_double(const Scalar& x)
{
    return static_cast<double>(x);
}

template <typename Scalar>
inline Scalar from_double(double x)
{
    return Scalar(x);
}

}  // namespace cylmartin

namespace Eigen {

// Boost 1.74 ships an Eigen adaptor that predates Eigen 3.4 (no infinity()/quiet_NaN()).
template <>
struct NumTraits<cylmartin::Extended> : GenericNumTraits<cylmartin::Extended> {
    using T = cylmartin::Extended;
    using Real = T;
    using NonInteger = T;
    using Nested = T;
    using Literal = T;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 4,
        MulCost = 8
    };
    static T epsilon() { return std::numeric_limits<T>::epsilon(); }
    static T dummy_precision() { return T(1000) * epsilon(); }
    static T highest() { return (std::numeric_limits<T>::max)(); }
    static T lowest() { return std::numeric_limits<T>::lowest(); }
    static T infinity() { return std::numeric_limits<T>::infinity(); }
    static T quiet_NaN() { return std::numeric_limits<T>::quiet_NaN(); }
    static int digits10() { return std::numeric_limits<T>::digits10; }
};

}  // namespace Eigen
