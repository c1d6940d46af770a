#pragma once

#include <stdexcept>
#include <string>

namespace cylmartin {

// Bad argument to a builder or evaluator (non-positive length, t <= 0, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A BaseOperator (or the document describing one) breaks an invariant.
class ValidationError : public std::runtime_error {
public:
    enum class Kind {
        Schema,
        AsymmetricStiffness,
        NonPositiveMass,
        PositiveOffDiagonal,
        NotPositiveDefinite,
        BadSymmetry,
        ComplementPolar,
    };

    ValidationError(Kind kind, const std::string& what)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind)
    {
    }

    Kind kind() const noexcept { return kind_; }

    static const char* kind_name(Kind kind) noexcept
    {
        switch (kind) {
        case Kind::Schema: return "schema violation";
        case Kind::AsymmetricStiffness: return "asymmetric stiffness";
        case Kind::NonPositiveMass: return "non-positive mass";
        case Kind::PositiveOffDiagonal: return "positive off-diagonal";
        case Kind::NotPositiveDefinite: return "not positive definite";
        case Kind::BadSymmetry: return "bad symmetry";
        case Kind::ComplementPolar: return "complement polar";
        }
        return "validation error";
    }

private:
    Kind kind_;
};

// Eigensolver failure or a degenerate ground state.
class SpectralError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quadrature that did not reach its requested tolerance.
class ToleranceError : public std::runtime_error {
public:
    ToleranceError(const std::string& what, double estimate, double error)
        : std::runtime_error(what), estimate_(estimate), error_(error)
    {
    }
    double estimate() const noexcept { return estimate_; }
    double error() const noexcept { return error_; }

private:
    double estimate_;
    double error_;
};

// Exact convolution requested beyond what enumeration can hold.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

class UnknownSuiteError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace cylmartin
