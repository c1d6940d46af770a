#pragma once

// Generalized Dirichlet eigensystem of a base, its heat kernel and the
// exponent ladder α_min < α₀ < α_max of separated positive solutions.

#include "cylmartin/base_domain.hpp"
#include "cylmartin/numeric.hpp"

#include <iosfwd>

namespace cylmartin {

// Roots of α² + bα = λ₁ together with α₀ = -b/2.
template <typename Scalar>
struct ExponentLadder {
    Scalar alpha_min;
    Scalar alpha_zero;
    Scalar alpha_max;
    Scalar lambda1;
};

template <typename Scalar>
ExponentLadder<Scalar> exponent_ladder(const Scalar& lambda1, const Scalar& drift);

template <typename Scalar>
struct SpectralData {
    Vector<Scalar> eigenvalues;   // ascending, eigenvalues(0) = λ₁
    Matrix<Scalar> eigenvectors;  // column k is φ_{k+1}, mass-orthonormal
    Vector<Scalar> mass;
    Vector<Scalar> mu;            // λ_k + b²/4
    Vector<Scalar> sqrt_mu;
    Scalar drift;
    ExponentLadder<Scalar> ladder;
    Index reference = 0;

    Index size() const { return eigenvalues.size(); }
    auto ground_state() const { return eigenvectors.col(0); }
    const Scalar& lambda1() const { return eigenvalues(0); }
};

// Full generalized eigendecomposition of (stiffness, diag(mass)). Tridiagonal
// bases skip the Householder reduction. Eigenvectors are sign-normalized so
// that their largest-magnitude entry is positive.
template <typename Scalar>
SpectralData<Scalar> decompose(const BaseOperator& base);

// max_k ‖K φ_k − λ_k W φ_k‖ / (λ_k ‖φ_k‖).
template <typename Scalar>
Scalar max_relative_residual(const BaseOperator& base, const SpectralData<Scalar>& spec);

// π_t(i,j) = Σ_k e^{-λ_k t} φ_k(i) φ_k(j), density against the mass weights.
template <typename Scalar>
Scalar heat_kernel(const SpectralData<Scalar>& spec, const Scalar& t, Index i, Index j);

// e^{λ₁ t} π_t(i,j), free of underflow for large t.
template <typename Scalar>
Scalar heat_kernel_scaled(const SpectralData<Scalar>& spec, const Scalar& t, Index i, Index j);

template <typename Scalar>
ExponentLadder<Scalar> exponent_ladder(const SpectralData<Scalar>& spec)
{
    return spec.ladder;
}

// CSV writers: (k, lambda_k, mu_k) and (node, k, value).
void write_spectrum_csv(std::ostream& out, const SpectralData<double>& spec);
void write_eigenvectors_csv(std::ostream& out, const SpectralData<double>& spec);

}  // namespace cylmartin
