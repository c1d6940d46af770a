#include "cylmartin/spectral.hpp"

#include "cylmartin/errors.hpp"

#include <Eigen/Eigenvalues>

#include <iomanip>
#include <ostream>
#include <sstream>

namespace cylmartin {

template <typename Scalar>
ExponentLadder<Scalar> exponent_ladder(const Scalar& lambda1, const Scalar& drift)
{
    using std::abs;
    using std::sqrt;
    const Scalar root = sqrt(drift * drift + Scalar(4) * lambda1);
    ExponentLadder<Scalar> ladder;
    ladder.lambda1 = lambda1;
    ladder.alpha_zero = -drift / Scalar(2);
    // The root of smaller magnitude is taken from the product α_min·α_max = -λ₁.
    if (drift >= Scalar(0)) {
        ladder.alpha_min = (-drift - root) / Scalar(2);
        ladder.alpha_max = -lambda1 / ladder.alpha_min;
    } else {
        ladder.alpha_max = (-drift + root) / Scalar(2);
        ladder.alpha_min = -lambda1 / ladder.alpha_max;
    }
    return ladder;
}

template <typename Scalar>
SpectralData<Scalar> decompose(const BaseOperator& base)
{
    using std::abs;
    using std::sqrt;
    validate(base);
    const Index n = base.size();

    Vector<Scalar> mass(n);
    Vector<Scalar> inv_sqrt_mass(n);
    for (Index i = 0; i < n; ++i) {
        mass(i) = Scalar(base.mass(i));
        inv_sqrt_mass(i) = Scalar(1) / sqrt(mass(i));
    }

    // Symmetric form W^{-1/2} K W^{-1/2}.
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver;
    if (base.is_tridiagonal()) {
        Vector<Scalar> diag(n);
        Vector<Scalar> sub(n > 1 ? n - 1 : 0);
        for (Index i = 0; i < n; ++i) {
            diag(i) = Scalar(base.stiffness(i, i)) * inv_sqrt_mass(i) * inv_sqrt_mass(i);
            if (i + 1 < n)
                sub(i) = Scalar(base.stiffness(i + 1, i)) * inv_sqrt_mass(i) * inv_sqrt_mass(i + 1);
        }
        solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    } else {
        Matrix<Scalar> sym(n, n);
        for (Index j = 0; j < n; ++j)
            for (Index i = 0; i < n; ++i)
                sym(i, j) = Scalar(base.stiffness(i, j)) * inv_sqrt_mass(i) * inv_sqrt_mass(j);
        solver.compute(sym, Eigen::ComputeEigenvectors);
    }
    if (solver.info() != Eigen::Success)
        throw SpectralError("generalized eigensolver did not converge");

    SpectralData<Scalar> spec;
    spec.eigenvalues = solver.eigenvalues();
    spec.eigenvectors = inv_sqrt_mass.asDiagonal() * solver.eigenvectors();
    spec.mass = mass;
    spec.drift = Scalar(base.drift);
    spec.reference = base.reference;

    for (Index k = 0; k < n; ++k) {
        Index arg = 0;
        spec.eigenvectors.col(k).cwiseAbs().maxCoeff(&arg);
        if (spec.eigenvectors(arg, k) < Scalar(0))
            spec.eigenvectors.col(k) = -spec.eigenvectors.col(k);
    }

    const Scalar residual = max_relative_residual(base, spec);
    if (!(residual <= Scalar(1e-9))) {
        std::ostringstream msg;
        msg << "eigensystem residual " << to_double(residual) << " exceeds 1e-9";
        throw SpectralError(msg.str());
    }
    if (!(spec.eigenvalues(0) > Scalar(0)))
        throw SpectralError("λ₁ is not positive");
    if (n > 1 && !(spec.eigenvalues(1) - spec.eigenvalues(0) > Scalar(1e-12)))
        throw SpectralError("λ₁ is not simple (Perron simplicity violated: gap below 1e-12)");
    for (Index i = 0; i < n; ++i)
        if (!(spec.eigenvectors(i, 0) > Scalar(0)))
            throw SpectralError("ground state is not entrywise positive at node " + std::to_string(i) +
                                " (Perron positivity violated; is the base connected?)");

    const Scalar quarter_b2 = spec.drift * spec.drift / Scalar(4);
    spec.mu = spec.eigenvalues.array() + quarter_b2;
    spec.sqrt_mu = spec.mu.array().sqrt();
    spec.ladder = exponent_ladder(spec.eigenvalues(0), spec.drift);
    return spec;
}

template <typename Scalar>
Scalar max_relative_residual(const BaseOperator& base, const SpectralData<Scalar>& spec)
{
    const Index n = spec.size();
    Matrix<Scalar> stiffness = base.stiffness.template cast<Scalar>();
    if (base.is_tridiagonal()) {
        Scalar worst(0);
        for (Index k = 0; k < n; ++k) {
            Scalar r2(0);
            for (Index i = 0; i < n; ++i) {
                Scalar acc = stiffness(i, i) * spec.eigenvectors(i, k);
                if (i > 0)
                    acc += stiffness(i, i - 1) * spec.eigenvectors(i - 1, k);
                if (i + 1 < n)
                    acc += stiffness(i, i + 1) * spec.eigenvectors(i + 1, k);
                acc -= spec.eigenvalues(k) * spec.mass(i) * spec.eigenvectors(i, k);
                r2 += acc * acc;
            }
            using std::sqrt;
            const Scalar rel = sqrt(r2) / (spec.eigenvalues(k) * spec.eigenvectors.col(k).norm());
            if (rel > worst)
                worst = rel;
        }
        return worst;
    }
    Matrix<Scalar> r = stiffness * spec.eigenvectors -
                       spec.mass.asDiagonal() * spec.eigenvectors * spec.eigenvalues.asDiagonal();
    Scalar worst(0);
    for (Index k = 0; k < n; ++k) {
        const Scalar rel = r.col(k).norm() / (spec.eigenvalues(k) * spec.eigenvectors.col(k).norm());
        if (rel > worst)
            worst = rel;
    }
    return worst;
}

template <typename Scalar>
Scalar heat_kernel(const SpectralData<Scalar>& spec, const Scalar& t, Index i, Index j)
{
    using std::exp;
    if (!(t > Scalar(0)))
        throw ParameterError("heat kernel needs t > 0");
    Scalar sum(0);
    for (Index k = 0; k < spec.size(); ++k)
        sum += exp(-spec.eigenvalues(k) * t) * spec.eigenvectors(i, k) * spec.eigenvectors(j, k);
    return sum;
}

template <typename Scalar>
Scalar heat_kernel_scaled(const SpectralData<Scalar>& spec, const Scalar& t, Index i, Index j)
{
    using std::exp;
    if (!(t > Scalar(0)))
        throw ParameterError("heat kernel needs t > 0");
    const Scalar l1 = spec.eigenvalues(0);
    Scalar sum(0);
    for (Index k = 0; k < spec.size(); ++k)
        sum += exp(-(spec.eigenvalues(k) - l1) * t) * spec.eigenvectors(i, k) * spec.eigenvectors(j, k);
    return sum;
}

void write_spectrum_csv(std::ostream& out, const SpectralData<double>& spec)
{
    out << "k,lambda_k,mu_k\n" << std::setprecision(17);
    for (Index k = 0; k < spec.size(); ++k)
        out << k + 1 << ',' << spec.eigenvalues(k) << ',' << spec.mu(k) << '\n';
}

void write_eigenvectors_csv(std::ostream& out, const SpectralData<double>& spec)
{
    out << "node,k,value\n" << std::setprecision(17);
    for (Index k = 0; k < spec.size(); ++k)
        for (Index i = 0; i < spec.size(); ++i)
            out << i << ',' << k + 1 << ',' << spec.eigenvectors(i, k) << '\n';
}

#define CYLMARTIN_INSTANTIATE(S)                                                                  \
    template ExponentLadder<S> exponent_ladder<S>(const S&, const S&);                            \
    template SpectralData<S> decompose<S>(const BaseOperator&);                                   \
    template S max_relative_residual<S>(const BaseOperator&, const SpectralData<S>&);             \
    template S heat_kernel<S>(const SpectralData<S>&, const S&, Index, Index);                    \
    template S heat_kernel_scaled<S>(const SpectralData<S>&, const S&, Index, Index);

CYLMARTIN_INSTANTIATE(double)
CYLMARTIN_INSTANTIATE(Extended)

#undef CYLMARTIN_INSTANTIATE

}  // namespace cylmartin
