#pragma once

// Green's function, Martin kernels and separated solutions of
// L = ∂²ᵤ + b∂ᵤ + Δ_Σ on the cylinder ℝ×Σ, evaluated mode by mode.
//
// With w = u − v, s = |w| and μ_k = λ_k + b²/4,
//
//   G(u,i; v,j) = e^{−bw/2} Σ_k φ_k(i) φ_k(j) e^{−s√μ_k} / (2√μ_k).
//
// Internally the sum is rescaled by e^{s√μ₁} so every term is O(1); values
// are assembled in log space and only exponentiated at the end.

#include "cylmartin/spectral.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace cylmartin {

struct CylinderPoint {
    double u = 0.0;
    Index node = 0;
};

// Axial transition density q_t(w) = (4πt)^{-1/2} exp(−(w + bt)² / 4t).
double gaussian_density(double t, double w, double b);

template <typename Scalar>
class GreenEvaluator {
public:
    GreenEvaluator(std::shared_ptr<const BaseOperator> base, std::shared_ptr<const SpectralData<Scalar>> spec);
    GreenEvaluator(std::shared_ptr<const BaseOperator> base, std::shared_ptr<const SpectralData<Scalar>> spec,
                   CylinderPoint reference);

    const BaseOperator& base() const { return *base_; }
    const SpectralData<Scalar>& spectrum() const { return *spec_; }
    std::shared_ptr<const SpectralData<Scalar>> spectrum_ptr() const { return spec_; }
    std::shared_ptr<const BaseOperator> base_ptr() const { return base_; }
    CylinderPoint reference() const { return reference_; }

    // Same operator and spectrum, different normalization point.
    GreenEvaluator with_reference(CylinderPoint reference) const;

    // log G(p; q) and G(p; q). The log is −∞ when the mode sum is not positive
    // (only possible through round-off).
    Scalar log_green(const CylinderPoint& p, const CylinderPoint& q) const;
    Scalar green(const CylinderPoint& p, const CylinderPoint& q) const;

    // Σ_k φ_k(i)φ_k(j) e^{−s(√μ_k − √μ₁)} / (2√μ_k): the rescaled axial sum.
    Scalar scaled_axial_sum(const Scalar& s, Index i, Index j) const;

private:
    void check(const CylinderPoint& p) const;

    std::shared_ptr<const BaseOperator> base_;
    std::shared_ptr<const SpectralData<Scalar>> spec_;
    CylinderPoint reference_;
};

template <typename Scalar>
GreenEvaluator<Scalar> make_evaluator(const BaseOperator& base)
{
    auto b = std::make_shared<const BaseOperator>(base);
    auto s = std::make_shared<const SpectralData<Scalar>>(decompose<Scalar>(base));
    return GreenEvaluator<Scalar>(std::move(b), std::move(s));
}

template <typename Scalar>
Scalar green(const GreenEvaluator<Scalar>& ev, const CylinderPoint& p, const CylinderPoint& q)
{
    return ev.green(p, q);
}

template <typename Scalar>
Scalar log_green(const GreenEvaluator<Scalar>& ev, const CylinderPoint& p, const CylinderPoint& q)
{
    return ev.log_green(p, q);
}

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double min_integrand = 0.0;  // smallest integrand value seen at a node
    double saddle_time = 0.0;
};

// ∫₀^∞ q_t(u−v) π_t(i,j) dt by double-exponential quadrature, split at the
// saddle time |u−v|/(2√μ₁). Throws ToleranceError when the error estimate
// exceeds `relative_tolerance`·|value|.
QuadratureResult green_by_quadrature(const GreenEvaluator<double>& ev, const CylinderPoint& p,
                                     const CylinderPoint& q, double relative_tolerance = 1e-9);

// K_pole(p) = G(p; pole) / G(reference; pole).
template <typename Scalar>
class MartinKernel {
public:
    MartinKernel(GreenEvaluator<Scalar> ev, CylinderPoint pole);

    Scalar operator()(const CylinderPoint& p) const;
    Scalar log_value(const CylinderPoint& p) const;
    const CylinderPoint& pole() const { return pole_; }

private:
    GreenEvaluator<Scalar> ev_;
    CylinderPoint pole_;
    Scalar log_normalizer_;
};

template <typename Scalar>
MartinKernel<Scalar> martin_kernel(const GreenEvaluator<Scalar>& ev, const CylinderPoint& pole)
{
    return MartinKernel<Scalar>(ev, pole);
}

// c · e^{αu} φ₀(x) / φ₀(x₀).
template <typename Scalar>
class SeparatedFunction {
public:
    SeparatedFunction(std::shared_ptr<const SpectralData<Scalar>> spec, Scalar exponent, CylinderPoint reference);

    Scalar operator()(const CylinderPoint& p) const;
    const Scalar& exponent() const { return exponent_; }

private:
    std::shared_ptr<const SpectralData<Scalar>> spec_;
    Scalar exponent_;
    CylinderPoint reference_;
};

template <typename Scalar>
SeparatedFunction<Scalar> f_plus(const GreenEvaluator<Scalar>& ev)
{
    return {ev.spectrum_ptr(), ev.spectrum().ladder.alpha_max, ev.reference()};
}

template <typename Scalar>
SeparatedFunction<Scalar> f_minus(const GreenEvaluator<Scalar>& ev)
{
    return {ev.spectrum_ptr(), ev.spectrum().ladder.alpha_min, ev.reference()};
}

// Relative residual of the discrete L-harmonicity of a separated solution
// e^{αu}φ₀: ‖Kφ₀ − λ₁Wφ₀‖/(λ₁‖Wφ₀‖) + |α(α+b) − λ₁|/λ₁.
template <typename Scalar>
Scalar separated_residual(const BaseOperator& base, const SpectralData<Scalar>& spec, const Scalar& alpha);

// h(u,x) = Σ_k [A_k e^{α_k⁺(u − U₊)} + B_k e^{α_k⁻(u − U₋)}] φ_k(x), with
// α_k^± = (−b ± √(b² + 4λ_k))/2. The anchors U± keep the stored coefficients
// O(1) on long truncated cylinders; plus_coefficient/minus_coefficient return
// the unanchored values A_k e^{−α_k⁺U₊}, B_k e^{−α_k⁻U₋}.
template <typename Scalar>
class ModeSolution {
public:
    ModeSolution(std::shared_ptr<const SpectralData<Scalar>> spec, Vector<Scalar> plus, Vector<Scalar> minus,
                 Scalar plus_anchor = Scalar(0), Scalar minus_anchor = Scalar(0));

    Scalar operator()(const CylinderPoint& p) const;
    // Σ_k (|A_k e^{…}| + |B_k e^{…}|)·|φ_k(x)|, the scale used to judge a sign.
    Scalar magnitude(const CylinderPoint& p) const;

    Scalar plus_coefficient(Index k) const;
    Scalar minus_coefficient(Index k) const;
    const Vector<Scalar>& plus_scaled() const { return plus_; }
    const Vector<Scalar>& minus_scaled() const { return minus_; }
    Scalar alpha_plus(Index k) const;
    Scalar alpha_minus(Index k) const;
    const SpectralData<Scalar>& spectrum() const { return *spec_; }

private:
    std::shared_ptr<const SpectralData<Scalar>> spec_;
    Vector<Scalar> plus_;
    Vector<Scalar> minus_;
    Scalar plus_anchor_;
    Scalar minus_anchor_;
    std::vector<Index> active_;  // modes with a nonzero coefficient
};

// Mode-wise solution on (−T, T)×Σ with h(±T, ·) = g±.
template <typename Scalar>
ModeSolution<Scalar> truncated_dirichlet_solve(const GreenEvaluator<Scalar>& ev, const Scalar& half_length,
                                               const Vector<Scalar>& g_minus, const Vector<Scalar>& g_plus);

// First grid point (u ascending, then node) where the solution is below
// −1e−12 × its local magnitude; nullopt when none is found. A falsifier, not
// a proof of positivity.
template <typename Scalar>
std::optional<CylinderPoint> positivity_scan(const ModeSolution<Scalar>& sol, double u_min, double u_max,
                                             double u_step = 0.05);

struct ExponentFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
};

// Least-squares slope of log value against u.
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& samples);

// Same fit on values already in log form.
ExponentFit fit_log_linear(const std::vector<std::pair<double, double>>& log_samples);

}  // namespace cylmartin
