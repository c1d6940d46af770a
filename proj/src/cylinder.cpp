#include "cylmartin/cylinder.hpp"

#include "cylmartin/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace cylmartin {

double gaussian_density(double t, double w, double b)
{
    if (!(t > 0.0))
        throw ParameterError("gaussian density needs t > 0");
    const double shifted = w + b * t;
    return std::exp(-shifted * shifted / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

template <typename Scalar>
GreenEvaluator<Scalar>::GreenEvaluator(std::shared_ptr<const BaseOperator> base,
                                       std::shared_ptr<const SpectralData<Scalar>> spec)
    : GreenEvaluator(base, spec, CylinderPoint{0.0, base ? base->reference : 0})
{
}

template <typename Scalar>
GreenEvaluator<Scalar>::GreenEvaluator(std::shared_ptr<const BaseOperator> base,
                                       std::shared_ptr<const SpectralData<Scalar>> spec, CylinderPoint reference)
    : base_(std::move(base)), spec_(std::move(spec)), reference_(reference)
{
    if (!base_ || !spec_)
        throw ParameterError("green evaluator needs a base and its spectrum");
    if (base_->size() != spec_->size())
        throw ParameterError("spectrum does not belong to this base");
    check(reference_);
    for (Index k = 0; k < spec_->size(); ++k)
        if (!(spec_->mu(k) > Scalar(0)))
            throw ParameterError("μ_k must be positive for every mode");
}

template <typename Scalar>
GreenEvaluator<Scalar> GreenEvaluator<Scalar>::with_reference(CylinderPoint reference) const
{
    return GreenEvaluator(base_, spec_, reference);
}

template <typename Scalar>
void GreenEvaluator<Scalar>::check(const CylinderPoint& p) const
{
    if (p.node < 0 || p.node >= spec_->size())
        throw ParameterError("cylinder point node out of range");
    if (!std::isfinite(p.u))
        throw ParameterError("cylinder point axial coordinate must be finite");
}

template <typename Scalar>
Scalar GreenEvaluator<Scalar>::scaled_axial_sum(const Scalar& s, Index i, Index j) const
{
    using std::exp;
    const auto& spec = *spec_;
    const Scalar root1 = spec.sqrt_mu(0);
    Scalar sum(0);
    for (Index k = 0; k < spec.size(); ++k) {
        const Scalar decay = exp(-s * (spec.sqrt_mu(k) - root1));
        sum += spec.eigenvectors(i, k) * spec.eigenvectors(j, k) * decay / (Scalar(2) * spec.sqrt_mu(k));
    }
    return sum;
}

template <typename Scalar>
Scalar GreenEvaluator<Scalar>::log_green(const CylinderPoint& p, const CylinderPoint& q) const
{
    using std::abs;
    using std::log;
    check(p);
    check(q);
    const Scalar w = Scalar(p.u) - Scalar(q.u);
    const Scalar s = abs(w);
    const Scalar sum = scaled_axial_sum(s, p.node, q.node);
    if (!(sum > Scalar(0)))
        return -std::numeric_limits<Scalar>::infinity();
    return -spec_->drift * w / Scalar(2) - s * spec_->sqrt_mu(0) + log(sum);
}

template <typename Scalar>
Scalar GreenEvaluator<Scalar>::green(const CylinderPoint& p, const CylinderPoint& q) const
{
    using std::exp;
    return exp(log_green(p, q));
}

QuadratureResult green_by_quadrature(const GreenEvaluator<double>& ev, const CylinderPoint& p,
                                     const CylinderPoint& q, double relative_tolerance)
{
    const auto& spec = ev.spectrum();
    const double w = p.u - q.u;
    if (w == 0.0 && p.node == q.node)
        throw ParameterError("quadrature route needs distinct points (axially or by node)");
    if (p.node < 0 || p.node >= spec.size() || q.node < 0 || q.node >= spec.size())
        throw ParameterError("cylinder point node out of range");

    QuadratureResult result;
    result.min_integrand = std::numeric_limits<double>::infinity();
    result.saddle_time = std::abs(w) / (2.0 * spec.sqrt_mu(0));

    auto integrand = [&](double t) {
        if (!(t > 0.0))
            return 0.0;
        const double value = gaussian_density(t, w, spec.drift) * heat_kernel(spec, t, p.node, q.node);
        result.min_integrand = std::min(result.min_integrand, value);
        return value;
    };

    double err_head = 0.0;
    double err_tail = 0.0;
    double l1 = 0.0;
    double head = 0.0;
    double tail = 0.0;
    const double split = result.saddle_time > 0.0 ? result.saddle_time : 1.0 / spec.mu(0);
    boost::math::quadrature::tanh_sinh<double> ts(15);
    head = ts.integrate(integrand, 0.0, split, relative_tolerance * 1e-2, &err_head, &l1);
    boost::math::quadrature::exp_sinh<double> es(12);
    tail = es.integrate(integrand, split, std::numeric_limits<double>::infinity(), relative_tolerance * 1e-2,
                        &err_tail, &l1);

    result.value = head + tail;
    result.error_estimate = err_head + err_tail;
    if (!(result.error_estimate <= relative_tolerance * std::abs(result.value)))
        throw ToleranceError("green quadrature missed its tolerance", result.value, result.error_estimate);
    return result;
}

template <typename Scalar>
MartinKernel<Scalar>::MartinKernel(GreenEvaluator<Scalar> ev, CylinderPoint pole)
    : ev_(std::move(ev)), pole_(pole)
{
    const CylinderPoint ref = ev_.reference();
    if (ref.u == pole_.u && ref.node == pole_.node)
        throw ParameterError("Martin kernel pole coincides with the reference point");
    log_normalizer_ = ev_.log_green(ref, pole_);
}

template <typename Scalar>
Scalar MartinKernel<Scalar>::log_value(const CylinderPoint& p) const
{
    return ev_.log_green(p, pole_) - log_normalizer_;
}

template <typename Scalar>
Scalar MartinKernel<Scalar>::operator()(const CylinderPoint& p) const
{
    using std::exp;
    return exp(log_value(p));
}

template <typename Scalar>
SeparatedFunction<Scalar>::SeparatedFunction(std::shared_ptr<const SpectralData<Scalar>> spec, Scalar exponent,
                                             CylinderPoint reference)
    : spec_(std::move(spec)), exponent_(std::move(exponent)), reference_(reference)
{
}

template <typename Scalar>
Scalar SeparatedFunction<Scalar>::operator()(const CylinderPoint& p) const
{
    using std::exp;
    if (p.node < 0 || p.node >= spec_->size())
        throw ParameterError("cylinder point node out of range");
    const auto phi = spec_->ground_state();
    return exp(exponent_ * (Scalar(p.u) - Scalar(reference_.u))) * phi(p.node) / phi(reference_.node);
}

template <typename Scalar>
Scalar separated_residual(const BaseOperator& base, const SpectralData<Scalar>& spec, const Scalar& alpha)
{
    using std::abs;
    const Vector<Scalar> phi = spec.ground_state();
    const Vector<Scalar> weighted = spec.mass.cwiseProduct(phi);
    const Vector<Scalar> action = base.stiffness.template cast<Scalar>() * phi;
    const Scalar l1 = spec.lambda1();
    const Scalar base_part = (action - l1 * weighted).norm() / (l1 * weighted.norm());
    const Scalar axial_part = abs(alpha * (alpha + spec.drift) - l1) / l1;
    return base_part + axial_part;
}

template <typename Scalar>
ModeSolution<Scalar>::ModeSolution(std::shared_ptr<const SpectralData<Scalar>> spec, Vector<Scalar> plus,
                                   Vector<Scalar> minus, Scalar plus_anchor, Scalar minus_anchor)
    : spec_(std::move(spec)),
      plus_(std::move(plus)),
      minus_(std::move(minus)),
      plus_anchor_(std::move(plus_anchor)),
      minus_anchor_(std::move(minus_anchor))
{
    using std::isfinite;
    if (plus_.size() != spec_->size() || minus_.size() != spec_->size())
        throw ParameterError("mode solution needs one coefficient pair per mode");
    for (Index k = 0; k < spec_->size(); ++k)
        if (!isfinite(plus_(k)) || !isfinite(minus_(k)))
            throw ParameterError("mode solution coefficients must be finite");
    for (Index k = 0; k < spec_->size(); ++k)
        if (plus_(k) != Scalar(0) || minus_(k) != Scalar(0))
            active_.push_back(k);
}

template <typename Scalar>
Scalar ModeSolution<Scalar>::alpha_plus(Index k) const
{
    return exponent_ladder(spec_->eigenvalues(k), spec_->drift).alpha_max;
}

template <typename Scalar>
Scalar ModeSolution<Scalar>::alpha_minus(Index k) const
{
    return exponent_ladder(spec_->eigenvalues(k), spec_->drift).alpha_min;
}

template <typename Scalar>
Scalar ModeSolution<Scalar>::plus_coefficient(Index k) const
{
    using std::exp;
    return plus_(k) * exp(-alpha_plus(k) * plus_anchor_);
}

template <typename Scalar>
Scalar ModeSolution<Scalar>::minus_coefficient(Index k) const
{
    using std::exp;
    return minus_(k) * exp(-alpha_minus(k) * minus_anchor_);
}

template <typename Scalar>
Scalar ModeSolution<Scalar>::operator()(const CylinderPoint& p) const
{
    using std::exp;
    const Scalar u(p.u);
    Scalar sum(0);
    for (Index k : active_) {
        const auto ladder = exponent_ladder(spec_->eigenvalues(k), spec_->drift);
        Scalar mode(0);
        if (plus_(k) != Scalar(0))
            mode += plus_(k) * exp(ladder.alpha_max * (u - plus_anchor_));
        if (minus_(k) != Scalar(0))
            mode += minus_(k) * exp(ladder.alpha_min * (u - minus_anchor_));
        sum += mode * spec_->eigenvectors(p.node, k);
    }
    return sum;
}

template <typename Scalar>
Scalar ModeSolution<Scalar>::magnitude(const CylinderPoint& p) const
{
    using std::abs;
    using std::exp;
    const Scalar u(p.u);
    Scalar sum(0);
    for (Index k : active_) {
        const auto ladder = exponent_ladder(spec_->eigenvalues(k), spec_->drift);
        Scalar mode(0);
        if (plus_(k) != Scalar(0))
            mode += abs(plus_(k)) * exp(ladder.alpha_max * (u - plus_anchor_));
        if (minus_(k) != Scalar(0))
            mode += abs(minus_(k)) * exp(ladder.alpha_min * (u - minus_anchor_));
        sum += mode * abs(spec_->eigenvectors(p.node, k));
    }
    return sum;
}

template <typename Scalar>
ModeSolution<Scalar> truncated_dirichlet_solve(const GreenEvaluator<Scalar>& ev, const Scalar& half_length,
                                               const Vector<Scalar>& g_minus, const Vector<Scalar>& g_plus)
{
    using std::exp;
    const auto& spec = ev.spectrum();
    const Index n = spec.size();
    if (!(half_length > Scalar(0)))
        throw ParameterError("truncated cylinder needs T > 0");
    if (g_minus.size() != n || g_plus.size() != n)
        throw ParameterError("boundary data must have one value per node");

    // Mass projections onto each mode.
    const Vector<Scalar> c_plus = spec.eigenvectors.transpose() * spec.mass.cwiseProduct(g_plus);
    const Vector<Scalar> c_minus = spec.eigenvectors.transpose() * spec.mass.cwiseProduct(g_minus);

    Vector<Scalar> a(n);
    Vector<Scalar> b(n);
    const Scalar two_t = Scalar(2) * half_length;
    for (Index k = 0; k < n; ++k) {
        const auto ladder = exponent_ladder(spec.eigenvalues(k), spec.drift);
        if (ladder.alpha_max == ladder.alpha_min)
            throw SpectralError("singular mode system (α⁺ = α⁻)");
        // [1, e^{2Tα⁻}; e^{−2Tα⁺}, 1] [a; b] = [c⁺; c⁻]
        const Scalar e_minus = exp(two_t * ladder.alpha_min);
        const Scalar e_plus = exp(-two_t * ladder.alpha_max);
        const Scalar det = Scalar(1) - e_minus * e_plus;
        if (!(det > Scalar(0)))
            throw SpectralError("singular mode system on the truncated cylinder");
        a(k) = (c_plus(k) - e_minus * c_minus(k)) / det;
        b(k) = (c_minus(k) - e_plus * c_plus(k)) / det;
    }
    return ModeSolution<Scalar>(ev.spectrum_ptr(), std::move(a), std::move(b), half_length, -half_length);
}

template <typename Scalar>
std::optional<CylinderPoint> positivity_scan(const ModeSolution<Scalar>& sol, double u_min, double u_max,
                                             double u_step)
{
    if (!(u_step > 0.0) || !(u_max >= u_min))
        throw ParameterError("positivity scan needs u_min <= u_max and a positive step");
    const auto steps = static_cast<long>(std::floor((u_max - u_min) / u_step + 1e-9));
    const Index n = sol.spectrum().size();
    for (long s = 0; s <= steps; ++s) {
        const double u = u_min + static_cast<double>(s) * u_step;
        for (Index node = 0; node < n; ++node) {
            const CylinderPoint p{u, node};
            const Scalar value = sol(p);
            if (value < Scalar(-1e-12) * sol.magnitude(p))
                return p;
        }
    }
    return std::nullopt;
}

ExponentFit fit_log_linear(const std::vector<std::pair<double, double>>& log_samples)
{
    const std::size_t m = log_samples.size();
    if (m < 3)
        throw ParameterError("exponent fit needs at least three samples");
    for (std::size_t i = 1; i < m; ++i)
        if (!(log_samples[i].first > log_samples[i - 1].first))
            throw ParameterError("exponent fit needs strictly increasing u");
    double su = 0.0, sl = 0.0;
    for (const auto& [u, l] : log_samples) {
        if (!std::isfinite(l))
            throw ParameterError("exponent fit needs finite log values");
        su += u;
        sl += l;
    }
    const double mu = su / static_cast<double>(m);
    const double ml = sl / static_cast<double>(m);
    double suu = 0.0, sul = 0.0;
    for (const auto& [u, l] : log_samples) {
        suu += (u - mu) * (u - mu);
        sul += (u - mu) * (l - ml);
    }
    ExponentFit fit;
    fit.slope = sul / suu;
    fit.intercept = ml - fit.slope * mu;
    for (const auto& [u, l] : log_samples)
        fit.max_residual = std::max(fit.max_residual, std::abs(l - (fit.intercept + fit.slope * u)));
    return fit;
}

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& samples)
{
    std::vector<std::pair<double, double>> logs;
    logs.reserve(samples.size());
    for (const auto& [u, v] : samples) {
        if (!(v > 0.0))
            throw ParameterError("exponent fit needs positive values");
        logs.emplace_back(u, std::log(v));
    }
    return fit_log_linear(logs);
}

#define CYLMARTIN_INSTANTIATE(S)                                                                                  \
    template class GreenEvaluator<S>;                                                                             \
    template class MartinKernel<S>;                                                                               \
    template class SeparatedFunction<S>;                                                                          \
    template class ModeSolution<S>;                                                                               \
    template S separated_residual<S>(const BaseOperator&, const SpectralData<S>&, const S&);                      \
    template ModeSolution<S> truncated_dirichlet_solve<S>(const GreenEvaluator<S>&, const S&, const Vector<S>&,   \
                                                          const Vector<S>&);                                      \
    template std::optional<CylinderPoint> positivity_scan<S>(const ModeSolution<S>&, double, double, double);

CYLMARTIN_INSTANTIATE(double)
CYLMARTIN_INSTANTIATE(Extended)

#undef CYLMARTIN_INSTANTIATE

}  // namespace cylmartin
