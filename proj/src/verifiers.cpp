#include "cylmartin/verifiers.hpp"

#include "cylmartin/errors.hpp"

#include <boost/math/special_functions/expm1.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace cylmartin {

namespace {

// Signed relative excess (a − b)/max(a, b) from d = log a − log b.
double relative_excess(double d)
{
    if (std::isnan(d))
        return std::numeric_limits<double>::infinity();
    return d > 0.0 ? -std::expm1(-d) : std::expm1(d);
}

Index pick_node(double x, Index n)
{
    return std::min<Index>(n - 1, static_cast<Index>(x * static_cast<double>(n)));
}

void require_samples(std::size_t count, const char* what)
{
    if (count == 0)
        throw ParameterError(std::string(what) + ": empty sample set");
}

}  // namespace

QuasiRandom::QuasiRandom(int dimension, std::uint64_t seed)
{
    if (dimension < 1)
        throw ParameterError("quasi-random dimension must be positive");
    // Generalized golden ratio: the positive root of x^{d+1} = x + 1.
    double phi = 2.0;
    for (int it = 0; it < 64; ++it)
        phi = std::pow(1.0 + phi, 1.0 / (dimension + 1));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < dimension; ++i) {
        alpha_.push_back(std::fmod(std::pow(1.0 / phi, i + 1), 1.0));
        state_.push_back(unit(rng));
    }
}

std::vector<double> QuasiRandom::next()
{
    for (std::size_t i = 0; i < state_.size(); ++i) {
        state_[i] += alpha_[i];
        state_[i] -= std::floor(state_[i]);
    }
    return state_;
}

std::vector<MonotonicitySample> sample_monotonicity(Index nodes, std::size_t count, std::uint64_t seed)
{
    QuasiRandom q(6, seed);
    std::vector<MonotonicitySample> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        const auto x = q.next();
        const double u = -5.0 + 10.0 * x[0];
        const double rho = 4.0 * x[1];
        double offset = 6.0 * x[2];
        if (s % 2 == 1)
            offset = -offset;
        if (s % 97 == 0)
            offset = 0.0;  // exactly on the side condition
        out.push_back({u, u + rho / 2.0 + offset, rho, pick_node(x[3], nodes), pick_node(x[4], nodes)});
    }
    return out;
}

std::vector<SymmetrySample> sample_symmetry(Index nodes, std::size_t count, std::uint64_t seed)
{
    QuasiRandom q(6, seed);
    std::vector<SymmetrySample> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        const auto x = q.next();
        out.push_back({-5.0 + 10.0 * x[0], -5.0 + 10.0 * x[1], -5.0 + 10.0 * x[2], -5.0 + 10.0 * x[3],
                       pick_node(x[4], nodes), pick_node(x[5], nodes)});
    }
    return out;
}

std::vector<ReflectionSample> sample_reflection(const std::vector<Index>& sigma, std::size_t count,
                                                std::uint64_t seed)
{
    std::vector<Index> left, right;
    for (Index i = 0; i < static_cast<Index>(sigma.size()); ++i) {
        if (i <= sigma[i])
            left.push_back(i);
        if (i >= sigma[i])
            right.push_back(i);
    }
    if (left.empty() || right.empty())
        throw ParameterError("reflection sampling needs a nonempty symmetry");
    QuasiRandom q(4, seed);
    std::vector<ReflectionSample> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        const auto x = q.next();
        const Index z = right[pick_node(x[2], static_cast<Index>(right.size()))];
        const Index y = left[pick_node(x[3], static_cast<Index>(left.size()))];
        out.push_back({-5.0 + 10.0 * x[0], -5.0 + 10.0 * x[1], z, y});
    }
    return out;
}

std::vector<HarnackTriple> harnack_grid(int top)
{
    std::vector<HarnackTriple> out;
    for (int u = 0; u <= top; ++u)
        for (int v = u + 1; v <= top; ++v)
            for (int w = v + 1; w <= top; ++w)
                out.push_back({double(u), double(v), double(w)});
    return out;
}

template <typename Scalar>
VerificationReport check_green_monotonicity(const GreenEvaluator<Scalar>& ev,
                                            const std::vector<MonotonicitySample>& samples, double tolerance)
{
    require_samples(samples.size(), "monotonicity");
    VerificationReport rep;
    rep.suite = "monotonicity";
    rep.tolerance = tolerance;
    rep.sample_count = samples.size();
    rep.max_violation = -std::numeric_limits<double>::infinity();
    rep.columns = {"u", "i", "v", "j", "rho", "violation"};
    const Scalar b = ev.spectrum().drift;
    for (const auto& s : samples) {
        if (!(s.rho >= 0.0))
            throw ParameterError("monotonicity sample needs ρ >= 0");
        const Scalar lhs = ev.log_green({s.u, s.i}, {s.v, s.j});
        const Scalar rhs = b * Scalar(s.rho) / Scalar(2) + ev.log_green({s.u + s.rho, s.i}, {s.v, s.j});
        const double d = to_double(lhs - rhs);
        const double mid = s.u + s.rho / 2.0;
        double violation = -std::numeric_limits<double>::infinity();
        if (s.v >= mid)
            violation = std::max(violation, relative_excess(d));
        if (s.v <= mid)
            violation = std::max(violation, relative_excess(-d));
        rep.max_violation = std::max(rep.max_violation, violation);
        rep.rows.push_back({s.u, double(s.i), s.v, double(s.j), s.rho, violation});
    }
    return rep;
}

template <typename Scalar>
VerificationReport check_symmetry_identity(const GreenEvaluator<Scalar>& ev,
                                           const std::vector<SymmetrySample>& samples, double tolerance)
{
    require_samples(samples.size(), "symmetry");
    VerificationReport rep;
    rep.suite = "symmetry";
    rep.tolerance = tolerance;
    rep.sample_count = samples.size();
    rep.max_violation = -std::numeric_limits<double>::infinity();
    rep.columns = {"u", "i", "v", "j", "v0", "v1", "violation"};
    const Scalar b = ev.spectrum().drift;
    for (const auto& s : samples) {
        const Scalar lhs = ev.log_green({s.v0 - s.u, s.i}, {s.v0 - s.v, s.j});
        const Scalar rhs = b * (Scalar(s.u) - Scalar(s.v)) + ev.log_green({s.v1 + s.u, s.i}, {s.v1 + s.v, s.j});
        const double violation = std::abs(relative_excess(to_double(lhs - rhs)));
        rep.max_violation = std::max(rep.max_violation, violation);
        rep.rows.push_back({s.u, double(s.i), s.v, double(s.j), s.v0, s.v1, violation});
    }
    return rep;
}

template <typename Scalar>
VerificationReport check_normalization(const GreenEvaluator<Scalar>& ev, const std::vector<CylinderPoint>& poles,
                                       double tolerance)
{
    require_samples(poles.size(), "normalization");
    VerificationReport rep;
    rep.suite = "normalization";
    rep.tolerance = tolerance;
    rep.sample_count = poles.size();
    rep.max_violation = -std::numeric_limits<double>::infinity();
    rep.columns = {"v", "node_pole", "violation"};
    for (const auto& pole : poles) {
        const MartinKernel<Scalar> k(ev, pole);
        const double violation = std::abs(to_double(k(ev.reference()) - Scalar(1)));
        rep.max_violation = std::max(rep.max_violation, violation);
        rep.rows.push_back({pole.u, double(pole.node), violation});
    }
    return rep;
}

template <typename Scalar>
VerificationReport check_reference_shift(const GreenEvaluator<Scalar>& ev, const CylinderPoint& pole,
                                         const CylinderPoint& other_reference,
                                         const std::vector<CylinderPoint>& grid, double tolerance)
{
    require_samples(grid.size(), "reference-shift");
    VerificationReport rep;
    rep.suite = "reference-shift";
    rep.tolerance = tolerance;
    rep.sample_count = grid.size();
    rep.columns = {"u", "node", "log_ratio"};
    const MartinKernel<Scalar> k(ev, pole);
    const MartinKernel<Scalar> k2(ev.with_reference(other_reference), pole);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& p : grid) {
        const double r = to_double(k2.log_value(p) - k.log_value(p));
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        rep.rows.push_back({p.u, double(p.node), r});
    }
    rep.max_violation = std::expm1(hi - lo);
    rep.empirical_constant = std::exp(0.5 * (hi + lo));
    return rep;
}

template <typename Scalar>
VerificationReport check_boundary_harnack(const GreenEvaluator<Scalar>& ev, const std::vector<HarnackTriple>& triples)
{
    require_samples(triples.size(), "harnack");
    VerificationReport rep;
    rep.suite = "harnack";
    rep.sample_count = triples.size();
    rep.columns = {"u", "v", "w", "log_ratio", "log_ratio_transposed"};
    const Index x0 = ev.reference().node;
    double worst = 0.0;
    for (const auto& t : triples) {
        if (!(t.v - t.u >= 1.0) || !(t.w - t.v >= 1.0))
            throw ParameterError("harnack triple violates the gap condition");
        const CylinderPoint pu{t.u, x0}, pv{t.v, x0}, pw{t.w, x0};
        const double r = to_double(ev.log_green(pu, pw) - ev.log_green(pu, pv) - ev.log_green(pv, pw));
        const double rt = to_double(ev.log_green(pw, pu) - ev.log_green(pw, pv) - ev.log_green(pv, pu));
        worst = std::max({worst, std::abs(r), std::abs(rt)});
        rep.rows.push_back({t.u, t.v, t.w, r, rt});
    }
    rep.empirical_constant = std::exp(worst);
    rep.max_violation = std::isfinite(worst) ? 0.0 : std::numeric_limits<double>::max();
    return rep;
}

template <typename Scalar>
VerificationReport check_iu_ratio(const SpectralData<Scalar>& spec, Index probe, const std::vector<double>& times,
                                  double window_lo, double window_hi, double rate_tolerance)
{
    require_samples(times.size(), "iu-ratio");
    for (std::size_t i = 0; i < times.size(); ++i)
        if (!(times[i] > 0.0) || (i > 0 && !(times[i] > times[i - 1])))
            throw ParameterError("iu-ratio needs a positive increasing time grid");
    const Index n = spec.size();
    if (probe < 0 || probe >= n)
        throw ParameterError("iu-ratio probe node out of range");

    VerificationReport rep;
    rep.suite = "iu-ratio";
    rep.tolerance = rate_tolerance;
    rep.sample_count = times.size();
    rep.columns = {"t", "C_minus_1"};
    using std::exp;
    const auto phi = spec.ground_state();
    std::vector<std::pair<double, double>> window;
    for (double t : times) {
        // e^{λ₁t}π_t(x₁, ·) for all y at once.
        Vector<Scalar> weights(n);
        for (Index k = 0; k < n; ++k)
            weights(k) = exp(-(spec.eigenvalues(k) - spec.eigenvalues(0)) * Scalar(t)) * spec.eigenvectors(probe, k);
        const Vector<Scalar> row = spec.eigenvectors * weights;
        Scalar worst(0);
        for (Index y = 0; y < n; ++y) {
            const Scalar r = row(y) / (phi(probe) * phi(y));
            const Scalar excess = r >= Scalar(1) ? r - Scalar(1) : Scalar(1) / r - Scalar(1);
            if (excess > worst)
                worst = excess;
        }
        const double c1 = to_double(worst);
        rep.rows.push_back({t, c1});
        // Differences below ~1e3 ulp are round-off, not signal.
        if (t >= window_lo && t <= window_hi && c1 > 1e3 * std::numeric_limits<double>::epsilon())
            window.emplace_back(t, std::log(c1));
    }

    using std::abs;
    Index governing = -1;
    for (Index k = 1; k < n && governing < 0; ++k) {
        Scalar scale(0);
        for (Index i = 0; i < n; ++i)
            scale = std::max<Scalar>(scale, abs(spec.eigenvectors(i, k)));
        if (abs(spec.eigenvectors(probe, k)) > Scalar(1e-6) * scale)
            governing = k;
    }
    if (governing < 0) {
        rep.message = "single relevant mode: C(t) = 1 identically";
        rep.max_violation = 0.0;
        return rep;
    }
    if (window.size() < 3) {
        rep.status = "error";
        rep.message = "fewer than three resolvable points in the fit window";
        rep.max_violation = std::numeric_limits<double>::max();
        return rep;
    }
    const ExponentFit fit = fit_log_linear(window);
    FittedRate rate;
    rate.value = fit.slope;
    rate.expected = -to_double(spec.eigenvalues(governing) - spec.eigenvalues(0));
    rate.relative_deviation = std::abs(rate.value - rate.expected) / std::abs(rate.expected);
    rate.window_lo = window.front().first;
    rate.window_hi = window.back().first;
    rep.fitted_rate = rate;
    rep.max_violation = rate.relative_deviation;
    if (governing != 1)
        rep.message = "probe is a node of φ₂; expected rate taken from mode " + std::to_string(governing + 1);
    return rep;
}

template <typename Scalar>
VerificationReport check_small_time_ratio(const SpectralData<Scalar>& spec, double lambda, double t0, Index x,
                                          const std::vector<Index>& ys)
{
    require_samples(ys.size(), "small-time-ratio");
    const Index n = spec.size();
    if (!(Scalar(lambda) + spec.eigenvalues(0) > Scalar(0)))
        throw ParameterError("small-time ratio needs λ + λ₁ > 0");
    if (!(t0 > 0.0))
        throw ParameterError("small-time ratio needs t₀ > 0");
    if (x < 0 || x >= n)
        throw ParameterError("small-time ratio node out of range");

    VerificationReport rep;
    rep.suite = "small-time-ratio";
    rep.sample_count = ys.size();
    rep.columns = {"index", "y", "ratio"};
    std::vector<Scalar> weight_num(n), weight_den(n);
    for (Index k = 0; k < n; ++k) {
        const Scalar rate = spec.eigenvalues(k) + Scalar(lambda);
        weight_den[k] = Scalar(1) / rate;
        weight_num[k] = -boost::math::expm1(Scalar(-rate * Scalar(t0))) / rate;
    }
    std::vector<Scalar> ratios;
    for (std::size_t j = 0; j < ys.size(); ++j) {
        const Index y = ys[j];
        if (y < 0 || y >= n)
            throw ParameterError("small-time ratio node out of range");
        Scalar num(0), den(0);
        for (Index k = 0; k < n; ++k) {
            const Scalar pp = spec.eigenvectors(x, k) * spec.eigenvectors(y, k);
            num += pp * weight_num[k];
            den += pp * weight_den[k];
        }
        ratios.push_back(num / den);
        rep.rows.push_back({double(j), double(y), to_double(ratios.back())});
    }
    rep.max_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < ratios.size(); ++j)
        rep.max_violation = std::max(rep.max_violation, to_double((ratios[j] - ratios[j - 1]) / ratios[j - 1]));
    if (ratios.size() == 1)
        rep.max_violation = 0.0;
    rep.empirical_constant = to_double(ratios.back());
    return rep;
}

template <typename Scalar>
VerificationReport check_ratio_limit(const SpectralData<Scalar>& spec, double drift, double rho, double rho_prime,
                                     Index x, const std::vector<Index>& ys, double tolerance)
{
    using std::exp;
    using std::sqrt;
    require_samples(ys.size(), "ratio-limit");
    const Index n = spec.size();
    if (x < 0 || x >= n)
        throw ParameterError("ratio limit node out of range");

    VerificationReport rep;
    rep.suite = "ratio-limit";
    rep.tolerance = tolerance;
    rep.sample_count = ys.size();
    rep.columns = {"index", "y", "ratio", "deviation"};
    const Scalar b(drift);
    std::vector<Scalar> root(n), w_rho(n), w_rho_prime(n);
    for (Index k = 0; k < n; ++k) {
        root[k] = sqrt(spec.eigenvalues(k) + b * b / Scalar(4));
        w_rho[k] = exp(-Scalar(std::abs(rho)) * root[k]) / root[k];
        w_rho_prime[k] = exp(-Scalar(std::abs(rho_prime)) * root[k]) / root[k];
    }
    const Scalar prefactor = exp(-b * (Scalar(rho) - Scalar(rho_prime)) / Scalar(2));
    for (std::size_t j = 0; j < ys.size(); ++j) {
        const Index y = ys[j];
        if (y < 0 || y >= n)
            throw ParameterError("ratio limit node out of range");
        Scalar num(0), den(0);
        for (Index k = 0; k < n; ++k) {
            const Scalar pp = spec.eigenvectors(x, k) * spec.eigenvectors(y, k);
            num += pp * w_rho[k];
            den += pp * w_rho_prime[k];
        }
        const Scalar ratio = prefactor * num / den;
        // The target e^{−b(ρ−ρ′)/2} is the prefactor itself.
        const double dev = std::abs(to_double(num / den - Scalar(1)));
        rep.rows.push_back({double(j), double(y), to_double(ratio), dev});
    }
    rep.max_violation = rep.rows.back()[3];
    rep.empirical_constant = rep.rows.back()[2];
    return rep;
}

template <typename Scalar>
VerificationReport check_reflection(const GreenEvaluator<Scalar>& ev, const std::vector<ReflectionSample>& samples,
                                    double rho, int u_points, Index node_stride, double tolerance)
{
    VerificationReport rep;
    rep.suite = "reflection";
    rep.tolerance = tolerance;
    const auto& sym = ev.base().symmetry;
    if (!sym) {
        rep.status = "skipped";
        rep.message = "base declares no symmetry";
        return rep;
    }
    require_samples(samples.size(), "reflection");
    if (node_stride < 1 || u_points < 1 || !(rho > 0.0))
        throw ParameterError("reflection needs ρ > 0, u_points >= 1, node_stride >= 1");
    const auto& sigma = *sym;
    rep.sample_count = samples.size();
    rep.max_violation = -std::numeric_limits<double>::infinity();
    rep.columns = {"w", "z", "v", "y", "violation"};
    for (const auto& s : samples) {
        if (!(s.y <= sigma[s.y]) || !(s.z >= sigma[s.z]))
            throw ParameterError("reflection sample: y and z must lie in opposite halves");
        const Scalar lhs = ev.log_green({s.w, s.z}, {s.v, s.y});
        const Scalar rhs = ev.log_green({s.w, sigma[s.z]}, {s.v, s.y});
        const double violation = relative_excess(to_double(lhs - rhs));
        rep.max_violation = std::max(rep.max_violation, violation);
        rep.rows.push_back({s.w, double(s.z), s.v, double(s.y), violation});
    }

    const Index n = ev.spectrum().size();
    const Index x0 = ev.reference().node;
    double worst = -std::numeric_limits<double>::infinity();
    for (Index y = 0; y < n; y += node_stride) {
        if (!(y <= sigma[y]))
            continue;
        for (int k = 0; k < u_points; ++k) {
            const double u = -2.0 * rho - 0.5 * k;
            const Scalar base_log = ev.log_green({u, x0}, {0.0, y});
            for (Index x = 0; x < n; x += node_stride)
                worst = std::max(worst, to_double(ev.log_green({u, x}, {0.0, y}) - base_log));
        }
    }
    rep.empirical_constant = std::exp(worst);
    return rep;
}

template <typename Scalar>
VerificationReport check_convergence_to_f_plus(const GreenEvaluator<Scalar>& ev, const std::vector<double>& poles,
                                               Index pole_node, const std::vector<CylinderPoint>& probe,
                                               double rate_tolerance)
{
    using std::abs;
    using std::exp;
    if (poles.empty())
        throw ParameterError("converge: pole grid is empty");
    require_samples(probe.size(), "converge");
    const auto& spec = ev.spectrum();
    const Index n = spec.size();
    if (pole_node < 0 || pole_node >= n)
        throw ParameterError("converge: pole node out of range");

    VerificationReport rep;
    rep.suite = "converge";
    rep.tolerance = rate_tolerance;
    rep.columns = {"v", "sup_deviation"};
    const auto fplus = f_plus(ev);
    const CylinderPoint ref = ev.reference();
    std::vector<std::pair<double, double>> series;
    for (double v : poles) {
        if (v == ref.u && pole_node == ref.node)
            continue;  // the kernel is undefined at its own normalization point
        const MartinKernel<Scalar> k(ev, {v, pole_node});
        Scalar worst(0);
        for (const auto& p : probe) {
            const Scalar dev = abs(k(p) - fplus(p));
            if (dev > worst)
                worst = dev;
        }
        series.emplace_back(v, to_double(worst));
        rep.rows.push_back({v, to_double(worst)});
    }
    rep.sample_count = series.size();
    if (series.empty())
        throw ParameterError("converge: no admissible pole");

    bool decreasing = true;
    for (std::size_t i = 1; i < series.size(); ++i)
        if (!(series[i].second < series[i - 1].second))
            decreasing = false;

    if (n < 2) {
        rep.message = "single mode: K equals F₊ for poles beyond the probe grid";
        rep.max_violation = 0.0;
        return rep;
    }

    // Share of mode 3 relative to mode 2 at the pole node, as a function of v.
    const Scalar phi2 = abs(spec.eigenvectors(pole_node, 1));
    std::vector<std::pair<double, double>> window;
    for (const auto& [v, dev] : series) {
        bool clean = dev > 0.0;
        if (n >= 3 && phi2 > Scalar(0)) {
            const Scalar share = abs(spec.eigenvectors(pole_node, 2)) / phi2 *
                                 exp(-(spec.sqrt_mu(2) - spec.sqrt_mu(1)) * Scalar(v));
            clean = clean && share < Scalar(0.01);
        }
        if (clean)
            window.emplace_back(v, std::log(dev));
    }
    if (window.size() < 3) {
        window.clear();
        for (std::size_t i = series.size() >= 3 ? series.size() - 3 : 0; i < series.size(); ++i)
            if (series[i].second > 0.0)
                window.emplace_back(series[i].first, std::log(series[i].second));
        rep.message = "contamination-free window too short; fitted over the last poles";
    }
    if (window.size() < 3) {
        rep.status = "error";
        rep.message = "not enough poles to fit a rate";
        rep.max_violation = std::numeric_limits<double>::max();
        return rep;
    }
    const ExponentFit fit = fit_log_linear(window);
    FittedRate rate;
    rate.value = -fit.slope;
    rate.expected = to_double(spec.sqrt_mu(1) - spec.sqrt_mu(0));
    rate.relative_deviation = std::abs(rate.value - rate.expected) / rate.expected;
    rate.window_lo = window.front().first;
    rate.window_hi = window.back().first;
    rep.fitted_rate = rate;
    rep.max_violation = rate.relative_deviation;
    if (!decreasing) {
        rep.max_violation = std::max(rep.max_violation, rate_tolerance + 1.0);
        rep.message = "sup-deviation is not strictly decreasing in v";
    }
    return rep;
}

template <typename Scalar>
std::vector<ExponentFit> martin_exponents(const GreenEvaluator<Scalar>& ev, const std::vector<Index>& ys,
                                          Index probe, const std::vector<double>& us)
{
    std::vector<ExponentFit> fits;
    for (Index y : ys) {
        const MartinKernel<Scalar> k(ev, {0.0, y});
        std::vector<std::pair<double, double>> logs;
        for (double u : us)
            logs.emplace_back(u, to_double(k.log_value({u, probe})));
        fits.push_back(fit_log_linear(logs));
    }
    return fits;
}

std::vector<std::string> suite_names()
{
    return {"monotonicity", "symmetry", "normalization", "reference-shift", "harnack", "iu-ratio", "reflection"};
}

namespace {

template <typename Scalar>
VerificationReport run_one(const GreenEvaluator<Scalar>& ev, const std::string& name, const SuiteConfig& cfg)
{
    const Index n = ev.spectrum().size();
    const CylinderPoint ref = ev.reference();
    if (name == "monotonicity")
        return check_green_monotonicity(ev, sample_monotonicity(n, cfg.samples, cfg.seed), cfg.exact_tolerance);
    if (name == "symmetry")
        return check_symmetry_identity(ev, sample_symmetry(n, cfg.samples, cfg.seed), cfg.exact_tolerance);
    if (name == "normalization") {
        QuasiRandom q(2, cfg.seed);
        std::vector<CylinderPoint> poles;
        for (int s = 0; s < 64; ++s) {
            const auto x = q.next();
            const CylinderPoint p{-6.0 + 12.0 * x[0], pick_node(x[1], n)};
            if (p.u != ref.u || p.node != ref.node)
                poles.push_back(p);
        }
        return check_normalization(ev, poles, cfg.exact_tolerance);
    }
    if (name == "reference-shift") {
        QuasiRandom q(2, cfg.seed);
        std::vector<CylinderPoint> grid;
        for (int s = 0; s < 256; ++s) {
            const auto x = q.next();
            grid.push_back({-4.0 + 8.0 * x[0], pick_node(x[1], n)});
        }
        const CylinderPoint pole{ref.u + 5.0, ref.node};
        const CylinderPoint other{ref.u + 0.7, n / 3};
        return check_reference_shift(ev, pole, other, grid, cfg.exact_tolerance);
    }
    if (name == "harnack") {
        const auto coarse = check_boundary_harnack(ev, harnack_grid(cfg.harnack_top));
        auto fine = check_boundary_harnack(ev, harnack_grid(2 * cfg.harnack_top));
        const double c1 = *coarse.empirical_constant;
        const double c2 = *fine.empirical_constant;
        fine.max_violation = std::abs(c2 - c1) / c1;
        fine.tolerance = cfg.harnack_stability;
        std::ostringstream msg;
        msg << "constant " << c1 << " on {0.." << cfg.harnack_top << "}, " << c2 << " on {0.."
            << 2 * cfg.harnack_top << "}";
        fine.message = msg.str();
        return fine;
    }
    if (name == "iu-ratio") {
        std::vector<double> times;
        for (int s = 1; s <= 200; ++s)
            times.push_back(0.25 * s);
        const Index probe = cfg.iu_probe ? *cfg.iu_probe : n / 4;
        return check_iu_ratio(ev.spectrum(), probe, times, cfg.iu_window_lo, cfg.iu_window_hi, cfg.rate_tolerance);
    }
    if (name == "reflection") {
        const auto& sym = ev.base().symmetry;
        std::vector<ReflectionSample> samples;
        if (sym)
            samples = sample_reflection(*sym, cfg.samples, cfg.seed);
        const Index stride = std::max<Index>(1, n / 32);
        return check_reflection(ev, samples, 0.5, 9, stride, cfg.exact_tolerance);
    }
    throw UnknownSuiteError("unknown suite '" + name + "'");
}

}  // namespace

template <typename Scalar>
std::vector<VerificationReport> run_suite(const GreenEvaluator<Scalar>& ev, const std::vector<std::string>& selection,
                                          const SuiteConfig& config)
{
    const auto known = suite_names();
    std::vector<std::string> names;
    for (const auto& s : selection) {
        if (s == "all")
            names.insert(names.end(), known.begin(), known.end());
        else if (std::find(known.begin(), known.end(), s) != known.end())
            names.push_back(s);
        else
            throw UnknownSuiteError("unknown suite '" + s + "'");
    }
    std::vector<VerificationReport> out;
    for (const auto& name : names) {
        VerificationReport rep;
        try {
            rep = run_one(ev, name, config);
        } catch (const UnknownSuiteError&) {
            throw;
        } catch (const std::exception& e) {
            rep = VerificationReport{};
            rep.suite = name;
            rep.status = "error";
            rep.message = e.what();
            rep.max_violation = std::numeric_limits<double>::max();
        }
        rep.seed = config.seed;
        out.push_back(std::move(rep));
    }
    return out;
}

#define CYLMARTIN_INSTANTIATE(S)                                                                                  \
    template VerificationReport check_green_monotonicity<S>(const GreenEvaluator<S>&,                             \
                                                            const std::vector<MonotonicitySample>&, double);      \
    template VerificationReport check_symmetry_identity<S>(const GreenEvaluator<S>&,                              \
                                                           const std::vector<SymmetrySample>&, double);           \
    template VerificationReport check_normalization<S>(const GreenEvaluator<S>&, const std::vector<CylinderPoint>&, \
                                                       double);                                                   \
    template VerificationReport check_reference_shift<S>(const GreenEvaluator<S>&, const CylinderPoint&,          \
                                                         const CylinderPoint&, const std::vector<CylinderPoint>&, \
                                                         double);                                                 \
    template VerificationReport check_boundary_harnack<S>(const GreenEvaluator<S>&,                               \
                                                          const std::vector<HarnackTriple>&);                     \
    template VerificationReport check_iu_ratio<S>(const SpectralData<S>&, Index, const std::vector<double>&,      \
                                                  double, double, double);                                        \
    template VerificationReport check_small_time_ratio<S>(const SpectralData<S>&, double, double, Index,          \
                                                          const std::vector<Index>&);                             \
    template VerificationReport check_ratio_limit<S>(const SpectralData<S>&, double, double, double, Index,       \
                                                     const std::vector<Index>&, double);                          \
    template VerificationReport check_reflection<S>(const GreenEvaluator<S>&, const std::vector<ReflectionSample>&, \
                                                    double, int, Index, double);                                  \
    template VerificationReport check_convergence_to_f_plus<S>(const GreenEvaluator<S>&, const std::vector<double>&, \
                                                               Index, const std::vector<CylinderPoint>&, double); \
    template std::vector<ExponentFit> martin_exponents<S>(const GreenEvaluator<S>&, const std::vector<Index>&,    \
                                                          Index, const std::vector<double>&);                     \
    template std::vector<VerificationReport> run_suite<S>(const GreenEvaluator<S>&, const std::vector<std::string>&, \
                                                          const SuiteConfig&);

CYLMARTIN_INSTANTIATE(double)
CYLMARTIN_INSTANTIATE(Extended)

#undef CYLMARTIN_INSTANTIATE

}  // namespace cylmartin
