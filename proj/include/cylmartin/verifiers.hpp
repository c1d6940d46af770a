#pragma once

// Sweeps that turn the Green-function inequalities and limit statements into
// numbers: maximal normalized violations, empirical constants, fitted rates.
//
// Every check is a pure function of its inputs. max_violation is signed: a
// report passes iff it was skipped, or its status is "ok" and
// max_violation <= tolerance.

#include "cylmartin/cylinder.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace cylmartin {

struct FittedRate {
    double value = 0.0;
    double expected = 0.0;
    double relative_deviation = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
};

struct VerificationReport {
    std::string suite;
    std::string status = "ok";  // "ok", "skipped" or "error"
    std::string message;
    std::size_t sample_count = 0;
    double max_violation = 0.0;
    double tolerance = 0.0;
    std::optional<double> empirical_constant;
    std::optional<FittedRate> fitted_rate;
    std::uint64_t seed = 0;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    bool passed() const
    {
        return status == "skipped" || (status == "ok" && max_violation <= tolerance);
    }
};

// Kronecker (additive recurrence) low-discrepancy points in [0,1)^d with a
// seed-dependent shift.
class QuasiRandom {
public:
    QuasiRandom(int dimension, std::uint64_t seed);
    std::vector<double> next();

private:
    std::vector<double> alpha_;
    std::vector<double> state_;
};

struct MonotonicitySample {
    double u, v, rho;
    Index i, j;
};

struct SymmetrySample {
    double u, v, v0, v1;
    Index i, j;
};

struct ReflectionSample {
    double w, v;
    Index z, y;
};

struct HarnackTriple {
    double u, v, w;
};

// Samples u ∈ [−5,5], ρ ∈ (0,4], |v − (u+ρ/2)| ≤ 6, alternating both branches.
std::vector<MonotonicitySample> sample_monotonicity(Index nodes, std::size_t count, std::uint64_t seed);
std::vector<SymmetrySample> sample_symmetry(Index nodes, std::size_t count, std::uint64_t seed);
// y drawn from {i : i <= σ(i)}, z from {i : i >= σ(i)}; w, v ∈ [−5,5].
std::vector<ReflectionSample> sample_reflection(const std::vector<Index>& sigma, std::size_t count,
                                                std::uint64_t seed);
// All integer triples u < v < w in {0, …, top} with gaps >= 1.
std::vector<HarnackTriple> harnack_grid(int top);

template <typename Scalar>
VerificationReport check_green_monotonicity(const GreenEvaluator<Scalar>& ev,
                                            const std::vector<MonotonicitySample>& samples,
                                            double tolerance = 1e-12);

template <typename Scalar>
VerificationReport check_symmetry_identity(const GreenEvaluator<Scalar>& ev,
                                           const std::vector<SymmetrySample>& samples, double tolerance = 1e-12);

// |K_pole(reference) − 1| over the given poles.
template <typename Scalar>
VerificationReport check_normalization(const GreenEvaluator<Scalar>& ev, const std::vector<CylinderPoint>& poles,
                                       double tolerance = 1e-12);

// K computed with reference i₀' divided by K with i₀ must be constant over the grid.
template <typename Scalar>
VerificationReport check_reference_shift(const GreenEvaluator<Scalar>& ev, const CylinderPoint& pole,
                                         const CylinderPoint& other_reference,
                                         const std::vector<CylinderPoint>& grid, double tolerance = 1e-12);

// Smallest C with C⁻¹ G(u;v)G(v;w) <= G(u;w) <= C G(u;v)G(v;w) at the
// reference node, for G and its transpose. max_violation is 0 when C is finite.
template <typename Scalar>
VerificationReport check_boundary_harnack(const GreenEvaluator<Scalar>& ev, const std::vector<HarnackTriple>& triples);

// C(t) = max_y max(r, 1/r), r = π_t(x₁,y)/(e^{−λ₁t}φ₀(x₁)φ₀(y)). The rate is
// the slope of log(C(t) − 1) over the window, compared with −(λ_k − λ₁) for
// the first mode k >= 2 not vanishing at x₁. max_violation is the relative
// rate deviation.
template <typename Scalar>
VerificationReport check_iu_ratio(const SpectralData<Scalar>& spec, Index probe, const std::vector<double>& times,
                                  double window_lo, double window_hi, double rate_tolerance = 0.10);

// ∫₀^{t₀} e^{−λs}π_s(x,y)ds / ∫₀^∞ e^{−λs}π_s(x,y)ds per y. max_violation is
// the largest relative increase between consecutive y (<= 0: nonincreasing).
template <typename Scalar>
VerificationReport check_small_time_ratio(const SpectralData<Scalar>& spec, double lambda, double t0, Index x,
                                          const std::vector<Index>& ys);

// Ratio of ∫ t^{−1/2} e^{−(ρ+bt)²/4t} π_t(x,y) dt at ρ and ρ′ per y, compared
// with e^{−b(ρ−ρ′)/2}. max_violation is the relative deviation at the last y.
template <typename Scalar>
VerificationReport check_ratio_limit(const SpectralData<Scalar>& spec, double drift, double rho, double rho_prime,
                                     Index x, const std::vector<Index>& ys, double tolerance = 0.10);

// G_{(v,y)}(w,z) <= G_{(v,y)}(w,σ(z)) for y, σ(z) on the same side. The
// empirical constant is max G_{(v,y)}(u,x)/G_{(v,y)}(u,x₀) over y in the half,
// every node x, and u = v − 2ρ − k/2 for k < u_points; y and x run over every
// `node_stride`-th node. x₀ is the evaluator's reference node.
template <typename Scalar>
VerificationReport check_reflection(const GreenEvaluator<Scalar>& ev, const std::vector<ReflectionSample>& samples,
                                    double rho = 0.5, int u_points = 9, Index node_stride = 1,
                                    double tolerance = 1e-12);

// sup over the probe grid of |K_{(v,y)} − F₊| for each pole axial position v;
// the decay rate is fitted where the third mode's predicted share is < 1%
// and compared with √μ₂ − √μ₁.
template <typename Scalar>
VerificationReport check_convergence_to_f_plus(const GreenEvaluator<Scalar>& ev, const std::vector<double>& poles,
                                               Index pole_node, const std::vector<CylinderPoint>& probe,
                                               double rate_tolerance = 0.10);

// α̂ for K_{(0,y)}(·, probe) over the axial samples, for each y.
template <typename Scalar>
std::vector<ExponentFit> martin_exponents(const GreenEvaluator<Scalar>& ev, const std::vector<Index>& ys,
                                          Index probe, const std::vector<double>& us);

struct SuiteConfig {
    std::uint64_t seed = 20240607;
    std::size_t samples = 10000;
    double exact_tolerance = 1e-12;
    double rate_tolerance = 0.10;
    double harnack_stability = 0.05;
    int harnack_top = 10;
    std::optional<Index> iu_probe;  // defaults to the node a quarter of the way along
    double iu_window_lo = 2.0;
    double iu_window_hi = 8.0;
};

std::vector<std::string> suite_names();

// Runs the named suites ("all" expands to every suite). One suite's failure
// is recorded in its report and does not stop the others.
template <typename Scalar>
std::vector<VerificationReport> run_suite(const GreenEvaluator<Scalar>& ev, const std::vector<std::string>& selection,
                                          const SuiteConfig& config = {});

}  // namespace cylmartin
