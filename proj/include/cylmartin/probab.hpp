#pragma once

// Exact law of Z = −Σ a_k X_k with X_k independent fair 0/1 variables, i.e.
// the convolution of the two-point measures ½δ₀ + ½δ_{−a_k}, and the
// Chernoff-type product bound on its mass near 0.

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

namespace cylmartin {

struct DiscreteDistribution {
    std::map<double, double> atoms;  // support point (<= 0) -> probability

    double total_mass() const;
    // Throws ParameterError unless every mass is > 0, support points are <= 0
    // and the masses sum to 1 within 1e−12.
    void validate() const;
};

// Enumeration with merging of atoms closer than 1e−12 handles up to
// `kMaxEnumerated` steps. Longer sequences need a common grid: either the
// given spacing or one detected automatically (a_k·q integral for some
// q <= 10⁶); the law is then built by dynamic programming over grid indices.
inline constexpr std::size_t kMaxEnumerated = 25;

DiscreteDistribution exact_convolution(const std::vector<double>& a, std::optional<double> grid = std::nullopt);

// Mass of the closed interval [−L, 0]. Atoms within 1e−12·max(1,L) of −L count.
double tail_mass(const DiscreteDistribution& dist, double L);

// e^{βL} Π_j (1 − (1 − e^{−βa_j})/2).
double chernoff_bound(const std::vector<double>& a, double L, double beta);

// min over β ∈ {0.001, 0.002, …, 5} of chernoff_bound.
double best_chernoff_bound(const std::vector<double>& a, double L);

// A = (log(1/ε) + β*L)·2e^{β*}/β* with β* minimizing it over the same β grid.
// Σa_k >= A with a_k <= 1 forces e^{βL}exp(−(β/2)e^{−β}Σa_k) <= ε.
double chernoff_threshold(double L, double eps);
double chernoff_threshold_beta(double L, double eps);

// One real per line; blank lines and lines starting with '#' are ignored.
std::vector<double> read_atoms_csv(std::istream& in);
// "support,mass" rows in ascending support order.
void write_distribution_csv(std::ostream& out, const DiscreteDistribution& dist);

}  // namespace cylmartin
