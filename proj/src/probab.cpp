#include "cylmartin/probab.hpp"

#include "cylmartin/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iterator>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace cylmartin {

namespace {

constexpr double kMergeTolerance = 1e-12;
constexpr double kMaxGridBins = 5e7;

void check_sequence(const std::vector<double>& a)
{
    for (double x : a)
        if (!(x >= 0.0 && x <= 1.0))
            throw ParameterError("atom sizes must lie in [0, 1]");
}

// Smallest q <= 10⁶ with every a_k·q within 1e−9 of an integer.
std::optional<long> detect_grid(const std::vector<double>& a)
{
    auto fits = [&](long q) {
        for (double x : a) {
            const double scaled = x * static_cast<double>(q);
            if (std::abs(scaled - std::round(scaled)) > 1e-9 * std::max(1.0, scaled))
                return false;
        }
        return true;
    };
    for (long q = 1; q <= 1000; ++q)
        if (fits(q))
            return q;
    for (long q = 10000; q <= 1000000; q *= 10)
        if (fits(q))
            return q;
    return std::nullopt;
}

DiscreteDistribution enumerate(const std::vector<double>& a)
{
    std::vector<std::pair<double, double>> atoms{{0.0, 1.0}};
    std::vector<std::pair<double, double>> merged;
    for (double step : a) {
        std::vector<std::pair<double, double>> shifted;
        shifted.reserve(atoms.size());
        for (const auto& [x, p] : atoms)
            shifted.emplace_back(x - step, p);
        for (auto& atom : atoms)
            atom.second *= 0.5;
        for (auto& atom : shifted)
            atom.second *= 0.5;
        merged.clear();
        merged.reserve(2 * atoms.size());
        std::merge(atoms.begin(), atoms.end(), shifted.begin(), shifted.end(), std::back_inserter(merged));
        atoms.clear();
        for (const auto& atom : merged) {
            if (!atoms.empty() && std::abs(atom.first - atoms.back().first) <= kMergeTolerance)
                atoms.back().second += atom.second;
            else
                atoms.push_back(atom);
        }
    }
    DiscreteDistribution dist;
    for (const auto& [x, p] : atoms)
        dist.atoms[x] += p;
    return dist;
}

DiscreteDistribution grid_dp(const std::vector<double>& a, double spacing)
{
    std::vector<long> steps;
    double bins = 1.0;
    for (double x : a) {
        const double scaled = x / spacing;
        const double k = std::round(scaled);
        if (std::abs(scaled - k) > 1e-9 * std::max(1.0, scaled))
            throw CapacityError("atom " + std::to_string(x) + " is not on the grid");
        steps.push_back(static_cast<long>(k));
        bins += k;
    }
    if (bins > kMaxGridBins)
        throw CapacityError("grid convolution needs too many bins");
    std::vector<double> mass(static_cast<std::size_t>(bins), 0.0);
    mass[0] = 1.0;
    long top = 0;
    for (long k : steps) {
        // Descending, so mass[i + k] has already been halved when it receives p.
        for (long i = top; i >= 0; --i) {
            const double p = mass[i] * 0.5;
            mass[i] = p;
            mass[i + k] += p;
        }
        top += k;
    }
    DiscreteDistribution dist;
    for (long i = 0; i <= top; ++i)
        if (mass[i] > 0.0)
            dist.atoms[-static_cast<double>(i) * spacing] += mass[i];
    return dist;
}

}  // namespace

double DiscreteDistribution::total_mass() const
{
    double sum = 0.0;
    for (const auto& [x, p] : atoms)
        sum += p;
    return sum;
}

void DiscreteDistribution::validate() const
{
    for (const auto& [x, p] : atoms) {
        if (!(p > 0.0))
            throw ParameterError("distribution has a non-positive mass");
        if (!(x <= 0.0))
            throw ParameterError("distribution has a positive support point");
    }
    if (!(std::abs(total_mass() - 1.0) <= 1e-12))
        throw ParameterError("distribution masses do not sum to 1");
}

DiscreteDistribution exact_convolution(const std::vector<double>& a, std::optional<double> grid)
{
    check_sequence(a);
    if (grid) {
        if (!(*grid > 0.0))
            throw ParameterError("grid spacing must be positive");
        return grid_dp(a, *grid);
    }
    if (a.size() <= kMaxEnumerated)
        return enumerate(a);
    const auto q = detect_grid(a);
    if (!q)
        throw CapacityError("sequence of length " + std::to_string(a.size()) +
                            " exceeds exact enumeration and has no common grid");
    return grid_dp(a, 1.0 / static_cast<double>(*q));
}

double tail_mass(const DiscreteDistribution& dist, double L)
{
    if (!(L > 0.0))
        throw ParameterError("tail mass needs L > 0");
    const double cut = -L - kMergeTolerance * std::max(1.0, L);
    double sum = 0.0;
    for (auto it = dist.atoms.lower_bound(cut); it != dist.atoms.end(); ++it)
        if (it->first <= 0.0)
            sum += it->second;
    return sum;
}

double chernoff_bound(const std::vector<double>& a, double L, double beta)
{
    if (!(beta > 0.0))
        throw ParameterError("Chernoff bound needs β > 0");
    check_sequence(a);
    double log_bound = beta * L;
    for (double x : a)
        log_bound += std::log1p(std::expm1(-beta * x) / 2.0);
    return std::exp(log_bound);
}

double best_chernoff_bound(const std::vector<double>& a, double L)
{
    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 5000; ++k)
        best = std::min(best, chernoff_bound(a, L, 1e-3 * k));
    return best;
}

namespace {

std::pair<double, double> threshold_search(double L, double eps)
{
    if (!(eps > 0.0 && eps < 1.0))
        throw ParameterError("Chernoff threshold needs ε in (0, 1)");
    if (!(L > 0.0))
        throw ParameterError("Chernoff threshold needs L > 0");
    double best = std::numeric_limits<double>::infinity();
    double best_beta = 0.0;
    for (int k = 1; k <= 5000; ++k) {
        const double beta = 1e-3 * k;
        const double A = (std::log(1.0 / eps) + beta * L) * 2.0 * std::exp(beta) / beta;
        if (A < best) {
            best = A;
            best_beta = beta;
        }
    }
    return {best, best_beta};
}

}  // namespace

double chernoff_threshold(double L, double eps)
{
    return threshold_search(L, eps).first;
}

double chernoff_threshold_beta(double L, double eps)
{
    return threshold_search(L, eps).second;
}

std::vector<double> read_atoms_csv(std::istream& in)
{
    std::vector<double> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream field(line.substr(first));
        double x = 0.0;
        if (!(field >> x))
            throw ParameterError("atoms file line " + std::to_string(lineno) + ": not a number");
        out.push_back(x);
    }
    check_sequence(out);
    return out;
}

void write_distribution_csv(std::ostream& out, const DiscreteDistribution& dist)
{
    out << "support,mass\n" << std::setprecision(17);
    for (const auto& [x, p] : dist.atoms)
        out << x << ',' << p << '\n';
}

}  // namespace cylmartin
