#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylmartin/base_domain.hpp"
#include "cylmartin/errors.hpp"
#include "cylmartin/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace cylmartin;

namespace {

constexpr double kPi = std::numbers::pi;

// Random connected weighted graph with leaks at two nodes.
BaseOperator random_graph(Index n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> c(0.2, 2.0);
    std::vector<GraphEdge> edges;
    for (Index i = 0; i + 1 < n; ++i)
        edges.push_back({i, i + 1, c(rng)});
    for (int extra = 0; extra < n; ++extra) {
        const Index i = rng() % n, j = rng() % n;
        if (i != j)
            edges.push_back({i, j, c(rng)});
    }
    std::vector<double> mass(n), leak(n, 0.0);
    for (auto& m : mass)
        m = c(rng);
    leak[0] = 1.0;
    leak[n - 1] = 0.5;
    return build_graph(n, edges, mass, leak, 3);
}

}  // namespace

TEST_CASE("exponent ladder examples")
{
    auto l = exponent_ladder(1.0, 0.0);
    CHECK(l.alpha_min == doctest::Approx(-1.0));
    CHECK(l.alpha_zero == 0.0);
    CHECK(l.alpha_max == doctest::Approx(1.0));
    l = exponent_ladder(3.0, 2.0);
    CHECK(l.alpha_min == doctest::Approx(-3.0));
    CHECK(l.alpha_zero == doctest::Approx(-1.0));
    CHECK(l.alpha_max == doctest::Approx(1.0));
}

TEST_CASE("ladder roots satisfy the quadratic for many drifts")
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> lam(1e-4, 1e3), drift(-30.0, 30.0);
    for (int s = 0; s < 2000; ++s) {
        const double l1 = lam(rng), b = drift(rng);
        const auto a = exponent_ladder(l1, b);
        CHECK(a.alpha_min < a.alpha_zero);
        CHECK(a.alpha_zero < a.alpha_max);
        CHECK(std::abs(a.alpha_max * (a.alpha_max + b) - l1) <= 1e-12 * std::max(1.0, l1));
        CHECK(std::abs(a.alpha_min * (a.alpha_min + b) - l1) <= 1e-12 * std::max(1.0, l1 + b * b));
    }
}

TEST_CASE("single-node arc is solved by hand")
{
    const auto spec = decompose<double>(build_arc(kPi, 1));
    CHECK(spec.lambda1() == doctest::Approx(8.0 / (kPi * kPi)).epsilon(1e-15));
    CHECK(spec.ground_state()(0) == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-15));
}

TEST_CASE("fine arc: eigenvalue and sine ground state")
{
    const Index n = 2000;
    const auto base = build_arc(kPi, n);
    const auto spec = decompose<double>(base);
    CHECK(std::abs(spec.lambda1() - 1.0) <= 1e-5);
    // Mass-normalized sin θ is sqrt(2/π) sin θ.
    double worst = 0.0;
    for (Index i = 0; i < n; ++i) {
        const double exact = std::sqrt(2.0 / kPi) * std::sin(base.labels[i].position);
        worst = std::max(worst, std::abs(spec.ground_state()(i) / exact - 1.0));
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("arc spectrum matches the discrete sine oracle")
{
    const Index n = 40;
    const double h = kPi / (n + 1);
    const auto spec = decompose<double>(build_arc(kPi, n));
    for (Index k = 0; k < n; ++k) {
        const double s = std::sin((k + 1) * kPi / (2.0 * (n + 1)));
        CHECK(spec.eigenvalues(k) == doctest::Approx(4.0 / (h * h) * s * s).epsilon(1e-11));
    }
}

TEST_CASE("dense path agrees with an independent generalized solver")
{
    const auto base = random_graph(25, 5);
    REQUIRE_FALSE(base.is_tridiagonal());
    const auto spec = decompose<double>(base);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ref(base.stiffness,
                                                                   Eigen::MatrixXd(base.mass.asDiagonal()));
    for (Index k = 0; k < base.size(); ++k)
        CHECK(spec.eigenvalues(k) == doctest::Approx(ref.eigenvalues()(k)).epsilon(1e-10));
}

TEST_CASE("spectral invariants hold on every builder")
{
    std::vector<BaseOperator> bases{build_arc(2.0, 30), build_cap(4, 1.3, 50), random_graph(30, 9),
                                    build_chain(default_chain_spec(), 4)};
    for (const auto& base : bases) {
        const auto spec = decompose<double>(base);
        const Index n = spec.size();
        // Mass orthonormality.
        const Eigen::MatrixXd gram =
            spec.eigenvectors.transpose() * spec.mass.asDiagonal() * spec.eigenvectors;
        CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(max_relative_residual(base, spec) <= 1e-9);
        CHECK(spec.eigenvalues(1) > spec.eigenvalues(0));
        CHECK(spec.ground_state().minCoeff() > 0.0);
        for (Index k = 0; k < n; ++k) {
            Index arg = 0;
            spec.eigenvectors.col(k).cwiseAbs().maxCoeff(&arg);
            CHECK(spec.eigenvectors(arg, k) > 0.0);
            CHECK(spec.mu(k) == doctest::Approx(spec.eigenvalues(k) + spec.drift * spec.drift / 4));
        }
    }
}

TEST_CASE("degenerate ground state is rejected")
{
    // Two disconnected identical nodes: λ₁ is double.
    const auto base = build_graph(2, {}, {1.0, 1.0}, {1.0, 1.0}, 2);
    CHECK_THROWS_AS(decompose<double>(base), SpectralError);
}

TEST_CASE("heat kernel identities")
{
    const auto base = build_cap(3, 1.1, 30);
    const auto spec = decompose<double>(base);
    const Index n = spec.size();
    CHECK_THROWS_AS(heat_kernel(spec, 0.0, 0, 0), ParameterError);

    std::mt19937 rng(1);
    std::uniform_int_distribution<Index> node(0, n - 1);
    std::uniform_real_distribution<double> time(1e-3, 50.0);
    for (int s = 0; s < 200; ++s) {
        const Index i = node(rng), j = node(rng);
        const double t = time(rng);
        CHECK(heat_kernel(spec, t, i, j) == doctest::Approx(heat_kernel(spec, t, j, i)).epsilon(1e-12));
        CHECK(heat_kernel(spec, t, i, j) >= -1e-12 * heat_kernel(spec, t, i, i));
    }

    // Semigroup property.
    for (int s = 0; s < 20; ++s) {
        const Index i = node(rng), l = node(rng);
        const double t = 0.05 + 0.1 * s, u = 0.3;
        double sum = 0.0;
        for (Index j = 0; j < n; ++j)
            sum += spec.mass(j) * heat_kernel(spec, t, i, j) * heat_kernel(spec, u, j, l);
        CHECK(sum == doctest::Approx(heat_kernel(spec, t + u, i, l)).epsilon(1e-10));
    }

    // Sub-stochastic, strictly for t >= 1.
    for (double t : {1e-3, 0.1, 1.0, 5.0}) {
        for (Index i = 0; i < n; i += 5) {
            double total = 0.0;
            for (Index j = 0; j < n; ++j)
                total += spec.mass(j) * heat_kernel(spec, t, i, j);
            CHECK(total <= 1.0 + 1e-10);
            if (t >= 1.0)
                CHECK(total < 1.0);
        }
    }

    // Large-time tail bound.
    const auto phi = spec.ground_state();
    for (double t : {2.0, 5.0, 10.0}) {
        for (Index i = 0; i < n; i += 7) {
            for (Index j = 0; j < n; j += 6) {
                double worst = 0.0;
                for (Index k = 1; k < n; ++k)
                    worst = std::max(worst, std::abs(spec.eigenvectors(i, k) * spec.eigenvectors(j, k)));
                const double lhs = std::abs(heat_kernel_scaled(spec, t, i, j) / (phi(i) * phi(j)) - 1.0);
                const double rhs = std::exp(-(spec.eigenvalues(1) - spec.eigenvalues(0)) * t) * (n - 1) * worst /
                                   (phi(i) * phi(j));
                CHECK(lhs <= rhs * (1 + 1e-9) + 1e-14);
            }
        }
    }
}

TEST_CASE("extended precision reproduces the double spectrum")
{
    const auto base = build_arc(kPi, 30);
    const auto d = decompose<double>(base);
    const auto e = decompose<Extended>(base);
    for (Index k = 0; k < 30; ++k)
        CHECK(to_double(e.eigenvalues(k)) == doctest::Approx(d.eigenvalues(k)).epsilon(1e-12));
    CHECK(to_double(max_relative_residual(base, e)) < 1e-60);
}

TEST_CASE("spectrum CSV export")
{
    const auto spec = decompose<double>(build_arc(kPi, 3));
    std::ostringstream s, v;
    write_spectrum_csv(s, spec);
    write_eigenvectors_csv(v, spec);
    CHECK(s.str().rfind("k,lambda_k,mu_k\n1,", 0) == 0);
    CHECK(v.str().rfind("node,k,value\n0,1,", 0) == 0);
    int lines = 0;
    for (char c : v.str())
        lines += c == '\n';
    CHECK(lines == 1 + 9);
}
