#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylmartin/base_domain.hpp"
#include "cylmartin/cylinder.hpp"
#include "cylmartin/errors.hpp"
#include "cylmartin/verifiers.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <numbers>
#include <set>

using namespace cylmartin;

namespace {

constexpr double kPi = std::numbers::pi;

const GreenEvaluator<double>& arc101()
{
    static const auto ev = make_evaluator<double>(build_arc(kPi, 101));
    return ev;
}

GreenEvaluator<double> single_node(double c, double b)
{
    return make_evaluator<double>(build_graph(1, {}, {1.0}, {c}, 2, b));
}

}  // namespace

TEST_CASE("quasi-random points are deterministic and in the unit cube")
{
    QuasiRandom a(3, 5), b(3, 5), c(3, 6);
    bool differs = false;
    for (int s = 0; s < 1000; ++s) {
        const auto x = a.next(), y = b.next(), z = c.next();
        REQUIRE(x.size() == 3);
        CHECK(x == y);
        differs = differs || x != z;
        for (double v : x) {
            CHECK(v >= 0.0);
            CHECK(v < 1.0);
        }
    }
    CHECK(differs);
    CHECK_THROWS_AS(QuasiRandom(0, 1), ParameterError);
}

TEST_CASE("samplers respect their domains")
{
    const auto mono = sample_monotonicity(7, 500, 3);
    REQUIRE(mono.size() == 500);
    bool below = false, above = false;
    for (const auto& s : mono) {
        CHECK(s.u >= -5.0);
        CHECK(s.u <= 5.0);
        CHECK(s.rho > 0.0);
        CHECK(s.rho <= 4.0);
        CHECK(std::abs(s.v - (s.u + s.rho / 2)) <= 6.0 + 1e-12);
        CHECK(s.i < 7);
        CHECK(s.j < 7);
        below = below || s.v < s.u + s.rho / 2;
        above = above || s.v > s.u + s.rho / 2;
    }
    CHECK(below);
    CHECK(above);

    const std::vector<Index> sigma{4, 3, 2, 1, 0};
    for (const auto& s : sample_reflection(sigma, 300, 4)) {
        CHECK(s.y <= sigma[s.y]);
        CHECK(s.z >= sigma[s.z]);
    }
    CHECK_THROWS_AS(sample_reflection({}, 10, 1), ParameterError);

    const auto grid = harnack_grid(10);
    CHECK(grid.size() == 165);
    for (const auto& t : grid) {
        CHECK(t.v - t.u >= 1.0);
        CHECK(t.w - t.v >= 1.0);
    }
}

TEST_CASE("empty sample sets are rejected")
{
    const auto& ev = arc101();
    CHECK_THROWS_AS(check_green_monotonicity(ev, {}), ParameterError);
    CHECK_THROWS_AS(check_symmetry_identity(ev, {}), ParameterError);
    CHECK_THROWS_AS(check_normalization(ev, {}), ParameterError);
    CHECK_THROWS_AS(check_boundary_harnack(ev, {}), ParameterError);
}

TEST_CASE("monotonicity and symmetry hold to round-off")
{
    for (const auto& ev : {arc101(), make_evaluator<double>(build_cap(4, 1.2, 40)), single_node(2.0, 1.0)}) {
        const Index n = ev.spectrum().size();
        const auto m = check_green_monotonicity(ev, sample_monotonicity(n, 3000, 1));
        CHECK(m.passed());
        CHECK(m.max_violation <= 1e-12);
        CHECK(std::isfinite(m.max_violation));
        const auto s = check_symmetry_identity(ev, sample_symmetry(n, 3000, 2));
        CHECK(s.passed());
        CHECK(std::abs(s.max_violation) <= 1e-12);
    }
}

TEST_CASE("zero shift makes both monotonicity branches equalities")
{
    const auto& ev = arc101();
    std::vector<MonotonicitySample> samples;
    for (int k = 0; k < 20; ++k)
        samples.push_back({-2.0 + 0.2 * k, 1.0, 0.0, Index(k), Index(50)});
    const auto rep = check_green_monotonicity(ev, samples);
    CHECK(rep.max_violation == 0.0);
    // On the side condition v = u + ρ/2 both bounds apply.
    const auto edge = check_green_monotonicity(ev, {{0.0, 1.0, 2.0, 10, 60}});
    CHECK(std::abs(edge.max_violation) <= 1e-12);
}

TEST_CASE("normalization and reference shift")
{
    const auto ev = make_evaluator<double>(build_cap(3, 1.0, 30));
    std::vector<CylinderPoint> poles{{3.0, 4}, {-2.0, 29}, {10.0, 0}};
    CHECK(check_normalization(ev, poles).max_violation <= 1e-12);
    std::vector<CylinderPoint> grid;
    for (int k = 0; k < 30; ++k)
        grid.push_back({-3.0 + 0.2 * k, Index(k)});
    const auto rep = check_reference_shift(ev, {6.0, 10}, {0.5, 20}, grid);
    CHECK(rep.passed());
}

TEST_CASE("single-node Harnack constant is 2√μ₁ or its inverse")
{
    for (double c : {0.01, 0.5, 2.0, 30.0}) {
        for (double b : {0.0, 1.0}) {
            const auto ev = single_node(c, b);
            const double s = 2 * std::sqrt(c + b * b / 4);
            const auto rep = check_boundary_harnack(ev, harnack_grid(6));
            CHECK(*rep.empirical_constant == doctest::Approx(std::max(s, 1 / s)).epsilon(1e-12));
            CHECK(rep.max_violation == 0.0);
        }
    }
    // A unit gap is admissible, a smaller one is not.
    const auto ev = single_node(1.0, 0.0);
    CHECK(std::isfinite(*check_boundary_harnack(ev, {{0.0, 1.0, 2.0}}).empirical_constant));
    CHECK_THROWS_AS(check_boundary_harnack(ev, {{0.0, 0.5, 2.0}}), ParameterError);
}

TEST_CASE("arc Harnack constant is stable under grid extension")
{
    const double c10 = *check_boundary_harnack(arc101(), harnack_grid(10)).empirical_constant;
    const double c20 = *check_boundary_harnack(arc101(), harnack_grid(20)).empirical_constant;
    CHECK(std::isfinite(c10));
    CHECK(std::abs(c20 - c10) / c10 <= 0.05);
}

TEST_CASE("IU ratio on the arc")
{
    const auto& spec = arc101().spectrum();
    std::vector<double> times;
    for (int s = 1; s <= 200; ++s)
        times.push_back(0.25 * s);
    const auto rep = check_iu_ratio(spec, 25, times, 2.0, 8.0);
    for (const auto& row : rep.rows)
        CHECK(row[1] >= 0.0);
    CHECK(rep.rows.back()[1] <= 1e-8);
    REQUIRE(rep.fitted_rate.has_value());
    CHECK(rep.fitted_rate->expected == doctest::Approx(-(spec.eigenvalues(1) - spec.eigenvalues(0))));
    CHECK(rep.passed());

    // φ₂ vanishes at the midpoint, so the third mode sets the rate there.
    const auto mid = check_iu_ratio(spec, 50, times, 0.5, 3.0);
    CHECK(mid.fitted_rate->expected == doctest::Approx(-(spec.eigenvalues(2) - spec.eigenvalues(0))));
    CHECK(mid.passed());

    CHECK_THROWS_AS(check_iu_ratio(spec, 25, {1.0, 0.5}, 0.0, 2.0), ParameterError);
    CHECK_THROWS_AS(check_iu_ratio(spec, 101, times, 2.0, 8.0), ParameterError);
}

TEST_CASE("single-node small-time ratio")
{
    for (double lambda : {0.0, 0.7}) {
        const auto ev = single_node(2.0, 0.0);
        const auto rep = check_small_time_ratio(ev.spectrum(), lambda, 0.8, 0, {0, 0, 0});
        for (const auto& row : rep.rows)
            CHECK(row[2] == doctest::Approx(1 - std::exp(-(2.0 + lambda) * 0.8)).epsilon(1e-14));
        CHECK(std::abs(rep.max_violation) <= 1e-14);
    }
}

TEST_CASE("arc small-time ratio matches an independent quadrature and stays away from 0")
{
    const Index n = 20;
    const auto base = build_arc(kPi, n);
    const auto spec = decompose<double>(base);
    const double lambda = 0.5, t0 = 1.0;
    const Index x = 6;
    std::vector<Index> ys;
    for (Index y = 0; y < n; ++y)
        ys.push_back(y);
    const auto rep = check_small_time_ratio(spec, lambda, t0, x, ys);

    // ∫₀^∞ e^{−λs}π_s ds is the inverse of stiffness + λ·mass.
    const Eigen::MatrixXd resolvent =
        (base.stiffness + lambda * Eigen::MatrixXd(base.mass.asDiagonal())).ldlt().solve(Eigen::MatrixXd::Identity(n, n));
    const int m = 40000;
    const double h = t0 / m;
    for (Index y = 0; y < n; ++y) {
        // π₀(x,y) = δ_xy / w_x.
        double sum = x == y ? 1.0 / base.mass(x) : 0.0;
        for (int k = 1; k <= m; ++k) {
            const double s = k * h;
            sum += (k == m ? 1 : (k % 2 ? 4 : 2)) * std::exp(-lambda * s) * heat_kernel(spec, s, x, y);
        }
        const double expected = sum * h / 3 / resolvent(x, y);
        CHECK(rep.rows[y][2] == doctest::Approx(expected).epsilon(1e-6));
        CHECK(rep.rows[y][2] > 0.0);
        CHECK(rep.rows[y][2] <= 1.0);
        CHECK(rep.rows[y][2] > 0.2);
    }
    CHECK_THROWS_AS(check_small_time_ratio(spec, 0.0, 0.0, x, ys), ParameterError);
    CHECK_THROWS_AS(check_small_time_ratio(spec, 0.0, 1.0, n, ys), ParameterError);
}

TEST_CASE("ratio limit trivial cases")
{
    const auto spec = decompose<double>(build_arc(kPi, 31));
    std::vector<Index> ys{3, 10, 15, 20};
    const auto same = check_ratio_limit(spec, 0.0, 1.3, 1.3, 15, ys);
    for (const auto& row : same.rows)
        CHECK(row[2] == 1.0);
    const auto mirrored = check_ratio_limit(spec, 0.0, 1.3, -1.3, 15, ys);
    for (const auto& row : mirrored.rows)
        CHECK(row[2] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mirrored.max_violation <= 1e-14);
    CHECK_THROWS_AS(check_ratio_limit(spec, 0.0, 1.0, 0.0, 15, {31}), ParameterError);
}

TEST_CASE("reflection inequality")
{
    const auto& ev = arc101();
    const auto& sigma = *ev.base().symmetry;
    const auto rep = check_reflection(ev, sample_reflection(sigma, 2000, 6), 0.5, 9, 4);
    CHECK(rep.passed());
    CHECK(rep.max_violation <= 1e-12);

    // z on the fixed set of σ.
    std::vector<ReflectionSample> fixed;
    for (int k = 0; k < 10; ++k)
        fixed.push_back({-1.0 + 0.3 * k, 0.2 * k, 50, Index(k)});
    CHECK(check_reflection(ev, fixed, 0.5, 3, 10).max_violation == 0.0);

    CHECK_THROWS_AS(check_reflection(ev, {{0.0, 0.0, 10, 60}}), ParameterError);

    // Domination constant under refinement of the node stride.
    const auto coarse = check_reflection(ev, fixed, 0.5, 9, 4);
    const auto fine = check_reflection(ev, fixed, 0.5, 9, 1);
    CHECK(std::abs(*fine.empirical_constant / *coarse.empirical_constant - 1) <= 0.10);

    const auto asym = make_evaluator<double>(build_cap(4, 1.0, 20));
    const auto skipped = check_reflection(asym, {});
    CHECK(skipped.status == "skipped");
    CHECK(skipped.passed());
}

TEST_CASE("convergence sweep and exponent estimates")
{
    const auto ev = make_evaluator<Extended>(build_arc(kPi, 32));
    std::vector<double> poles;
    for (int v = 2; v <= 20; v += 2)
        poles.push_back(v);
    std::vector<CylinderPoint> probe;
    for (int s = -2; s <= 2; ++s)
        for (Index i = 0; i < 32; i += 3)
            probe.push_back({0.5 * s, i});
    const auto rep = check_convergence_to_f_plus(ev, poles, ev.reference().node, probe);
    for (std::size_t k = 1; k < rep.rows.size(); ++k)
        CHECK(rep.rows[k][1] < rep.rows[k - 1][1]);
    REQUIRE(rep.fitted_rate.has_value());
    CHECK(rep.passed());

    const auto& dev = arc101();
    const auto fits = martin_exponents(dev, {20, 35}, 40, {-12.0, -11.0, -10.0, -9.0, -8.0});
    REQUIRE(fits.size() == 2);
    for (const auto& f : fits)
        CHECK(std::abs(f.slope - dev.spectrum().ladder.alpha_max) <= 1e-3);
}

TEST_CASE("suite runner")
{
    const auto& ev = arc101();
    SuiteConfig cfg;
    cfg.samples = 2000;
    const auto all = run_suite(ev, {"all"});
    REQUIRE(all.size() == suite_names().size());
    for (const auto& rep : all) {
        CAPTURE(rep.suite);
        CAPTURE(rep.message);
        CHECK(rep.status == "ok");
        CHECK(rep.passed());
        CHECK(rep.seed == cfg.seed);
    }
    std::set<std::string> names;
    for (const auto& rep : all)
        names.insert(rep.suite);
    CHECK(names.size() == all.size());
    for (const auto& rep : all)
        if (rep.suite == "iu-ratio")
            CHECK(rep.fitted_rate.has_value());

    CHECK(run_suite(ev, {}).empty());
    CHECK_THROWS_AS(run_suite(ev, {"monotonicity", "nonsense"}), UnknownSuiteError);

    const auto a = run_suite(ev, {"monotonicity", "symmetry"}, cfg);
    const auto b = run_suite(ev, {"monotonicity", "symmetry"}, cfg);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].max_violation == b[k].max_violation);
        CHECK(a[k].rows == b[k].rows);
    }

    // A failing suite is reported without stopping the others.
    SuiteConfig broken = cfg;
    broken.iu_probe = 1000;
    const auto mixed = run_suite(ev, {"iu-ratio", "normalization"}, broken);
    CHECK(mixed[0].status == "error");
    CHECK_FALSE(mixed[0].passed());
    CHECK(mixed[1].passed());

    const auto no_sym = run_suite(make_evaluator<double>(build_cap(4, 1.0, 20)), {"reflection"}, cfg);
    CHECK(no_sym[0].status == "skipped");
}
