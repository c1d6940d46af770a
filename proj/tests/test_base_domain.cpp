#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cylmartin/base_domain.hpp"
#include "cylmartin/errors.hpp"
#include "cylmartin/spectral.hpp"

#include <cmath>
#include <numbers>

using namespace cylmartin;
using Kind = ValidationError::Kind;

namespace {

constexpr double kPi = std::numbers::pi;

Kind kind_of(const std::string& doc)
{
    try {
        load_base(doc);
    } catch (const ValidationError& e) {
        return e.kind();
    }
    FAIL("document was accepted: " << doc);
    return Kind::Schema;
}

void check_structure(const BaseOperator& b)
{
    const Index n = b.size();
    for (Index i = 0; i < n; ++i) {
        CHECK(b.mass(i) > 0.0);
        for (Index j = 0; j < n; ++j) {
            CHECK(b.stiffness(i, j) == b.stiffness(j, i));
            if (i != j)
                CHECK(b.stiffness(i, j) <= 0.0);
        }
    }
    if (b.symmetry) {
        const auto& s = *b.symmetry;
        for (Index i = 0; i < n; ++i) {
            CHECK(s[s[i]] == i);
            for (Index j = 0; j < n; ++j)
                CHECK(b.stiffness(s[i], s[j]) == b.stiffness(i, j));
        }
    }
}

}  // namespace

TEST_CASE("single-node arc carries the hand-evaluated stencil")
{
    const auto b = build_arc(kPi, 1);
    REQUIRE(b.size() == 1);
    CHECK(b.generator()(0, 0) == doctest::Approx(8.0 / (kPi * kPi)).epsilon(1e-15));
    CHECK(b.mass(0) == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(b.dimension == 2);
    CHECK(b.drift == 0.0);
}

TEST_CASE("three-node arc is the three-point stencil")
{
    const auto b = build_arc(kPi, 3);
    const double h = kPi / 4;
    const Eigen::MatrixXd g = b.generator();
    for (Index i = 0; i < 3; ++i) {
        CHECK(g(i, i) == doctest::Approx(2.0 / (h * h)).epsilon(1e-14));
        if (i + 1 < 3) {
            CHECK(g(i, i + 1) == doctest::Approx(-1.0 / (h * h)).epsilon(1e-14));
            CHECK(b.stiffness(i, i + 1) == b.stiffness(i + 1, i));
        }
    }
    CHECK(g(0, 2) == 0.0);
    CHECK(b.reference == 1);
    check_structure(b);
}

TEST_CASE("arc parameters are checked")
{
    CHECK_THROWS_AS(build_arc(0.0, 3), ParameterError);
    CHECK_THROWS_AS(build_arc(-1.0, 3), ParameterError);
    CHECK_THROWS_AS(build_arc(2 * kPi, 3), ParameterError);
    CHECK_THROWS_AS(build_arc(1.0, 0), ParameterError);
}

TEST_CASE("arc eigenvalue converges at second order")
{
    // Observed order of |λ₁(n) − 1| between successive doublings.
    std::vector<double> err;
    for (Index n : {250, 500, 1000, 2000})
        err.push_back(std::abs(decompose<double>(build_arc(kPi, n)).lambda1() - 1.0));
    CHECK(err.back() <= 1e-5);
    for (std::size_t i = 1; i < err.size(); ++i) {
        const double h_ratio = double(2 * (250 << (i - 1)) + 1) / double((250 << (i - 1)) + 1);
        const double order = std::log(err[i - 1] / err[i]) / std::log(h_ratio);
        CHECK(order >= 1.9);
        CHECK(order <= 2.1);
    }
}

TEST_CASE("cap rejects a polar complement")
{
    try {
        build_cap(4, kPi, 10);
        FAIL("accepted θ₀ = π");
    } catch (const ValidationError& e) {
        CHECK(e.kind() == Kind::ComplementPolar);
    }
    CHECK_THROWS_AS(build_cap(3, 4.0, 10), ValidationError);
}

TEST_CASE("cap weights follow sin^{d-2}")
{
    const auto b = build_cap(5, 1.0, 40);
    const double h = 1.0 / 40.5;
    for (Index i = 0; i < b.size(); ++i) {
        const double theta = (i + 0.5) * h;
        CHECK(b.mass(i) == doctest::Approx(std::pow(std::sin(theta), 3) * h).epsilon(1e-14));
    }
    CHECK(b.drift == 3.0);
    CHECK(b.reference == 0);
    check_structure(b);
}

TEST_CASE("two-dimensional cap is the doubled arc")
{
    const auto cap = build_cap(2, 0.8, 9);
    const auto arc = build_arc(1.6, 9);
    CHECK((cap.stiffness - arc.stiffness).cwiseAbs().maxCoeff() == 0.0);
    CHECK((cap.mass - arc.mass).cwiseAbs().maxCoeff() == 0.0);
    CHECK(cap.labels[4].position == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("hemisphere eigenvalues match d - 1")
{
    for (int d : {3, 4}) {
        const auto spec = decompose<double>(build_cap(d, kPi / 2, 2000));
        CHECK(spec.lambda1() == doctest::Approx(d - 1.0).epsilon(1e-4 / (d - 1.0)));
    }
}

TEST_CASE("one-bead chain is a hand-checkable path")
{
    ChainSpec cs;
    cs.beads = 1;
    cs.radii = {1.0};
    cs.bead_nodes = 2;
    cs.neck_ratio = 1.0;
    cs.anchor_nodes = 2;
    const auto b = build_chain(cs, 4);
    REQUIRE(b.size() == 4);
    Eigen::MatrixXd expected(4, 4);
    expected << 4, -2, 0, 0, -2, 4, -2, 0, 0, -2, 4, -2, 0, 0, -2, 4;
    CHECK((b.stiffness - expected).cwiseAbs().maxCoeff() < 1e-14);
    for (Index i = 0; i < 4; ++i)
        CHECK(b.mass(i) == doctest::Approx(0.5));
    CHECK(b.labels[0].tag == "anchor");
    CHECK(b.labels[2].group == 1);
    CHECK(b.drift == 2.0);
}

TEST_CASE("longer chains lower the ground eigenvalue")
{
    ChainSpec cs;
    cs.bead_nodes = 8;
    cs.neck_ratio = 0.05;
    cs.beads = 20;
    cs.radii = inverse_sqrt_radii(20);
    const double l20 = decompose<double>(build_chain(cs, 4)).lambda1();
    cs.beads = 40;
    cs.radii = inverse_sqrt_radii(40);
    const auto b40 = build_chain(cs, 4);
    const double l40 = decompose<double>(b40).lambda1();
    CHECK(l40 > 0.0);
    CHECK(l40 < l20);
    check_structure(b40);

    Index previous = b40.reference;
    for (int j = 1; j <= 40; ++j) {
        const Index c = bead_center(cs, j);
        CHECK(c > previous);
        CHECK(b40.labels[c].group == j);
        previous = c;
    }
}

TEST_CASE("chain spec validation and divergence flag")
{
    ChainSpec cs = default_chain_spec();
    CHECK_NOTHROW(cs.validate());
    CHECK(cs.divergent());  // Σ 1/(j+1) over 40 beads ≈ 3.3
    cs.beads = 5;
    cs.radii = inverse_sqrt_radii(5);
    CHECK_FALSE(cs.divergent());
    cs.radii[2] = 1.5;
    CHECK_THROWS_AS(cs.validate(), ParameterError);
    cs.radii[2] = 0.5;
    cs.bead_nodes = 1;
    CHECK_THROWS_AS(cs.validate(), ParameterError);
    cs.bead_nodes = 2;
    cs.neck_ratio = 0.0;
    CHECK_THROWS_AS(cs.validate(), ParameterError);
}

TEST_CASE("documents dispatch to the builders")
{
    const auto a = load_base(R"({"type": "arc", "L": 3.141592653589793, "n": 3})");
    const auto b = build_arc(kPi, 3);
    CHECK((a.stiffness - b.stiffness).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.mass - b.mass).cwiseAbs().maxCoeff() == 0.0);

    const auto cap = load_base(R"({"type": "cap", "d": 3, "theta0": 1.0, "n": 5, "b": 0.25})");
    CHECK(cap.drift == 0.25);

    const auto chain = load_base(R"({"type": "chain", "beads": 3, "bead_nodes": 2, "anchor_nodes": 2})");
    CHECK(chain.size() == 8);
}

TEST_CASE("explicit two-node graph assembles by definition")
{
    const auto g = load_base(
        R"({"type": "graph", "mass": [1, 1], "edges": [[0, 1, 1.0]], "dirichlet_leak": [1, 1]})");
    Eigen::MatrixXd expected(2, 2);
    expected << 2, -1, -1, 2;
    CHECK((g.stiffness - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.drift == 0.0);
}

TEST_CASE("each broken document raises its own named error")
{
    CHECK(kind_of(R"({"type": "graph", "mass": [1, 0], "edges": [[0, 1, 1]], "dirichlet_leak": [1, 1]})") ==
          Kind::NonPositiveMass);
    CHECK(kind_of(R"({"type": "graph", "mass": [1, 1], "stiffness": [[2, -1], [-0.5, 2]]})") ==
          Kind::AsymmetricStiffness);
    CHECK(kind_of(R"({"type": "graph", "mass": [1, 1], "stiffness": [[2, 1], [1, 2]]})") ==
          Kind::PositiveOffDiagonal);
    CHECK(kind_of(R"({"type": "graph", "mass": [1, 1], "edges": [[0, 1, 1]]})") == Kind::NotPositiveDefinite);
    CHECK(kind_of(R"({"type": "arc", "n": 3})") == Kind::Schema);
    CHECK(kind_of(R"({"type": "torus"})") == Kind::Schema);
    CHECK(kind_of("not json") == Kind::Schema);
    CHECK(kind_of(R"({"type": "graph", "mass": [1, 2], "edges": [[0, 1, 1]], "dirichlet_leak": [1, 1],
                      "symmetry": [1, 0]})") == Kind::BadSymmetry);
    CHECK(kind_of(R"({"type": "cap", "d": 4, "theta0": 3.2, "n": 4})") == Kind::ComplementPolar);
}

TEST_CASE("builder outputs satisfy the structural invariants")
{
    for (Index n : {1, 2, 7, 30}) {
        check_structure(build_arc(1.0 + 0.1 * n, n));
        check_structure(build_cap(3, 1.2, n));
    }
    check_structure(build_chain(default_chain_spec(), 4));
}
