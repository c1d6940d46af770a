#pragma once

// Discrete Dirichlet operators on the base Σ of the cylinder ℝ×Σ.
//
// A base is a weighted graph: `stiffness` is the conductance matrix of the
// discrete -Δ_Σ with the Dirichlet boundary eliminated (boundary edges become
// diagonal leaks) and `mass` holds the lumped node weights. The generalized
// eigenproblem stiffness·φ = λ·diag(mass)·φ gives the Dirichlet spectrum, so
// the operator acting on node values is diag(mass)^{-1}·stiffness.

#include "cylmartin/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cylmartin {

struct NodeLabel {
    double position = 0.0;  // angle for arcs/caps, local coordinate for chains
    int group = 0;          // bead index for chains (0 = anchor), 0 otherwise
    std::string tag;
};

struct BaseOperator {
    std::string kind;  // "arc", "cap", "chain" or "graph"
    int dimension = 2;
    double drift = 0.0;
    Eigen::MatrixXd stiffness;
    Eigen::VectorXd mass;
    std::vector<NodeLabel> labels;
    // Involutive node permutation commuting with the operator, if declared.
    std::optional<std::vector<Index>> symmetry;
    Index reference = 0;

    Index size() const { return mass.size(); }

    // Node values of diag(mass)^{-1}·stiffness.
    Eigen::MatrixXd generator() const { return mass.cwiseInverse().asDiagonal() * stiffness; }

    bool is_tridiagonal() const;
};

// Checks every structural invariant of a BaseOperator and throws a named
// ValidationError on the first failure. Positive definiteness is checked with
// a Cholesky factorization of the symmetric stiffness.
void validate(const BaseOperator& base);

BaseOperator build_arc(double length, Index nodes);

// Geodesic cap of half-angle `half_angle` in S^{d-1}, reduced to the zonal
// Sturm–Liouville problem -(sin^{d-2}θ φ')' = λ sin^{d-2}θ φ on (0, θ₀).
// Nodes sit at θ_i = (i+½)h with h = θ₀/(n+½): the pole θ=0 is a face carrying
// no flux (ghost-node reflection) and θ₀ is a Dirichlet ghost node.
BaseOperator build_cap(int dimension, double half_angle, Index nodes);

struct ChainSpec {
    int beads = 40;
    std::vector<double> radii;  // r_1..r_J, 0 < r_j <= 1
    int bead_nodes = 2;
    double neck_ratio = 0.005;
    int anchor_nodes = 8;
    // Σ r_j² above this counts as a truncated divergent series.
    double divergence_threshold = 3.0;

    bool divergent() const;
    void validate() const;
};

// r_j = 1/sqrt(j+1), j = 1..beads.
std::vector<double> inverse_sqrt_radii(int beads);

ChainSpec default_chain_spec();

// Path graph: anchor block (unit length, `anchor_nodes` nodes) followed by the
// beads; each bead is a uniform segment of `bead_nodes` nodes with step r_j/m.
// Consecutive blocks are joined by a neck edge of conductance
// neck_ratio × min(adjacent intra-block conductances). Both path ends carry a
// Dirichlet leak.
BaseOperator build_chain(const ChainSpec& spec, int dimension);

// Node index of the center of bead j (1-based bead index).
Index bead_center(const ChainSpec& spec, int bead);

// Explicit weighted graph: edges (i, j, conductance > 0), node masses and
// nonnegative Dirichlet leaks added to the diagonal.
struct GraphEdge {
    Index from;
    Index to;
    double conductance;
};

BaseOperator build_graph(Index nodes, const std::vector<GraphEdge>& edges,
                         const std::vector<double>& mass, const std::vector<double>& leak,
                         int dimension, std::optional<double> drift = std::nullopt);

// Parses a JSON base-spec document (see README for the schema).
BaseOperator load_base(const std::string& document);
BaseOperator load_base_file(const std::string& path);

}  // namespace cylmartin
