#include "cylmartin/base_domain.hpp"

#include "cylmartin/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace cylmartin {

namespace {

using json = nlohmann::json;

// Adds a conductance between nodes i and j of a stiffness matrix.
void add_edge(Eigen::MatrixXd& k, Index i, Index j, double c)
{
    k(i, i) += c;
    k(j, j) += c;
    k(i, j) -= c;
    k(j, i) -= c;
}

Index nearest_node(const std::vector<NodeLabel>& labels, double position)
{
    Index best = 0;
    for (Index i = 1; i < static_cast<Index>(labels.size()); ++i) {
        if (std::abs(labels[i].position - position) < std::abs(labels[best].position - position))
            best = i;
    }
    return best;
}

}  // namespace

bool BaseOperator::is_tridiagonal() const
{
    const Index n = size();
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i)
            if (std::abs(i - j) > 1 && stiffness(i, j) != 0.0)
                return false;
    return true;
}

void validate(const BaseOperator& base)
{
    using K = ValidationError::Kind;
    const Index n = base.size();
    if (n < 1)
        throw ValidationError(K::Schema, "base has no interior nodes");
    if (base.stiffness.rows() != n || base.stiffness.cols() != n)
        throw ValidationError(K::Schema, "stiffness is not " + std::to_string(n) + "x" + std::to_string(n));
    if (base.dimension < 2)
        throw ValidationError(K::Schema, "ambient dimension must be >= 2");
    if (!std::isfinite(base.drift))
        throw ValidationError(K::Schema, "drift must be finite");
    if (base.reference < 0 || base.reference >= n)
        throw ValidationError(K::Schema, "reference node out of range");
    if (!base.labels.empty() && static_cast<Index>(base.labels.size()) != n)
        throw ValidationError(K::Schema, "label count does not match node count");

    for (Index i = 0; i < n; ++i) {
        if (!(base.mass(i) > 0.0) || !std::isfinite(base.mass(i)))
            throw ValidationError(K::NonPositiveMass, "mass[" + std::to_string(i) + "] = " + std::to_string(base.mass(i)));
    }
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            if (!std::isfinite(base.stiffness(i, j)))
                throw ValidationError(K::Schema, "non-finite stiffness entry");
            if (base.stiffness(i, j) != base.stiffness(j, i))
                throw ValidationError(K::AsymmetricStiffness,
                                      "entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
            if (i != j && base.stiffness(i, j) > 0.0)
                throw ValidationError(K::PositiveOffDiagonal,
                                      "entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }
    if (base.symmetry) {
        const auto& sigma = *base.symmetry;
        if (static_cast<Index>(sigma.size()) != n)
            throw ValidationError(K::BadSymmetry, "permutation length mismatch");
        for (Index i = 0; i < n; ++i) {
            if (sigma[i] < 0 || sigma[i] >= n || sigma[sigma[i]] != i)
                throw ValidationError(K::BadSymmetry, "not an involution at node " + std::to_string(i));
        }
        for (Index j = 0; j < n; ++j) {
            if (base.mass(sigma[j]) != base.mass(j))
                throw ValidationError(K::BadSymmetry, "mass not invariant at node " + std::to_string(j));
            for (Index i = 0; i < n; ++i)
                if (base.stiffness(sigma[i], sigma[j]) != base.stiffness(i, j))
                    throw ValidationError(K::BadSymmetry, "stiffness not invariant");
        }
    }
    // Positive definite iff the Dirichlet complement is felt somewhere.
    Eigen::LLT<Eigen::MatrixXd> llt(base.stiffness);
    if (llt.info() != Eigen::Success)
        throw ValidationError(K::NotPositiveDefinite,
                              "stiffness is singular or indefinite (no Dirichlet boundary reached)");
}

BaseOperator build_arc(double length, Index nodes)
{
    if (!(length > 0.0) || !(length < 2.0 * std::numbers::pi))
        throw ParameterError("arc length must lie in (0, 2π)");
    if (nodes < 1)
        throw ParameterError("arc needs at least one interior node");

    const double h = length / static_cast<double>(nodes + 1);
    BaseOperator base;
    base.kind = "arc";
    base.dimension = 2;
    base.drift = 0.0;
    base.stiffness = Eigen::MatrixXd::Zero(nodes, nodes);
    base.mass = Eigen::VectorXd::Constant(nodes, h);
    base.labels.resize(nodes);
    for (Index i = 0; i < nodes; ++i) {
        base.stiffness(i, i) = 2.0 / h;
        if (i + 1 < nodes) {
            base.stiffness(i, i + 1) = -1.0 / h;
            base.stiffness(i + 1, i) = -1.0 / h;
        }
        base.labels[i].position = static_cast<double>(i + 1) * h;
    }
    std::vector<Index> sigma(nodes);
    for (Index i = 0; i < nodes; ++i)
        sigma[i] = nodes - 1 - i;
    base.symmetry = std::move(sigma);
    base.reference = nearest_node(base.labels, 0.5 * length);
    return base;
}

BaseOperator build_cap(int dimension, double half_angle, Index nodes)
{
    if (dimension < 2)
        throw ParameterError("cap dimension must be >= 2");
    if (!(half_angle > 0.0))
        throw ParameterError("cap half-angle must be positive");
    if (half_angle >= std::numbers::pi)
        throw ValidationError(ValidationError::Kind::ComplementPolar,
                              "cap half-angle >= π leaves a polar complement; λ₁ would vanish");
    if (nodes < 1)
        throw ParameterError("cap needs at least one node");

    if (dimension == 2) {
        // sin^0 θ = 1: the cap is the arc (−θ₀, θ₀).
        BaseOperator arc = build_arc(2.0 * half_angle, nodes);
        arc.kind = "cap";
        for (auto& label : arc.labels)
            label.position -= half_angle;
        return arc;
    }

    const double h = half_angle / (static_cast<double>(nodes) + 0.5);
    const int power = dimension - 2;
    auto weight = [power](double theta) { return std::pow(std::sin(theta), power); };

    BaseOperator base;
    base.kind = "cap";
    base.dimension = dimension;
    base.drift = static_cast<double>(dimension - 2);
    base.stiffness = Eigen::MatrixXd::Zero(nodes, nodes);
    base.mass.resize(nodes);
    base.labels.resize(nodes);
    for (Index i = 0; i < nodes; ++i) {
        const double theta = (static_cast<double>(i) + 0.5) * h;
        base.mass(i) = weight(theta) * h;
        base.labels[i].position = theta;
        // Face between node i and i+1 (or the Dirichlet ghost at θ₀).
        const double face = weight(static_cast<double>(i + 1) * h) / h;
        if (i + 1 < nodes)
            add_edge(base.stiffness, i, i + 1, face);
        else
            base.stiffness(i, i) += face;
    }
    base.reference = 0;
    return base;
}

bool ChainSpec::divergent() const
{
    double sum = 0.0;
    for (double r : radii)
        sum += r * r;
    return sum > divergence_threshold;
}

void ChainSpec::validate() const
{
    if (beads < 1)
        throw ParameterError("chain needs at least one bead");
    if (static_cast<int>(radii.size()) != beads)
        throw ParameterError("chain radii count must equal the bead count");
    for (double r : radii)
        if (!(r > 0.0) || r > 1.0)
            throw ParameterError("chain radii must lie in (0, 1]");
    if (bead_nodes < 2)
        throw ParameterError("chain beads need at least two nodes");
    if (!(neck_ratio > 0.0) || neck_ratio > 1.0)
        throw ParameterError("chain neck ratio must lie in (0, 1]");
    if (anchor_nodes < 1)
        throw ParameterError("chain anchor needs at least one node");
}

std::vector<double> inverse_sqrt_radii(int beads)
{
    std::vector<double> radii(static_cast<std::size_t>(std::max(beads, 0)));
    for (int j = 1; j <= beads; ++j)
        radii[j - 1] = 1.0 / std::sqrt(static_cast<double>(j + 1));
    return radii;
}

ChainSpec default_chain_spec()
{
    ChainSpec spec;
    spec.radii = inverse_sqrt_radii(spec.beads);
    return spec;
}

BaseOperator build_chain(const ChainSpec& spec, int dimension)
{
    spec.validate();
    if (dimension < 2)
        throw ParameterError("chain dimension must be >= 2");

    struct Block {
        double step;
        int count;
        int group;
    };
    std::vector<Block> blocks;
    blocks.push_back({1.0 / spec.anchor_nodes, spec.anchor_nodes, 0});
    for (int j = 1; j <= spec.beads; ++j)
        blocks.push_back({spec.radii[j - 1] / spec.bead_nodes, spec.bead_nodes, j});

    Index n = 0;
    for (const auto& b : blocks)
        n += b.count;

    BaseOperator base;
    base.kind = "chain";
    base.dimension = dimension;
    base.drift = static_cast<double>(dimension - 2);
    base.stiffness = Eigen::MatrixXd::Zero(n, n);
    base.mass.resize(n);
    base.labels.resize(n);

    Index node = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const Block& block = blocks[b];
        const double conductance = 1.0 / block.step;
        for (int k = 0; k < block.count; ++k, ++node) {
            base.mass(node) = block.step;
            base.labels[node].position = (k + 1) * block.step;
            base.labels[node].group = block.group;
            base.labels[node].tag = block.group == 0 ? "anchor" : "bead" + std::to_string(block.group);
            if (k + 1 < block.count)
                add_edge(base.stiffness, node, node + 1, conductance);
        }
        const Index last = node - 1;
        if (b + 1 < blocks.size()) {
            const double next = 1.0 / blocks[b + 1].step;
            add_edge(base.stiffness, last, last + 1, spec.neck_ratio * std::min(conductance, next));
        }
    }
    base.stiffness(0, 0) += 1.0 / blocks.front().step;
    base.stiffness(n - 1, n - 1) += 1.0 / blocks.back().step;
    base.reference = 0;
    return base;
}

Index bead_center(const ChainSpec& spec, int bead)
{
    if (bead < 1 || bead > spec.beads)
        throw ParameterError("bead index out of range");
    return spec.anchor_nodes + static_cast<Index>(bead - 1) * spec.bead_nodes + spec.bead_nodes / 2;
}

BaseOperator build_graph(Index nodes, const std::vector<GraphEdge>& edges, const std::vector<double>& mass,
                         const std::vector<double>& leak, int dimension, std::optional<double> drift)
{
    using K = ValidationError::Kind;
    if (nodes < 1)
        throw ValidationError(K::Schema, "graph needs at least one node");
    if (static_cast<Index>(mass.size()) != nodes)
        throw ValidationError(K::Schema, "mass length must equal node count");
    if (!leak.empty() && static_cast<Index>(leak.size()) != nodes)
        throw ValidationError(K::Schema, "dirichlet_leak length must equal node count");

    BaseOperator base;
    base.kind = "graph";
    base.dimension = dimension;
    base.drift = drift.value_or(static_cast<double>(dimension - 2));
    base.stiffness = Eigen::MatrixXd::Zero(nodes, nodes);
    base.mass = Eigen::Map<const Eigen::VectorXd>(mass.data(), nodes);
    base.labels.resize(nodes);
    for (Index i = 0; i < nodes; ++i)
        base.labels[i].position = static_cast<double>(i);
    for (const auto& e : edges) {
        if (e.from < 0 || e.from >= nodes || e.to < 0 || e.to >= nodes || e.from == e.to)
            throw ValidationError(K::Schema, "edge endpoint out of range or self-loop");
        if (e.conductance < 0.0)
            throw ValidationError(K::PositiveOffDiagonal, "negative conductance on an edge");
        add_edge(base.stiffness, e.from, e.to, e.conductance);
    }
    for (std::size_t i = 0; i < leak.size(); ++i) {
        if (leak[i] < 0.0)
            throw ValidationError(K::Schema, "dirichlet_leak must be nonnegative");
        base.stiffness(static_cast<Index>(i), static_cast<Index>(i)) += leak[i];
    }
    return base;
}

namespace {

template <typename T>
T required(const json& doc, const char* key)
{
    if (!doc.contains(key))
        throw ValidationError(ValidationError::Kind::Schema, std::string("missing field \"") + key + "\"");
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(ValidationError::Kind::Schema, std::string("field \"") + key + "\": " + e.what());
    }
}

BaseOperator graph_from_json(const json& doc)
{
    using K = ValidationError::Kind;
    const int d = doc.value("d", 2);
    std::optional<double> drift;
    if (doc.contains("b"))
        drift = required<double>(doc, "b");
    const auto mass = required<std::vector<double>>(doc, "mass");
    const Index n = static_cast<Index>(mass.size());

    BaseOperator base;
    if (doc.contains("stiffness")) {
        const auto rows = required<std::vector<std::vector<double>>>(doc, "stiffness");
        if (static_cast<Index>(rows.size()) != n)
            throw ValidationError(K::Schema, "stiffness row count must equal node count");
        base = build_graph(n, {}, mass, {}, d, drift);
        for (Index i = 0; i < n; ++i) {
            if (static_cast<Index>(rows[i].size()) != n)
                throw ValidationError(K::Schema, "stiffness must be square");
            for (Index j = 0; j < n; ++j)
                base.stiffness(i, j) = rows[i][j];
        }
        if (doc.contains("dirichlet_leak")) {
            const auto leak = required<std::vector<double>>(doc, "dirichlet_leak");
            if (static_cast<Index>(leak.size()) != n)
                throw ValidationError(K::Schema, "dirichlet_leak length must equal node count");
            for (Index i = 0; i < n; ++i)
                base.stiffness(i, i) += leak[i];
        }
    } else {
        std::vector<GraphEdge> edges;
        for (const auto& e : required<json>(doc, "edges")) {
            if (!e.is_array() || e.size() != 3)
                throw ValidationError(K::Schema, "each edge must be [i, j, conductance]");
            edges.push_back({e[0].get<Index>(), e[1].get<Index>(), e[2].get<double>()});
        }
        std::vector<double> leak;
        if (doc.contains("dirichlet_leak"))
            leak = required<std::vector<double>>(doc, "dirichlet_leak");
        base = build_graph(n, edges, mass, leak, d, drift);
    }
    if (doc.contains("symmetry"))
        base.symmetry = required<std::vector<Index>>(doc, "symmetry");
    if (doc.contains("reference"))
        base.reference = required<Index>(doc, "reference");
    return base;
}

}  // namespace

BaseOperator load_base(const std::string& document)
{
    using K = ValidationError::Kind;
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ValidationError(K::Schema, e.what());
    }
    if (!doc.is_object())
        throw ValidationError(K::Schema, "base document must be an object");
    const auto type = required<std::string>(doc, "type");

    BaseOperator base;
    if (type == "arc") {
        base = build_arc(required<double>(doc, "L"), required<Index>(doc, "n"));
        if (doc.contains("d"))
            base.dimension = required<int>(doc, "d");
    } else if (type == "cap") {
        base = build_cap(required<int>(doc, "d"), required<double>(doc, "theta0"), required<Index>(doc, "n"));
    } else if (type == "chain") {
        ChainSpec spec = default_chain_spec();
        spec.beads = doc.value("beads", spec.beads);
        spec.bead_nodes = doc.value("bead_nodes", spec.bead_nodes);
        spec.neck_ratio = doc.value("neck_ratio", spec.neck_ratio);
        spec.anchor_nodes = doc.value("anchor_nodes", spec.anchor_nodes);
        spec.divergence_threshold = doc.value("divergence_threshold", spec.divergence_threshold);
        spec.radii = doc.contains("radii") ? required<std::vector<double>>(doc, "radii")
                                           : inverse_sqrt_radii(spec.beads);
        base = build_chain(spec, doc.value("d", 4));
    } else if (type == "graph") {
        base = graph_from_json(doc);
    } else {
        throw ValidationError(K::Schema, "unknown base type \"" + type + "\"");
    }
    if (doc.contains("b"))
        base.drift = required<double>(doc, "b");
    validate(base);
    return base;
}

BaseOperator load_base_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot open base file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_base(buffer.str());
}

}  // namespace cylmartin
