// cylmartin: spectra, Green's functions, Martin kernels and verification
// sweeps for L = ∂²ᵤ + b∂ᵤ + Δ_Σ on cylinders over discrete bases.

#include "cylmartin/base_domain.hpp"
#include "cylmartin/cylinder.hpp"
#include "cylmartin/errors.hpp"
#include "cylmartin/probab.hpp"
#include "cylmartin/report_io.hpp"
#include "cylmartin/spectral.hpp"
#include "cylmartin/verifiers.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace cylmartin;
using nlohmann::ordered_json;

namespace {

struct RunConfig {
    std::string base_path;
    std::string out_dir = "out";
    std::vector<std::string> suites{"all"};
    std::uint64_t seed = SuiteConfig{}.seed;
    std::size_t samples = SuiteConfig{}.samples;
    double tolerance = SuiteConfig{}.exact_tolerance;
    double rate_tolerance = SuiteConfig{}.rate_tolerance;
    bool per_sample = false;
    bool eigenvectors = false;

    // green
    std::string points_path;
    std::string pole;  // "v,node"
    bool martin = false;

    // converge
    double v_min = 2.0;
    double v_max = 40.0;
    double v_step = 2.0;
    std::string precision = "extended";

    // chain-demo
    int beads = default_chain_spec().beads;
    double neck_ratio = default_chain_spec().neck_ratio;
    int bead_nodes = default_chain_spec().bead_nodes;
    int anchor_nodes = default_chain_spec().anchor_nodes;
    int dimension = 4;
    double t0 = 1.0;
    double lambda = 0.0;
    double alpha_tolerance = 0.1;

    // chernoff
    std::string atoms_path;
    double L = 2.0;
    double eps = 0.01;
};

std::string timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

// Outputs are staged in memory and only written once the command succeeded,
// so an invalid input never leaves partial files behind.
class Outputs {
public:
    explicit Outputs(std::string dir) : dir_(std::move(dir)) {}

    std::ostream& file(const std::string& name)
    {
        files_.emplace_back(name, std::make_unique<std::ostringstream>());
        return *files_.back().second;
    }

    void commit() const
    {
        fs::create_directories(dir_);
        for (const auto& [name, body] : files_) {
            std::ofstream out(fs::path(dir_) / name, std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot write " + (fs::path(dir_) / name).string());
            out << body->str();
        }
    }

private:
    std::string dir_;
    std::vector<std::pair<std::string, std::unique_ptr<std::ostringstream>>> files_;
};

ordered_json metadata(const RunConfig& cfg, const std::string& command)
{
    ordered_json meta;
    meta["command"] = command;
    meta["seed"] = cfg.seed;
    meta["base"] = cfg.base_path;
    meta["generated"] = timestamp();
    return meta;
}

BaseOperator require_base(const RunConfig& cfg)
{
    if (cfg.base_path.empty())
        throw ParameterError("--base is required");
    return load_base_file(cfg.base_path);
}

int cmd_spectrum(const RunConfig& cfg)
{
    const BaseOperator base = require_base(cfg);
    const auto spec = decompose<double>(base);
    Outputs out(cfg.out_dir);
    write_spectrum_csv(out.file("spectrum.csv"), spec);
    if (cfg.eigenvectors)
        write_eigenvectors_csv(out.file("eigenvectors.csv"), spec);
    ordered_json meta = metadata(cfg, "spectrum");
    meta["kind"] = base.kind;
    meta["nodes"] = base.size();
    meta["dimension"] = base.dimension;
    meta["drift"] = base.drift;
    meta["lambda1"] = spec.lambda1();
    meta["alphaMin"] = spec.ladder.alpha_min;
    meta["alphaZero"] = spec.ladder.alpha_zero;
    meta["alphaMax"] = spec.ladder.alpha_max;
    meta["residual"] = max_relative_residual(base, spec);
    out.file("metadata.json") << meta.dump(2) << '\n';
    out.commit();
    std::cout << std::setprecision(12) << "lambda1 = " << spec.lambda1() << ", alphaMax = " << spec.ladder.alpha_max
              << '\n';
    return 0;
}

CylinderPoint parse_point(const std::string& text)
{
    std::string t = text;
    for (char& c : t)
        if (c == ',')
            c = ' ';
    std::istringstream in(t);
    CylinderPoint p;
    long node = 0;
    if (!(in >> p.u >> node))
        throw ParameterError("expected a point as 'u,node', got '" + text + "'");
    p.node = node;
    return p;
}

int cmd_green(const RunConfig& cfg)
{
    const BaseOperator base = require_base(cfg);
    if (cfg.points_path.empty() || cfg.pole.empty())
        throw ParameterError("green needs --points and --pole");
    std::ifstream pin(cfg.points_path);
    if (!pin)
        throw ParameterError("cannot open points file " + cfg.points_path);
    const auto points = read_points_csv(pin);
    const CylinderPoint pole = parse_point(cfg.pole);
    const auto ev = make_evaluator<double>(base);

    std::vector<KernelRow> rows;
    if (cfg.martin) {
        const MartinKernel<double> k(ev, pole);
        for (const auto& p : points) {
            const double lv = k.log_value(p);
            rows.push_back({p, pole, std::exp(lv), lv});
        }
    } else {
        for (const auto& p : points) {
            const double lv = ev.log_green(p, pole);
            rows.push_back({p, pole, std::exp(lv), lv});
        }
    }
    Outputs out(cfg.out_dir);
    write_kernel_csv(out.file(cfg.martin ? "martin.csv" : "green.csv"), rows);
    ordered_json meta = metadata(cfg, "green");
    meta["kernel"] = cfg.martin ? "martin" : "green";
    meta["points"] = rows.size();
    out.file("metadata.json") << meta.dump(2) << '\n';
    out.commit();
    return 0;
}

template <typename Scalar>
VerificationReport converge_report(const BaseOperator& base, const RunConfig& cfg)
{
    const auto ev = make_evaluator<Scalar>(base);
    std::vector<double> poles;
    for (double v = cfg.v_min; v <= cfg.v_max + 1e-9; v += cfg.v_step)
        poles.push_back(v);
    // u ∈ [−2, 2] step ½, at most 32 nodes per slice.
    const Index stride = std::max<Index>(1, base.size() / 32);
    std::vector<CylinderPoint> probe;
    for (int s = -4; s <= 4; ++s)
        for (Index i = 0; i < base.size(); i += stride)
            probe.push_back({0.5 * s, i});
    return check_convergence_to_f_plus(ev, poles, base.reference, probe, cfg.rate_tolerance);
}

int cmd_converge(const RunConfig& cfg)
{
    const BaseOperator base = require_base(cfg);
    if (!(cfg.v_step > 0.0) || cfg.v_max < cfg.v_min)
        throw ParameterError("converge: pole grid is empty");
    VerificationReport rep;
    if (cfg.precision == "double")
        rep = converge_report<double>(base, cfg);
    else if (cfg.precision == "extended")
        rep = converge_report<Extended>(base, cfg);
    else
        throw ParameterError("--precision must be 'double' or 'extended'");
    rep.seed = cfg.seed;
    Outputs out(cfg.out_dir);
    write_report_csv(out.file("converge.csv"), rep);
    ordered_json config = metadata(cfg, "converge");
    config["precision"] = cfg.precision;
    config["poles"] = {cfg.v_min, cfg.v_max, cfg.v_step};
    out.file("summary.json") << reports_json({rep}, config.dump());
    out.commit();
    std::cout << report_json(rep) << '\n';
    return rep.passed() ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg)
{
    const BaseOperator base = require_base(cfg);
    const auto ev = make_evaluator<double>(base);
    SuiteConfig sc;
    sc.seed = cfg.seed;
    sc.samples = cfg.samples;
    sc.exact_tolerance = cfg.tolerance;
    sc.rate_tolerance = cfg.rate_tolerance;
    const auto reports = run_suite(ev, cfg.suites, sc);

    Outputs out(cfg.out_dir);
    ordered_json config = metadata(cfg, "verify");
    config["suites"] = cfg.suites;
    config["samples"] = cfg.samples;
    config["tolerance"] = cfg.tolerance;
    config["rateTolerance"] = cfg.rate_tolerance;
    out.file("verify.json") << reports_json(reports, config.dump());
    bool ok = true;
    for (const auto& r : reports) {
        if (cfg.per_sample)
            write_report_csv(out.file("samples_" + r.suite + ".csv"), r);
        ok = ok && r.passed();
        std::cout << (r.passed() ? "PASS " : "FAIL ") << r.suite << "  maxViolation=" << r.max_violation
                  << (r.message.empty() ? "" : "  (" + r.message + ")") << '\n';
    }
    out.commit();
    return ok ? 0 : 1;
}

int cmd_chain_demo(const RunConfig& cfg)
{
    ChainSpec cs = default_chain_spec();
    cs.beads = cfg.beads;
    cs.radii = inverse_sqrt_radii(cs.beads);
    cs.neck_ratio = cfg.neck_ratio;
    cs.bead_nodes = cfg.bead_nodes;
    cs.anchor_nodes = cfg.anchor_nodes;
    const BaseOperator base = build_chain(cs, cfg.dimension);
    const auto ev = make_evaluator<Extended>(base);
    const double b = base.drift;

    std::vector<Index> ys;
    for (int j = 1; j <= cs.beads; ++j)
        ys.push_back(bead_center(cs, j));
    auto small = check_small_time_ratio(ev.spectrum(), cfg.lambda, cfg.t0, base.reference, ys);
    auto limit = check_ratio_limit(ev.spectrum(), b, 1.0, 0.0, base.reference, ys);
    const std::vector<double> us{2.0, 3.0, 4.0, 5.0, 6.0};
    const auto fits = martin_exponents(ev, ys, base.reference, us);
    small.seed = limit.seed = cfg.seed;

    VerificationReport exps;
    exps.suite = "martin-exponent";
    exps.seed = cfg.seed;
    exps.tolerance = cfg.alpha_tolerance;
    exps.sample_count = fits.size();
    exps.columns = {"bead", "y", "alpha_hat", "alpha_zero"};
    const double alpha0 = -b / 2.0;
    for (std::size_t j = 0; j < fits.size(); ++j)
        exps.rows.push_back({double(j + 1), double(ys[j]), fits[j].slope, alpha0});
    exps.empirical_constant = fits.back().slope;
    exps.max_violation = std::abs(fits.back().slope - alpha0);
    exps.message = "axial window u in [2, 6]";

    Outputs out(cfg.out_dir);
    write_report_csv(out.file("small_time_ratio.csv"), small);
    write_report_csv(out.file("ratio_limit.csv"), limit);
    write_report_csv(out.file("martin_exponents.csv"), exps);
    ordered_json config = metadata(cfg, "chain-demo");
    config["beads"] = cs.beads;
    config["beadNodes"] = cs.bead_nodes;
    config["neckRatio"] = cs.neck_ratio;
    config["anchorNodes"] = cs.anchor_nodes;
    config["dimension"] = cfg.dimension;
    config["t0"] = cfg.t0;
    config["lambda"] = cfg.lambda;
    config["divergent"] = cs.divergent();
    out.file("summary.json") << reports_json({small, limit, exps}, config.dump());
    out.commit();

    bool ok = true;
    for (const auto* r : {&small, &limit, &exps}) {
        ok = ok && r->passed();
        std::cout << (r->passed() ? "PASS " : "FAIL ") << r->suite << "  maxViolation=" << r->max_violation
                  << '\n';
    }
    const double deep = small.rows.back()[2];
    const double fifth = small.rows[std::min<std::size_t>(4, small.rows.size() - 1)][2];
    const bool contrast = deep < 0.05 && deep <= 0.05 * fifth;
    std::cout << (contrast ? "PASS " : "FAIL ") << "deep-end small-time ratio " << deep << " (bead 5: " << fifth
              << ")\n";
    return ok && contrast ? 0 : 1;
}

int cmd_chernoff(const RunConfig& cfg)
{
    std::vector<double> a(20, 1.0);
    if (!cfg.atoms_path.empty()) {
        std::ifstream in(cfg.atoms_path);
        if (!in)
            throw ParameterError("cannot open atoms file " + cfg.atoms_path);
        a = read_atoms_csv(in);
    }
    const auto dist = exact_convolution(a);
    const double tail = tail_mass(dist, cfg.L);
    const double bound = best_chernoff_bound(a, cfg.L);
    const double A = chernoff_threshold(cfg.L, cfg.eps);
    double sum = 0.0;
    for (double x : a)
        sum += x;

    Outputs out(cfg.out_dir);
    write_distribution_csv(out.file("distribution.csv"), dist);
    ordered_json summary = metadata(cfg, "chernoff");
    summary["atoms"] = a.size();
    summary["sum"] = sum;
    summary["L"] = cfg.L;
    summary["eps"] = cfg.eps;
    summary["exactTail"] = tail;
    summary["bestChernoffBound"] = bound;
    summary["threshold"] = A;
    summary["thresholdBeta"] = chernoff_threshold_beta(cfg.L, cfg.eps);
    summary["sumExceedsThreshold"] = sum >= A;
    out.file("summary.json") << summary.dump(2) << '\n';
    out.commit();
    std::cout << std::setprecision(12) << "exact tail " << tail << ", Chernoff bound " << bound << ", A(L, eps) "
              << A << '\n';
    const bool ok = bound >= tail - 1e-12 && (sum < A || tail <= cfg.eps);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    RunConfig cfg;
    CLI::App app{"Green's functions and Martin kernels on cylinders over discrete bases"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--seed", cfg.seed, "sample seed (recorded in every output)");
    };

    auto* spectrum = app.add_subcommand("spectrum", "eigenpairs and exponent ladder of a base");
    spectrum->add_option("--base", cfg.base_path, "base spec (JSON)")->check(CLI::ExistingFile);
    spectrum->add_flag("--eigenvectors", cfg.eigenvectors, "also write every eigenvector");
    add_common(spectrum);

    auto* green = app.add_subcommand("green", "Green's function or Martin kernel at listed points");
    green->add_option("--base", cfg.base_path, "base spec (JSON)")->check(CLI::ExistingFile);
    green->add_option("--points", cfg.points_path, "CSV of u,node")->check(CLI::ExistingFile);
    green->add_option("--pole", cfg.pole, "pole as v,node");
    green->add_flag("--martin", cfg.martin, "normalize at the reference point");
    add_common(green);

    auto* converge = app.add_subcommand("converge", "K_(v,i0) against F+ as v grows");
    converge->add_option("--base", cfg.base_path, "base spec (JSON)")->check(CLI::ExistingFile);
    converge->add_option("--v-min", cfg.v_min, "first pole");
    converge->add_option("--v-max", cfg.v_max, "last pole");
    converge->add_option("--v-step", cfg.v_step, "pole spacing");
    converge->add_option("--precision", cfg.precision, "double or extended");
    converge->add_option("--rate-tolerance", cfg.rate_tolerance, "relative tolerance on the fitted rate");
    add_common(converge);

    auto* verify = app.add_subcommand("verify", "run verification suites");
    verify->add_option("--base", cfg.base_path, "base spec (JSON)")->check(CLI::ExistingFile);
    verify->add_option("--suite", cfg.suites, "suite names or 'all'")->delimiter(',');
    verify->add_option("--samples", cfg.samples, "samples per exactness suite");
    verify->add_option("--tolerance", cfg.tolerance, "exactness tolerance");
    verify->add_option("--rate-tolerance", cfg.rate_tolerance, "relative tolerance on fitted rates");
    verify->add_flag("--per-sample", cfg.per_sample, "write per-sample CSV tables");
    add_common(verify);

    auto* chain = app.add_subcommand("chain-demo", "small-time ratio, ratio limit and exponents on a bead chain");
    chain->add_option("--beads", cfg.beads, "number of beads");
    chain->add_option("--neck-ratio", cfg.neck_ratio, "neck conductance ratio");
    chain->add_option("--bead-nodes", cfg.bead_nodes, "nodes per bead");
    chain->add_option("--anchor-nodes", cfg.anchor_nodes, "nodes in the anchor block");
    chain->add_option("--dimension", cfg.dimension, "cylinder dimension d (b = d - 2)");
    chain->add_option("--t0", cfg.t0, "small-time horizon");
    chain->add_option("--lambda", cfg.lambda, "killing rate");
    add_common(chain);

    auto* chernoff = app.add_subcommand("chernoff", "exact convolution tail and Chernoff threshold");
    chernoff->add_option("--atoms", cfg.atoms_path, "one atom size per line")->check(CLI::ExistingFile);
    chernoff->add_option("--L", cfg.L, "interval length");
    chernoff->add_option("--eps", cfg.eps, "target tail");
    add_common(chernoff);

    CLI11_PARSE(app, argc, argv);

    try {
        if (spectrum->parsed())
            return cmd_spectrum(cfg);
        if (green->parsed())
            return cmd_green(cfg);
        if (converge->parsed())
            return cmd_converge(cfg);
        if (verify->parsed())
            return cmd_verify(cfg);
        if (chain->parsed())
            return cmd_chain_demo(cfg);
        if (chernoff->parsed())
            return cmd_chernoff(cfg);
    } catch (const ValidationError& e) {
        std::cerr << "invalid base: " << e.what() << '\n';
        return 2;
    } catch (const UnknownSuiteError& e) {
        std::cerr << "unknown suite: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
