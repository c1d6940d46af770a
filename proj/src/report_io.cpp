#include "cylmartin/report_io.hpp"

#include "cylmartin/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace cylmartin {

namespace {

using nlohmann::ordered_json;

// JSON has no infinities; they are written as strings.
ordered_json number(double x)
{
    if (std::isfinite(x))
        return x;
    if (std::isnan(x))
        return "nan";
    return x > 0 ? "inf" : "-inf";
}

ordered_json to_json(const VerificationReport& r)
{
    ordered_json j;
    j["suite"] = r.suite;
    j["status"] = r.status;
    j["passed"] = r.passed();
    j["seed"] = r.seed;
    j["sampleCount"] = r.sample_count;
    j["maxViolation"] = number(r.max_violation);
    j["tolerance"] = number(r.tolerance);
    j["empiricalConstant"] = r.empirical_constant ? number(*r.empirical_constant) : ordered_json(nullptr);
    if (r.fitted_rate) {
        const auto& f = *r.fitted_rate;
        j["fittedRate"] = {{"value", number(f.value)},
                           {"expected", number(f.expected)},
                           {"relativeDeviation", number(f.relative_deviation)},
                           {"window", {number(f.window_lo), number(f.window_hi)}}};
    } else {
        j["fittedRate"] = nullptr;
    }
    if (!r.message.empty())
        j["message"] = r.message;
    return j;
}

}  // namespace

std::string report_json(const VerificationReport& report, int indent)
{
    return to_json(report).dump(indent);
}

std::string reports_json(const std::vector<VerificationReport>& reports, const std::string& config_json)
{
    ordered_json doc;
    doc["config"] = ordered_json::parse(config_json);
    doc["reports"] = ordered_json::array();
    for (const auto& r : reports)
        doc["reports"].push_back(to_json(r));
    return doc.dump(2) + "\n";
}

void write_report_csv(std::ostream& out, const VerificationReport& report)
{
    for (std::size_t c = 0; c < report.columns.size(); ++c)
        out << (c ? "," : "") << report.columns[c];
    out << '\n' << std::setprecision(17);
    for (const auto& row : report.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << row[c];
        out << '\n';
    }
}

std::vector<CylinderPoint> read_points_csv(std::istream& in)
{
    std::vector<CylinderPoint> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#')
            continue;
        for (char& ch : line)
            if (ch == ',')
                ch = ' ';
        std::istringstream fields(line);
        double u = 0.0;
        long node = 0;
        if (!(fields >> u >> node)) {
            if (lineno == 1)
                continue;  // header
            throw ParameterError("points file line " + std::to_string(lineno) + ": expected u,node");
        }
        out.push_back({u, static_cast<Index>(node)});
    }
    return out;
}

void write_kernel_csv(std::ostream& out, const std::vector<KernelRow>& rows)
{
    out << "u,node,v,nodePole,value,logValue\n" << std::setprecision(17);
    for (const auto& r : rows)
        out << r.point.u << ',' << r.point.node << ',' << r.pole.u << ',' << r.pole.node << ',' << r.value << ','
            << r.log_value << '\n';
}

}  // namespace cylmartin
