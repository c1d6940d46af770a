#pragma once

// JSON summaries and CSV tables for reports and evaluated kernels.

#include "cylmartin/cylinder.hpp"
#include "cylmartin/verifiers.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cylmartin {

// JSON object text for one report. The per-sample table is not included.
std::string report_json(const VerificationReport& report, int indent = 2);

// JSON array of reports plus a config echo: {"config": ..., "reports": [...]}.
// `config_json` must itself be a JSON document.
std::string reports_json(const std::vector<VerificationReport>& reports, const std::string& config_json);

// The report's per-sample table as CSV (header = columns).
void write_report_csv(std::ostream& out, const VerificationReport& report);

// Rows "u,node" (header optional).
std::vector<CylinderPoint> read_points_csv(std::istream& in);

struct KernelRow {
    CylinderPoint point;
    CylinderPoint pole;
    double value;
    double log_value;
};

// "u,node,v,nodePole,value,logValue".
void write_kernel_csv(std::ostream& out, const std::vector<KernelRow>& rows);

}  // namespace cylmartin
