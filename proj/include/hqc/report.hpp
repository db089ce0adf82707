#pragma once

#include <string>
#include <vector>

namespace hqc {

// One row per outer iteration of an envelope scheme.
struct SchemeReportRow {
    int outer = 0;
    int inner_iters = 0;
    double inner_residual = 0.0;
    double linf_change = 0.0;
    double mono_violation = 0.0;  // max over nodes of (u_n - u_{n-1}), clipped at 0
    double seconds = 0.0;
};

struct SchemeReport {
    std::vector<SchemeReportRow> rows;
    bool converged = true;   // false when an iteration cap was hit

    double max_mono_violation() const {
        double m = 0.0;
        for (const auto& r : rows) m = m < r.mono_violation ? r.mono_violation : m;
        return m;
    }
};

// CSV export, header "outer,inner_iters,inner_residual,linf_change,mono_violation,seconds".
void write_report_csv(const SchemeReport& rep, const std::string& path);

}  // namespace hqc
