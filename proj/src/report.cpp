#include "hqc/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hqc {

void write_report_csv(const SchemeReport& rep, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_report_csv: cannot open " + path);
    os << "outer,inner_iters,inner_residual,linf_change,mono_violation,seconds\n";
    char buf[200];
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g,%.6f\n", r.outer,
                      r.inner_iters, r.inner_residual, r.linf_change, r.mono_violation,
                      r.seconds);
        os << buf;
    }
}

}  // namespace hqc
