#include <mlcp/report.hpp>
#include <mlcp/solver_config.hpp>

#include <ostream>

namespace mlcp {
namespace {

void write_rows(std::ostream &os, const RecoveryReport &report, bool robust, bool timed) {
    os << "iter,inf_norm_diff,lagrangian";
    if (timed)
        os << ",seconds";
    if (robust)
        os << ",E_l1,N_fro,residual_fro";
    os << '\n';
    for (const TraceRow &r : report.trace) {
        os << r.iter << ',' << format_double(r.inf_norm_diff) << ',' << format_double(r.lagrangian);
        if (timed)
            os << ',' << format_double(r.seconds);
        if (robust)
            os << ',' << format_double(r.e_l1) << ',' << format_double(r.n_fro) << ','
               << format_double(r.residual_fro);
        os << '\n';
    }
}

} // namespace

void write_trace_csv(std::ostream &os, const RecoveryReport &report, bool robust) {
    write_rows(os, report, robust, true);
}

void write_trace_csv_untimed(std::ostream &os, const RecoveryReport &report, bool robust) {
    write_rows(os, report, robust, false);
}

} // namespace mlcp
