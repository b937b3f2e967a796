#pragma once

#include <mlcp/tensor.hpp>

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace mlcp {

/// One solver sweep. `lagrangian_start` and `lagrangian` are both evaluated
/// with the multipliers of the start of the sweep, before and after the
/// primal updates.
struct TraceRow {
    std::size_t iter = 0;
    double inf_norm_diff = 0;
    double lagrangian = 0;
    double lagrangian_start = 0;
    double seconds = 0;
    std::vector<double> pair_objectives; ///< per active pair, weighted-norm objective after the sweep
    std::size_t strict_overrides = 0;
    // TRPCA only
    double e_l1 = std::numeric_limits<double>::quiet_NaN();
    double n_fro = std::numeric_limits<double>::quiet_NaN();
    double residual_fro = std::numeric_limits<double>::quiet_NaN();
};

struct RecoveryReport {
    DenseTensor recovered; ///< Z for completion, L for robust PCA
    DenseTensor sparse;    ///< E (robust PCA only)
    DenseTensor noise;     ///< N (robust PCA only)
    std::vector<TraceRow> trace;
    std::map<std::string, double> metrics;
    bool converged = false;
    std::size_t iterations = 0;
    double wall_seconds = 0;
    std::size_t subproblem_checks = 0;
    std::size_t subproblem_violations = 0; ///< filled only when descent checking is enabled
    std::vector<std::string> notes;    ///< informational, e.g. modelling choices in effect
    std::vector<std::string> warnings; ///< conditions the caller should surface
};

/// Columns: iter, inf_norm_diff, lagrangian, seconds (+ E_l1, N_fro,
/// residual_fro when `robust`). Numbers use 17 significant digits.
void write_trace_csv(std::ostream &os, const RecoveryReport &report, bool robust);
/// Same table without the wall-clock column, for run-to-run comparison.
void write_trace_csv_untimed(std::ostream &os, const RecoveryReport &report, bool robust);

} // namespace mlcp
