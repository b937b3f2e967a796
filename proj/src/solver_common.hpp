#pragma once

#include <mlcp/pair_update.hpp>
#include <mlcp/report.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

namespace mlcp::detail {

inline std::vector<PairBlock> active_pairs(const DenseTensor &x, const SolverConfig &cfg) {
    const auto beta = cfg.resolved_beta(x.ndim());
    const auto all = mode_pairs(x.ndim());
    std::vector<PairBlock> out;
    for (std::size_t p = 0; p < all.size(); ++p)
        if (beta[p] > 0) {
            out.push_back(make_pair_block(x, all[p], beta[p]));
            out.back().sigma = fourier_singular_values(out.back().aux, cfg.exec);
        }
    return out;
}

// ||a - b + c/s||_F^2 without temporaries.
inline double coupling_sq(const DenseTensor &a, const DenseTensor &b, const DenseTensor &c, double s) {
    double sum = 0;
    for (std::size_t i = 0; i < a.numel(); ++i) {
        const double d = a[i] - b[i] + c[i] / s;
        sum += d * d;
    }
    return sum;
}

inline double dist_sq(const DenseTensor &a, const DenseTensor &b) {
    double sum = 0;
    for (std::size_t i = 0; i < a.numel(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

constexpr double kSubproblemSlack = 1e-9;

inline void tally(RecoveryReport *report, double before, double after) {
    if (!report)
        return;
    ++report->subproblem_checks;
    if (after > before + kSubproblemSlack * std::max(1.0, std::abs(before)))
        ++report->subproblem_violations;
}

inline void apply_step(PairBlock &block, PairStep &&step) {
    block.aux = std::move(step.aux);
    block.weights.W = std::move(step.W);
    block.weights.lambda_bar = std::move(step.lambda_bar);
    block.sigma = std::move(step.sigma);
}

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

} // namespace mlcp::detail
