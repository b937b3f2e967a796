#include <mlcp/lrtc.hpp>

#include "solver_common.hpp"

namespace mlcp {

LrtcState lrtc_init(const DenseTensor &T, const SamplingMask &omega, const SolverConfig &cfg) {
    cfg.validate(T.ndim());
    if (omega.shape != T.shape())
        throw InvalidArgument("mask shape " + shape_to_string(omega.shape) + " does not match tensor shape " +
                              shape_to_string(T.shape()));
    LrtcState s;
    s.T = T;
    s.omega = omega;
    s.Z = DenseTensor(T.shape());
    for (std::size_t i = 0; i < T.numel(); ++i)
        if (omega[i]) {
            if (!std::isfinite(T[i]))
                throw InvalidArgument("observed entry " + std::to_string(i) + " is not finite");
            s.Z[i] = T[i];
        }
    s.pairs = detail::active_pairs(s.Z, cfg);
    s.mu = cfg.mu0;
    s.rho = cfg.rho0;
    return s;
}

PairStep update_M_pair(const LrtcState &state, std::size_t index, const SolverConfig &cfg) {
    const PairBlock &b = state.pairs.at(index);
    return low_rank_pair_step(b, unfold_mode_pair(state.Z, b.pair), state.mu, state.rho, cfg);
}

DenseTensor update_Z(const LrtcState &state) {
    const Shape &shape = state.Z.shape();
    DenseTensor num = state.Z * state.rho;
    for (const PairBlock &b : state.pairs) {
        DenseTensor term = b.aux * state.mu;
        term -= b.multiplier;
        num += fold_mode_pair(term, b.pair, shape);
    }
    const double den = double(state.pairs.size()) * state.mu + state.rho;
    DenseTensor z(shape);
    for (std::size_t i = 0; i < z.numel(); ++i)
        z[i] = state.omega[i] ? state.T[i] : num[i] / den;
    return z;
}

DenseTensor update_multiplier_Q(const PairBlock &block, const DenseTensor &z_unfolded, double mu) {
    require_same_shape(block.aux, z_unfolded, "update_multiplier_Q");
    DenseTensor q = z_unfolded;
    q -= block.aux;
    q *= mu;
    q += block.multiplier;
    return q;
}

double lrtc_lagrangian(const LrtcState &state, const SolverConfig &cfg) {
    double total = 0;
    for (const PairBlock &b : state.pairs) {
        const double pen = pair_penalty(b.sigma, b.weights, cfg.gamma, cfg.epsilon);
        const double cpl = detail::coupling_sq(unfold_mode_pair(state.Z, b.pair), b.aux, b.multiplier, state.mu);
        total += b.beta * (pen + state.mu / 2 * cpl);
    }
    return total;
}

TraceRow lrtc_sweep(LrtcState &state, const SolverConfig &cfg, RecoveryReport *report) {
    TraceRow row;
    row.iter = state.iter + 1;
    row.lagrangian_start = lrtc_lagrangian(state, cfg);
    RecoveryReport *checks = cfg.check_descent ? report : nullptr;

    for (std::size_t p = 0; p < state.pairs.size(); ++p) {
        PairStep step = update_M_pair(state, p, cfg);
        row.strict_overrides += step.strict_overrides;
        detail::tally(checks, step.w_before, step.w_after);
        detail::tally(checks, step.lb_before, step.lb_after);
        detail::tally(checks, step.aux_before, step.aux_after);
        detail::apply_step(state.pairs[p], std::move(step));
    }

    DenseTensor z = update_Z(state);
    std::vector<DenseTensor> zu;
    zu.reserve(state.pairs.size());
    for (const PairBlock &b : state.pairs)
        zu.push_back(unfold_mode_pair(z, b.pair));
    if (checks) {
        double before = 0, after = 0;
        for (std::size_t p = 0; p < state.pairs.size(); ++p) {
            const PairBlock &b = state.pairs[p];
            before += state.mu / 2 * detail::coupling_sq(unfold_mode_pair(state.Z, b.pair), b.aux, b.multiplier,
                                                         state.mu);
            after += state.mu / 2 * detail::coupling_sq(zu[p], b.aux, b.multiplier, state.mu);
        }
        after += state.rho / 2 * detail::dist_sq(z, state.Z);
        detail::tally(checks, before, after);
    }
    row.inf_norm_diff = max_abs_diff(z, state.Z);
    state.Z = std::move(z);
    row.lagrangian = lrtc_lagrangian(state, cfg);
    for (const PairBlock &b : state.pairs)
        row.pair_objectives.push_back(pair_penalty(b.sigma, b.weights, cfg.gamma, cfg.epsilon));

    for (std::size_t p = 0; p < state.pairs.size(); ++p)
        state.pairs[p].multiplier = update_multiplier_Q(state.pairs[p], zu[p], state.mu);
    state.mu *= cfg.growth;
    state.rho *= cfg.growth;
    ++state.iter;
    return row;
}

RecoveryReport lrtc_solve(const DenseTensor &T, const SamplingMask &omega, const SolverConfig &cfg) {
    detail::Stopwatch clock;
    LrtcState state = lrtc_init(T, omega, cfg);
    RecoveryReport report;
    if (cfg.max_iter == 0)
        report.warnings.push_back("max_iter is 0: returning the initialization");
    if (omega.count() == 0)
        report.warnings.push_back("mask observes no entries");
    for (int k = 0; k < cfg.max_iter; ++k) {
        TraceRow row = lrtc_sweep(state, cfg, &report);
        row.seconds = clock.seconds();
        const bool done = row.inf_norm_diff <= cfg.tol;
        report.trace.push_back(std::move(row));
        if (done) {
            report.converged = true;
            break;
        }
    }
    if (report.converged && state.iter == 1 && report.trace.front().inf_norm_diff == 0 &&
        omega.count() < omega.observed.size())
        report.warnings.push_back("missing entries never moved from zero: the shrink removed every singular value; "
                                  "a larger epsilon or mu0 suits data of this scale");
    report.iterations = state.iter;
    report.recovered = std::move(state.Z);
    report.wall_seconds = clock.seconds();
    return report;
}

} // namespace mlcp
