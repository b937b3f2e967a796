#include <mlcp/trpca.hpp>

#include "solver_common.hpp"

namespace mlcp {

TrpcaState trpca_init(const DenseTensor &T, const SolverConfig &cfg) {
    cfg.validate(T.ndim());
    if (!all_finite(T))
        throw InvalidArgument("trpca: input contains non-finite entries");
    TrpcaState s;
    s.T = T;
    s.L = T;
    s.E = DenseTensor(T.shape());
    s.N = DenseTensor(T.shape());
    s.F = DenseTensor(T.shape());
    s.pairs = detail::active_pairs(s.L, cfg);
    s.mu = cfg.mu0;
    s.rho = cfg.rho0;
    s.tau = cfg.penalty_tau0;
    s.tau1 = cfg.resolved_tau1(T.shape());
    s.tau2 = cfg.resolved_tau2(T.shape());
    return s;
}

PairStep update_G_pair(const TrpcaState &state, std::size_t index, const SolverConfig &cfg) {
    const PairBlock &b = state.pairs.at(index);
    return low_rank_pair_step(b, unfold_mode_pair(state.L, b.pair), state.mu, state.rho, cfg);
}

DenseTensor update_L(const TrpcaState &state) {
    const Shape &shape = state.T.shape();
    DenseTensor num = state.T - state.E - state.N;
    num *= state.tau;
    num += state.F;
    num += state.L * state.rho;
    double den = state.tau + state.rho;
    for (const PairBlock &b : state.pairs) {
        DenseTensor term = b.aux * state.mu;
        term -= b.multiplier;
        term *= b.beta;
        num += fold_mode_pair(term, b.pair, shape);
        den += b.beta * state.mu;
    }
    num *= 1.0 / den;
    return num;
}

double soft_threshold(double x, double lambda) {
    if (!(lambda >= 0))
        throw InvalidArgument("soft_threshold: lambda must be non-negative");
    if (std::abs(x) <= lambda)
        return 0.0;
    return x > 0 ? x - lambda : x + lambda;
}

DenseTensor update_E(const TrpcaState &state, const DenseTensor &L_new) {
    const double den = state.tau + state.rho;
    const double thr = state.tau1 / den;
    DenseTensor e(state.T.shape());
    for (std::size_t i = 0; i < e.numel(); ++i) {
        const double arg =
            (state.tau * (state.T[i] - L_new[i] - state.N[i]) + state.F[i] + state.rho * state.E[i]) / den;
        e[i] = soft_threshold(arg, thr);
    }
    return e;
}

DenseTensor update_N(const TrpcaState &state, const DenseTensor &L_new, const DenseTensor &E_new) {
    const double den = 2 * state.tau2 + state.tau + state.rho;
    DenseTensor n(state.T.shape());
    for (std::size_t i = 0; i < n.numel(); ++i)
        n[i] = (state.tau * (state.T[i] - L_new[i] - E_new[i]) + state.F[i] + state.rho * state.N[i]) / den;
    return n;
}

MultiplierUpdate update_multipliers(const TrpcaState &state, const DenseTensor &L_new, const DenseTensor &E_new,
                                    const DenseTensor &N_new) {
    MultiplierUpdate out;
    for (const PairBlock &b : state.pairs) {
        DenseTensor r = unfold_mode_pair(L_new, b.pair);
        r -= b.aux;
        r *= state.mu;
        r += b.multiplier;
        out.R.push_back(std::move(r));
    }
    out.F = state.F;
    for (std::size_t i = 0; i < out.F.numel(); ++i)
        out.F[i] += state.tau * (state.T[i] - L_new[i] - E_new[i] - N_new[i]);
    return out;
}

namespace {

double constraint_sq(const TrpcaState &s, const DenseTensor &L, const DenseTensor &E, const DenseTensor &N) {
    double sum = 0;
    for (std::size_t i = 0; i < s.T.numel(); ++i) {
        const double d = s.T[i] - L[i] - E[i] - N[i] + s.F[i] / s.tau;
        sum += d * d;
    }
    return sum;
}

double pair_coupling(const TrpcaState &s, const DenseTensor &L) {
    double sum = 0;
    for (const PairBlock &b : s.pairs)
        sum += b.beta * s.mu / 2 * detail::coupling_sq(unfold_mode_pair(L, b.pair), b.aux, b.multiplier, s.mu);
    return sum;
}

double frob_sq(const DenseTensor &t) {
    const double f = frobenius_norm(t);
    return f * f;
}

} // namespace

double trpca_lagrangian(const TrpcaState &state, const SolverConfig &cfg) {
    double total = pair_coupling(state, state.L);
    for (const PairBlock &b : state.pairs)
        total += b.beta * pair_penalty(b.sigma, b.weights, cfg.gamma, cfg.epsilon);
    total += state.tau1 * l1_norm(state.E) + state.tau2 * frob_sq(state.N);
    total += state.tau / 2 * constraint_sq(state, state.L, state.E, state.N);
    return total;
}

TraceRow trpca_sweep(TrpcaState &state, const SolverConfig &cfg, RecoveryReport *report) {
    TraceRow row;
    row.iter = state.iter + 1;
    row.lagrangian_start = trpca_lagrangian(state, cfg);
    RecoveryReport *checks = cfg.check_descent ? report : nullptr;

    for (std::size_t p = 0; p < state.pairs.size(); ++p) {
        PairStep step = update_G_pair(state, p, cfg);
        row.strict_overrides += step.strict_overrides;
        detail::tally(checks, step.w_before, step.w_after);
        detail::tally(checks, step.lb_before, step.lb_after);
        detail::tally(checks, step.aux_before, step.aux_after);
        detail::apply_step(state.pairs[p], std::move(step));
    }

    DenseTensor L = update_L(state);
    if (checks) {
        const double q = state.tau / 2;
        detail::tally(checks, pair_coupling(state, state.L) + q * constraint_sq(state, state.L, state.E, state.N),
                      pair_coupling(state, L) + q * constraint_sq(state, L, state.E, state.N) +
                          state.rho / 2 * detail::dist_sq(L, state.L));
    }
    DenseTensor E = update_E(state, L);
    if (checks) {
        const double q = state.tau / 2;
        detail::tally(checks, state.tau1 * l1_norm(state.E) + q * constraint_sq(state, L, state.E, state.N),
                      state.tau1 * l1_norm(E) + q * constraint_sq(state, L, E, state.N) +
                          state.rho / 2 * detail::dist_sq(E, state.E));
    }
    DenseTensor N = update_N(state, L, E);
    if (checks) {
        const double q = state.tau / 2;
        detail::tally(checks, state.tau2 * frob_sq(state.N) + q * constraint_sq(state, L, E, state.N),
                      state.tau2 * frob_sq(N) + q * constraint_sq(state, L, E, N) +
                          state.rho / 2 * detail::dist_sq(N, state.N));
    }
    MultiplierUpdate mult = update_multipliers(state, L, E, N);

    row.inf_norm_diff = max_abs_diff(L, state.L);
    state.L = std::move(L);
    state.E = std::move(E);
    state.N = std::move(N);
    row.lagrangian = trpca_lagrangian(state, cfg);
    for (const PairBlock &b : state.pairs)
        row.pair_objectives.push_back(pair_penalty(b.sigma, b.weights, cfg.gamma, cfg.epsilon));
    row.e_l1 = l1_norm(state.E);
    row.n_fro = frobenius_norm(state.N);
    row.residual_fro = frobenius_norm(state.T - state.L - state.E - state.N);

    for (std::size_t p = 0; p < state.pairs.size(); ++p)
        state.pairs[p].multiplier = std::move(mult.R[p]);
    state.F = std::move(mult.F);
    state.mu *= cfg.growth;
    state.rho *= cfg.growth;
    state.tau *= cfg.growth;
    ++state.iter;
    return row;
}

RecoveryReport trpca_solve(const DenseTensor &T, const SolverConfig &cfg) {
    detail::Stopwatch clock;
    TrpcaState state = trpca_init(T, cfg);
    RecoveryReport report;
    report.notes.push_back("L update weights each pair's mu by its beta");
    if (cfg.max_iter == 0)
        report.warnings.push_back("max_iter is 0: returning the initialization");
    for (int k = 0; k < cfg.max_iter; ++k) {
        TraceRow row = trpca_sweep(state, cfg, &report);
        row.seconds = clock.seconds();
        const bool done = row.inf_norm_diff <= cfg.tol;
        report.trace.push_back(std::move(row));
        if (done) {
            report.converged = true;
            break;
        }
    }
    report.iterations = state.iter;
    report.recovered = std::move(state.L);
    report.sparse = std::move(state.E);
    report.noise = std::move(state.N);
    report.metrics["tau1"] = state.tau1;
    report.metrics["tau2"] = state.tau2;
    report.wall_seconds = clock.seconds();
    return report;
}

} // namespace mlcp
