#pragma once

#include <mlcp/mask.hpp>
#include <mlcp/pair_update.hpp>
#include <mlcp/report.hpp>
#include <mlcp/solver_config.hpp>

#include <vector>

namespace mlcp {

/// Iterate of the completion solver. `pairs` holds only the mode pairs with
/// a positive beta weight.
struct LrtcState {
    DenseTensor T;
    SamplingMask omega;
    DenseTensor Z;
    std::vector<PairBlock> pairs;
    double mu = 0;
    double rho = 0;
    std::size_t iter = 0;
};

/// Z0 = T on Omega and 0 elsewhere, M = unfold(Z0), Q = 0, W = LambdaBar = 1.
LrtcState lrtc_init(const DenseTensor &T, const SamplingMask &omega, const SolverConfig &cfg);

/// W, M and LambdaBar updates of pair `index` from the current state.
PairStep update_M_pair(const LrtcState &state, std::size_t index, const SolverConfig &cfg);

/// Observed entries copied from T; the others set to
/// (sum_p (mu*fold(M_p) - fold(Q_p)) + rho*Z) / (P*mu + rho).
DenseTensor update_Z(const LrtcState &state);

/// Q + mu*(Z - M) on the pair's unfolding.
DenseTensor update_multiplier_Q(const PairBlock &block, const DenseTensor &z_unfolded, double mu);

/// sum_p beta_p [pair_penalty_p + mu/2 ||unfold_p(Z) - M_p + Q_p/mu||^2].
double lrtc_lagrangian(const LrtcState &state, const SolverConfig &cfg);

/// One full sweep (W -> M -> LambdaBar per pair, Z, Q, then growth). When
/// `report` is given and cfg.check_descent is set, subproblem checks are
/// tallied there.
TraceRow lrtc_sweep(LrtcState &state, const SolverConfig &cfg, RecoveryReport *report = nullptr);

RecoveryReport lrtc_solve(const DenseTensor &T, const SamplingMask &omega, const SolverConfig &cfg);

} // namespace mlcp
