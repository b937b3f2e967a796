#pragma once

#include <mlcp/pair_update.hpp>
#include <mlcp/report.hpp>
#include <mlcp/solver_config.hpp>

#include <vector>

namespace mlcp {

/// Iterate of the robust PCA solver T = L + E + N. `pairs` holds G and R of
/// each mode pair with positive beta.
struct TrpcaState {
    DenseTensor T;
    DenseTensor L, E, N, F;
    std::vector<PairBlock> pairs;
    double mu = 0;
    double rho = 0;
    double tau = 0; ///< quadratic penalty on the decomposition constraint
    double tau1 = 0;
    double tau2 = 0;
    std::size_t iter = 0;
};

/// L = T, G = unfold(L), E = N = R = F = 0, W = LambdaBar = 1.
TrpcaState trpca_init(const DenseTensor &T, const SolverConfig &cfg);

PairStep update_G_pair(const TrpcaState &state, std::size_t index, const SolverConfig &cfg);

/// (sum_p beta_p (mu*fold(G_p) - fold(R_p)) + tau(T - E - N) + F + rho*L)
///   / (sum_p beta_p mu + tau + rho), using the G stored in `state`.
DenseTensor update_L(const TrpcaState &state);

/// 0 when |x| <= lambda, otherwise sign(x)(|x| - lambda).
double soft_threshold(double x, double lambda);

/// S_{tau1/(tau+rho)}((tau(T - L+ - N + F/tau) + rho*E) / (tau + rho)).
DenseTensor update_E(const TrpcaState &state, const DenseTensor &L_new);

/// (tau(T - L+ - E+) + F + rho*N) / (2 tau2 + tau + rho).
DenseTensor update_N(const TrpcaState &state, const DenseTensor &L_new, const DenseTensor &E_new);

struct MultiplierUpdate {
    std::vector<DenseTensor> R; ///< one per entry of state.pairs
    DenseTensor F;
};

/// R_p + mu(unfold_p(L+) - G_p) with the G stored in `state`, and
/// F + tau(T - L+ - E+ - N+).
MultiplierUpdate update_multipliers(const TrpcaState &state, const DenseTensor &L_new, const DenseTensor &E_new,
                                    const DenseTensor &N_new);

/// sum_p beta_p [pair_penalty_p + mu/2 ||unfold_p(L) - G_p + R_p/mu||^2]
///   + tau1 ||E||_1 + tau2 ||N||_F^2 + tau/2 ||T - L - E - N + F/tau||^2.
double trpca_lagrangian(const TrpcaState &state, const SolverConfig &cfg);

TraceRow trpca_sweep(TrpcaState &state, const SolverConfig &cfg, RecoveryReport *report = nullptr);

RecoveryReport trpca_solve(const DenseTensor &T, const SolverConfig &cfg);

} // namespace mlcp
