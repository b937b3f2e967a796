#pragma once

#include <mlcp/penalty.hpp>
#include <mlcp/solver_config.hpp>
#include <mlcp/tensor_core.hpp>

namespace mlcp {

/// Auxiliary low-rank block of one mode pair: the copy M (G in robust PCA)
/// living on the 3-way unfolding, its multiplier Q (R) and its weights.
struct PairBlock {
    ModePair pair;
    double beta = 0;
    Shape unfolded;
    DenseTensor aux;        ///< M or G
    DenseTensor multiplier; ///< Q or R
    WeightState weights;
    Eigen::MatrixXd sigma;  ///< Fourier singular values of `aux`
};

PairBlock make_pair_block(const DenseTensor &x, ModePair pair, double beta);

/// Result of the W -> M -> LambdaBar step for one pair.
struct PairStep {
    DenseTensor aux;
    Eigen::MatrixXd W;
    Eigen::MatrixXd lambda_bar;
    Eigen::MatrixXd sigma;
    std::size_t strict_overrides = 0;
    // Proximal objectives of the W, LambdaBar and M subproblems before/after.
    double w_before = 0, w_after = 0;
    double lb_before = 0, lb_after = 0;
    double aux_before = 0, aux_after = 0;
};

/// Weighted-norm part of the objective of one pair, normalized by the number
/// of Fourier slices: (sum W*l(sigma) + gamma/2 ||W - LambdaBar||^2) / I3.
double pair_penalty(const Eigen::MatrixXd &sigma, const WeightState &ws, double gamma, double epsilon);

/// One linearized proximal step for a pair given the current primal variable
/// `x_unfolded` (Z or L on this pair's unfolding):
///   W+  = max((gamma*LambdaBar + rho*W - l(sigma(M))) / (gamma + rho), 0)
///   M+  = prox of the weighted log norm with W+ at M + (mu*X + Q - mu*M)/rho1
///   LambdaBar+ = (gamma*W+ + rho*LambdaBar) / (gamma + rho)
PairStep low_rank_pair_step(const PairBlock &block, const DenseTensor &x_unfolded, double mu, double rho,
                            const SolverConfig &cfg);

} // namespace mlcp
