#pragma once

#include <mlcp/tensor.hpp>

#include <cstddef>

#include <Eigen/Core>

namespace mlcp {

/// Parameters of the scalar penalty: target weight lambda >= 0, concavity
/// gamma > 0 and log offset epsilon > 0.
struct PenaltyParams {
    double lambda = 1.0;
    double gamma = 1e4;
    double epsilon = 0.01;

    void validate() const;
};

/// Weight block of one unfolding: W and its target LambdaBar, both R x I3
/// (R = min(I1, I2)) and non-negative.
struct WeightState {
    Eigen::MatrixXd W;
    Eigen::MatrixXd lambda_bar;

    static WeightState ones(Eigen::Index rows, Eigen::Index cols);
};

/// log(|z|/eps + 1)
double log_term(double z, double epsilon);

/// Minimax logarithmic concave penalty. Equals
/// lambda*l - l^2/(2 gamma) with l = log(|z|/eps + 1) while
/// |z| <= eps*exp(gamma*lambda) - eps, and gamma*lambda^2/2 beyond.
double mlcp_scalar(double z, const PenaltyParams &p);

/// Objective of the variational form: omega*l + gamma/2 (omega - lambda)^2.
double emlcp_objective(double z, double omega, const PenaltyParams &p);

/// argmin over omega >= 0 of emlcp_objective: max(lambda - l/gamma, 0).
/// Plugging it back reproduces mlcp_scalar.
double emlcp_weight_minimizer(double z, const PenaltyParams &p);

/// Entrywise sum of mlcp_scalar with a per-entry lambda.
double mlcp_tensor(const DenseTensor &z, const DenseTensor &lambda, double gamma, double epsilon);

/// Entrywise variational objective sum(W*l) + gamma/2 ||W - lambda||_F^2
/// for tensors of any order (vector and matrix forms are the 1- and 2-way cases).
double emlcp_tensor_objective(const DenseTensor &z, const DenseTensor &w, const DenseTensor &lambda,
                              double gamma, double epsilon);

// --- weighted norms on Fourier-domain singular values ----------------------

/// sum_{j,i} W(j,i) * log(sigma(j,i)/eps + 1)
double weighted_log_sum(const Eigen::MatrixXd &sigma, const Eigen::MatrixXd &w, double epsilon);

/// Weighted logarithmic norm of a 3-way tensor: weighted_log_sum over its
/// Fourier singular values.
double log_weighted_norm(const DenseTensor &z, const Eigen::MatrixXd &w, double epsilon);

/// Closed-form minimizing weights max(LambdaBar - l(sigma)/gamma, 0).
Eigen::MatrixXd closed_form_weights(const Eigen::MatrixXd &sigma, const Eigen::MatrixXd &lambda_bar,
                                    double gamma, double epsilon);

/// sum W*l(sigma) + gamma/2 ||W - LambdaBar||_F^2 for explicit W.
double ewt_objective(const Eigen::MatrixXd &sigma, const Eigen::MatrixXd &w,
                     const Eigen::MatrixXd &lambda_bar, double gamma, double epsilon);

/// Equivalent weighted tensor L-gamma norm, evaluated through the closed-form W.
double ewt_lgamma_norm(const DenseTensor &z, const Eigen::MatrixXd &lambda_bar, double gamma,
                       double epsilon);
double ewt_lgamma_norm(const Eigen::MatrixXd &sigma, const Eigen::MatrixXd &lambda_bar, double gamma,
                       double epsilon);

// --- proximal operators ----------------------------------------------------

/// `threshold` applies the zero/root switch at y = 2 sqrt(w/rho) - eps
/// (ties go to zero). `strict` also compares the objective at the root with
/// the objective at zero and keeps the smaller one.
enum class ShrinkRule { threshold, strict };

struct ShrinkOutcome {
    double value = 0;
    bool strict_override = false; ///< strict comparison changed the threshold decision
};

/// Minimizer of rho/2 (s - y)^2 + w log(s/eps + 1) over s >= 0 (exact under
/// the strict rule).
double shrink_singular_value(double y, double w, double rho, double epsilon,
                             ShrinkRule rule = ShrinkRule::strict);
ShrinkOutcome shrink_singular_value_detailed(double y, double w, double rho, double epsilon,
                                             ShrinkRule rule = ShrinkRule::strict);

/// Objective minimized by shrink_singular_value.
double shrink_objective(double s, double y, double w, double rho, double epsilon);

struct ProxResult {
    DenseTensor L;
    Eigen::MatrixXd W;         ///< weights paired with the output singular values
    Eigen::MatrixXd sigma_in;  ///< Fourier singular values of the argument
    Eigen::MatrixXd sigma_out; ///< shrunk values, same column order as sigma_in
    std::size_t strict_overrides = 0;
};

/// Shrinks the Fourier singular values of Y with fixed weights:
/// L = U * S1 * V^H, S1 entrywise shrink_singular_value(S2, W, rho).
/// W must be conjugate-symmetric across slices (column k equal to column I3-k).
ProxResult prox_weighted_log(const DenseTensor &y, const Eigen::MatrixXd &w, double rho, double epsilon,
                             ShrinkRule rule = ShrinkRule::strict, Exec exec = Exec::parallel);

/// Proximal operator of the equivalent weighted tensor L-gamma norm,
/// argmin_L rho/2 ||L - Y||_F^2 + ||L||_{L,gamma,LambdaBar}. Returns L with the
/// weights W = max(LambdaBar - l(sigma(L))/gamma, 0) that pair with it; the
/// shrunk values and W are solved jointly per singular value.
ProxResult prox_ewt_lgamma(const DenseTensor &y, const Eigen::MatrixXd &lambda_bar, double gamma,
                           double rho, double epsilon, ShrinkRule rule = ShrinkRule::strict,
                           Exec exec = Exec::parallel);

/// Proximal weight step:
/// W+ = max((gamma*LambdaBar + rho*W - l(sigma)) / (gamma + rho), 0).
Eigen::MatrixXd update_weights(const Eigen::MatrixXd &sigma, const WeightState &state, double gamma,
                               double rho, double epsilon);

/// Proximal target step: (gamma*W+ + rho*LambdaBar) / (gamma + rho).
Eigen::MatrixXd update_lambda_bar(const Eigen::MatrixXd &w_new, const Eigen::MatrixXd &lambda_bar,
                                  double gamma, double rho);

} // namespace mlcp
