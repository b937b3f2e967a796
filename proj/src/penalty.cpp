#include <mlcp/penalty.hpp>
#include <mlcp/tensor_core.hpp>

#include <algorithm>
#include <cmath>

namespace mlcp {

void PenaltyParams::validate() const {
    if (!(gamma > 0) || !std::isfinite(gamma))
        throw InvalidArgument("gamma must be positive and finite");
    if (!(epsilon > 0) || !std::isfinite(epsilon))
        throw InvalidArgument("epsilon must be positive and finite");
    if (!(lambda >= 0) || !std::isfinite(lambda))
        throw InvalidArgument("lambda must be non-negative and finite");
}

WeightState WeightState::ones(Eigen::Index rows, Eigen::Index cols) {
    return {Eigen::MatrixXd::Ones(rows, cols), Eigen::MatrixXd::Ones(rows, cols)};
}

double log_term(double z, double epsilon) { return std::log1p(std::abs(z) / epsilon); }

double mlcp_scalar(double z, const PenaltyParams &p) {
    const double l = log_term(z, p.epsilon);
    // l <= gamma*lambda is the same test as |z| <= eps*exp(gamma*lambda) - eps
    // without the overflow for large gamma*lambda.
    if (l <= p.gamma * p.lambda)
        return p.lambda * l - l * l / (2 * p.gamma);
    return p.gamma * p.lambda * p.lambda / 2;
}

double emlcp_objective(double z, double omega, const PenaltyParams &p) {
    const double d = omega - p.lambda;
    return omega * log_term(z, p.epsilon) + p.gamma / 2 * d * d;
}

double emlcp_weight_minimizer(double z, const PenaltyParams &p) {
    return std::max(p.lambda - log_term(z, p.epsilon) / p.gamma, 0.0);
}

double mlcp_tensor(const DenseTensor &z, const DenseTensor &lambda, double gamma, double epsilon) {
    require_same_shape(z, lambda, "mlcp_tensor");
    double sum = 0;
    for (std::size_t i = 0; i < z.numel(); ++i)
        sum += mlcp_scalar(z[i], {lambda[i], gamma, epsilon});
    return sum;
}

double emlcp_tensor_objective(const DenseTensor &z, const DenseTensor &w, const DenseTensor &lambda,
                              double gamma, double epsilon) {
    require_same_shape(z, w, "emlcp_tensor_objective");
    require_same_shape(z, lambda, "emlcp_tensor_objective");
    double sum = 0;
    for (std::size_t i = 0; i < z.numel(); ++i)
        sum += emlcp_objective(z[i], w[i], {lambda[i], gamma, epsilon});
    return sum;
}

namespace {

void require_same_dims(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b, const char *what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidArgument(std::string(what) + ": weight matrix is " + std::to_string(b.rows()) + "x" +
                              std::to_string(b.cols()) + ", expected " + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()));
}

} // namespace

double weighted_log_sum(const Eigen::MatrixXd &sigma, const Eigen::MatrixXd &w, double epsilon) {
    require_same_dims(sigma, w, "weighted_log_sum");
    double sum = 0;
    for (Eigen::Index i = 0; i < sigma.cols(); ++i)
        for (Eigen::Index j = 0; j < sigma.rows(); ++j)
            sum += w(j, i) * log_term(sigma(j, i), epsilon);
    return sum;
}

double log_weighted_norm(const DenseTensor &z, const Eigen::MatrixXd &w, double epsilon) {
    return weighted_log_sum(fourier_singular_values(z), w, epsilon);
}

Eigen::MatrixXd closed_form_weights(const Eigen::MatrixXd &sigma, const Eigen::MatrixXd &lambda_bar,
                                    double gamma, double epsilon) {
    require_same_dims(sigma, lambda_bar, "closed_form_weights");
    Eigen::MatrixXd w(sigma.rows(), sigma.cols());
    for (Eigen::Index i = 0; i < sigma.cols(); ++i)
        for (Eigen::Index j = 0; j < sigma.rows(); ++j)
            w(j, i) = std::max(lambda_bar(j, i) - log_term(sigma(j, i), epsilon) / gamma, 0.0);
    return w;
}

double ewt_objective(const Eigen::MatrixXd &sigma, const Eigen::MatrixXd &w,
                     const Eigen::MatrixXd &lambda_bar, double gamma, double epsilon) {
    require_same_dims(sigma, lambda_bar, "ewt_objective");
    return weighted_log_sum(sigma, w, epsilon) + gamma / 2 * (w - lambda_bar).squaredNorm();
}

double ewt_lgamma_norm(const Eigen::MatrixXd &sigma, const Eigen::MatrixXd &lambda_bar, double gamma,
                       double epsilon) {
    PenaltyParams{1.0, gamma, epsilon}.validate();
    return ewt_objective(sigma, closed_form_weights(sigma, lambda_bar, gamma, epsilon), lambda_bar, gamma,
                         epsilon);
}

double ewt_lgamma_norm(const DenseTensor &z, const Eigen::MatrixXd &lambda_bar, double gamma,
                       double epsilon) {
    return ewt_lgamma_norm(fourier_singular_values(z), lambda_bar, gamma, epsilon);
}

Eigen::MatrixXd update_weights(const Eigen::MatrixXd &sigma, const WeightState &state, double gamma,
                               double rho, double epsilon) {
    require_same_dims(sigma, state.W, "update_weights");
    require_same_dims(sigma, state.lambda_bar, "update_weights");
    Eigen::MatrixXd w(sigma.rows(), sigma.cols());
    for (Eigen::Index i = 0; i < sigma.cols(); ++i)
        for (Eigen::Index j = 0; j < sigma.rows(); ++j) {
            const double num = gamma * state.lambda_bar(j, i) + rho * state.W(j, i) -
                               log_term(sigma(j, i), epsilon);
            w(j, i) = std::max(num / (gamma + rho), 0.0);
        }
    return w;
}

Eigen::MatrixXd update_lambda_bar(const Eigen::MatrixXd &w_new, const Eigen::MatrixXd &lambda_bar,
                                  double gamma, double rho) {
    require_same_dims(w_new, lambda_bar, "update_lambda_bar");
    return (gamma * w_new + rho * lambda_bar) / (gamma + rho);
}

} // namespace mlcp
