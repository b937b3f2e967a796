#include <mlcp/pair_update.hpp>

#include <algorithm>

namespace mlcp {

PairBlock make_pair_block(const DenseTensor &x, ModePair pair, double beta) {
    PairBlock b;
    b.pair = pair;
    b.beta = beta;
    b.aux = unfold_mode_pair(x, pair);
    b.unfolded = b.aux.shape();
    b.multiplier = DenseTensor(b.unfolded);
    const auto r = Eigen::Index(std::min(b.unfolded[0], b.unfolded[1]));
    b.weights = WeightState::ones(r, Eigen::Index(b.unfolded[2]));
    return b;
}

double pair_penalty(const Eigen::MatrixXd &sigma, const WeightState &ws, double gamma, double epsilon) {
    return ewt_objective(sigma, ws.W, ws.lambda_bar, gamma, epsilon) / double(sigma.cols());
}

PairStep low_rank_pair_step(const PairBlock &block, const DenseTensor &x_unfolded, double mu, double rho,
                            const SolverConfig &cfg) {
    require_same_shape(block.aux, x_unfolded, "low_rank_pair_step");
    const double n = double(block.unfolded[2]);
    const double rho1 = cfg.gamma1 * mu;
    PairStep step;

    step.W = update_weights(block.sigma, block.weights, cfg.gamma, rho, cfg.epsilon);

    DenseTensor arg = x_unfolded;
    arg -= block.aux;
    arg *= mu;
    arg += block.multiplier;
    arg *= 1.0 / rho1;
    arg += block.aux;
    ProxResult prox = prox_weighted_log(arg, step.W, rho1, cfg.epsilon, cfg.shrink_rule(), cfg.exec);
    if (cfg.check_descent) {
        // Linearized step: the model is exact at M, so the prox objective at M
        // versus at M+ is the quantity that must not grow.
        const auto model = [&](const Eigen::MatrixXd &sig, const DenseTensor &m) {
            const double d = frobenius_norm(m - arg);
            return weighted_log_sum(sig, step.W, cfg.epsilon) / n + rho1 / 2 * d * d;
        };
        step.aux_before = model(block.sigma, block.aux);
        step.aux_after = model(prox.sigma_out, prox.L);
    }
    step.aux = std::move(prox.L);
    step.sigma = std::move(prox.sigma_out);
    step.strict_overrides = prox.strict_overrides;

    step.lambda_bar = update_lambda_bar(step.W, block.weights.lambda_bar, cfg.gamma, rho);

    if (cfg.check_descent) {
        const auto &w0 = block.weights.W;
        const auto &lb0 = block.weights.lambda_bar;
        step.w_before = ewt_objective(block.sigma, w0, lb0, cfg.gamma, cfg.epsilon) / n;
        step.w_after = (ewt_objective(block.sigma, step.W, lb0, cfg.gamma, cfg.epsilon) +
                        rho / 2 * (step.W - w0).squaredNorm()) / n;
        step.lb_before = cfg.gamma / 2 * (step.W - lb0).squaredNorm() / n;
        step.lb_after = (cfg.gamma / 2 * (step.W - step.lambda_bar).squaredNorm() +
                         rho / 2 * (step.lambda_bar - lb0).squaredNorm()) / n;
    }
    return step;
}

} // namespace mlcp
