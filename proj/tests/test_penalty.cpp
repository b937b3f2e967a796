#include "oracles.hpp"

#include <mlcp/penalty.hpp>
#include <mlcp/tensor_core.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace mlcp;

namespace {

constexpr double e = std::numbers::e;

// argmin over omega in [0, hi] of the variational objective, by grid.
double grid_weight(double z, const PenaltyParams &p, double hi) {
    return oracle::grid_minimize([&](double w) { return emlcp_objective(z, w, p); }, 0.0, hi, 1e-6, 1e-3).first;
}

} // namespace

TEST(Mlcp, ScalarValues) {
    const PenaltyParams p{1.0, 2.0, 1.0};
    EXPECT_EQ(mlcp_scalar(0.0, p), 0.0);
    EXPECT_DOUBLE_EQ(mlcp_scalar(e * e - 1, p), 1.0);
    EXPECT_DOUBLE_EQ(mlcp_scalar(-100.0, p), 1.0);
    EXPECT_NEAR(mlcp_scalar(e - 1, p), 0.75, 1e-15);
    // Same value from the variational form minimized on a grid.
    const double w = grid_weight(e - 1, p, 2.0);
    EXPECT_NEAR(emlcp_objective(e - 1, w, p), 0.75, 1e-9);
}

TEST(Mlcp, WeightMinimizer) {
    const PenaltyParams p{1.0, 2.0, 1.0};
    EXPECT_EQ(emlcp_weight_minimizer(0.0, p), 1.0);
    EXPECT_NEAR(emlcp_weight_minimizer(e - 1, p), 0.5, 1e-15);
    EXPECT_NEAR(grid_weight(e - 1, p, 2.0), 0.5, 1e-5);
    EXPECT_EQ(emlcp_weight_minimizer(1e6, p), 0.0);
    EXPECT_NEAR(grid_weight(1e6, p, 2.0), 0.0, 1e-5);
}

TEST(Mlcp, ValidatesParameters) {
    EXPECT_THROW((PenaltyParams{1.0, 0.0, 1.0}.validate()), InvalidArgument);
    EXPECT_THROW((PenaltyParams{1.0, 1.0, -1.0}.validate()), InvalidArgument);
    EXPECT_THROW((PenaltyParams{-1.0, 1.0, 1.0}.validate()), InvalidArgument);
    EXPECT_NO_THROW((PenaltyParams{0.0, 1.0, 1.0}.validate()));
}

TEST(Mlcp, TensorFormsDecoupleEntrywise) {
    std::mt19937_64 gen(11);
    const auto z = oracle::random_tensor({3, 4, 2}, gen, 5.0);
    auto lambda = oracle::random_tensor({3, 4, 2}, gen);
    for (double &v : lambda.data())
        v = std::abs(v);
    const double gamma = 3.0, eps = 0.1;
    DenseTensor w(z.shape());
    double expect = 0;
    for (std::size_t i = 0; i < z.numel(); ++i) {
        w[i] = emlcp_weight_minimizer(z[i], {lambda[i], gamma, eps});
        expect += mlcp_scalar(z[i], {lambda[i], gamma, eps});
    }
    EXPECT_NEAR(mlcp_tensor(z, lambda, gamma, eps), expect, 1e-12);
    EXPECT_NEAR(emlcp_tensor_objective(z, w, lambda, gamma, eps), expect, 1e-12);
    EXPECT_EQ(mlcp_tensor(DenseTensor(z.shape()), lambda, gamma, eps), 0.0);
    EXPECT_THROW(mlcp_tensor(z, DenseTensor({3, 4}), gamma, eps), InvalidArgument);
}

TEST(Mlcp, MonotoneConcaveWithBoundedSlope) {
    const PenaltyParams p{1.0, 5.0, 0.5};
    const double h = 1e-3;
    double prev_diff = std::numeric_limits<double>::infinity();
    double max_jump = 0;
    for (int i = 0; i < 20000; ++i) {
        const double z = i * h;
        const double d = (mlcp_scalar(z + h, p) - mlcp_scalar(z, p)) / h;
        EXPECT_GE(d, 0.0);
        EXPECT_LE(d, prev_diff + 1e-9);
        if (i > 0)
            max_jump = std::max(max_jump, prev_diff - d);
        prev_diff = d;
    }
    // Slope increments shrink with the step: derivative is Lipschitz.
    EXPECT_LT(max_jump, 10 * h / p.epsilon);
}

TEST(WeightedNorms, ZeroAndMatrixCase) {
    const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(3, 4);
    EXPECT_EQ(log_weighted_norm(DenseTensor({3, 5, 4}), ones, 0.1), 0.0);
    EXPECT_EQ(ewt_lgamma_norm(DenseTensor({3, 5, 4}), ones, 2.0, 0.1), 0.0);

    std::mt19937_64 gen(12);
    const auto m = oracle::random_tensor({4, 3, 1}, gen);
    Eigen::MatrixXd mm(4, 3);
    for (Eigen::Index j = 0; j < 3; ++j)
        for (Eigen::Index i = 0; i < 4; ++i)
            mm(i, j) = m(i, j, 0);
    const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(mm).singularValues();
    double expect = 0;
    for (double v : s)
        expect += std::log(v / 0.1 + 1);
    EXPECT_NEAR(log_weighted_norm(m, Eigen::MatrixXd::Ones(3, 1), 0.1), expect, 1e-12);
}

TEST(WeightedNorms, SliceOracle) {
    std::mt19937_64 gen(13);
    const auto z = oracle::random_tensor({4, 5, 6}, gen);
    std::uniform_real_distribution<double> u(0, 2);
    Eigen::MatrixXd w(4, 6);
    for (Eigen::Index k = 0; k < 6; ++k)
        for (Eigen::Index j = 0; j < 4; ++j)
            w(j, k) = u(gen);
    const Eigen::MatrixXd sig = oracle::fourier_sigma(z);
    double expect = 0;
    for (Eigen::Index k = 0; k < 6; ++k)
        for (Eigen::Index j = 0; j < 4; ++j)
            expect += w(j, k) * std::log(sig(j, k) / 0.05 + 1);
    EXPECT_NEAR(log_weighted_norm(z, w, 0.05), expect, 1e-10);
}

TEST(WeightedNorms, UnitaryInvariance) {
    std::mt19937_64 gen(14);
    const auto z = oracle::random_tensor({4, 3, 5}, gen);
    const auto u = t_svd(oracle::random_tensor({4, 4, 5}, gen)).U;
    const auto v = t_svd(oracle::random_tensor({3, 3, 5}, gen)).V;
    const Eigen::MatrixXd lb = Eigen::MatrixXd::Constant(3, 5, 0.8);
    const double a = ewt_lgamma_norm(z, lb, 4.0, 0.2);
    const double b = ewt_lgamma_norm(t_product(t_product(u, z), v), lb, 4.0, 0.2);
    EXPECT_NEAR(a, b, 1e-8);
}

TEST(Shrink, PrintedExamples) {
    EXPECT_EQ(shrink_singular_value(0.5, 1, 1, 1), 0.0);
    EXPECT_EQ(shrink_singular_value(1.0, 1, 1, 1), 0.0); // tie at the switch goes to zero
    EXPECT_NEAR(shrink_singular_value(3.0, 1, 1, 1), (2 + std::sqrt(12.0)) / 2, 1e-12);
    const auto f = [](double s) { return 0.5 * (s - 3) * (s - 3) + std::log(s + 1); };
    EXPECT_NEAR(oracle::grid_minimize(f, 0, 3, 1e-6, 1e-3).first, 2.7320508, 1e-5);
    EXPECT_EQ(shrink_singular_value(4.2, 0, 1, 1), 4.2);
}

TEST(Shrink, RejectsBadInput) {
    EXPECT_THROW(shrink_singular_value(-1, 1, 1, 1), InvalidArgument);
    EXPECT_THROW(shrink_singular_value(1, -1, 1, 1), InvalidArgument);
    EXPECT_THROW(shrink_singular_value(1, 1, 0, 1), InvalidArgument);
    EXPECT_THROW(shrink_singular_value(1, 1, 1, 0), InvalidArgument);
}

TEST(Shrink, RootBelowZeroIsClamped) {
    // alpha = 0.5, eps = 1: for 2 sqrt(alpha) - eps < y < alpha/eps both
    // stationary points are negative and the objective increases on [0, inf).
    const double y = 0.45, w = 0.5, rho = 1, eps = 1;
    EXPECT_LT((y - eps + std::sqrt((y + eps) * (y + eps) - 4 * w / rho)) / 2, 0.0);
    EXPECT_EQ(shrink_singular_value(y, w, rho, eps, ShrinkRule::threshold), 0.0);
    EXPECT_EQ(shrink_singular_value(y, w, rho, eps, ShrinkRule::strict), 0.0);
    const auto f = [&](double s) { return shrink_objective(s, y, w, rho, eps); };
    EXPECT_EQ(oracle::grid_minimize(f, 0, y, 1e-6, 1e-3).first, 0.0);
}

TEST(Shrink, StrictRuleFixesThresholdRuleNearTheSwitch) {
    // w/rho = 100, eps = 0.01: just above the switch at 19.99 the root loses to zero.
    const double y = 20.5, w = 100, rho = 1, eps = 0.01;
    const auto f = [&](double s) { return shrink_objective(s, y, w, rho, eps); };
    const double best = oracle::grid_minimize(f, 0, y, 1e-6, 1e-3).first;
    const auto strict = shrink_singular_value_detailed(y, w, rho, eps, ShrinkRule::strict);
    const double printed = shrink_singular_value(y, w, rho, eps, ShrinkRule::threshold);
    EXPECT_NEAR(strict.value, best, 1e-5);
    EXPECT_TRUE(strict.strict_override);
    EXPECT_GT(printed, 1.0);
    EXPECT_GT(f(printed), f(strict.value));
}

TEST(Prox, ZeroInputAndZeroTarget) {
    const Eigen::MatrixXd lb = Eigen::MatrixXd::Constant(2, 4, 0.7);
    const auto r = prox_ewt_lgamma(DenseTensor({2, 3, 4}), lb, 2.0, 1.0, 0.1);
    EXPECT_EQ(frobenius_norm(r.L), 0.0);
    EXPECT_EQ(r.W, lb);

    std::mt19937_64 gen(15);
    const auto y = oracle::random_tensor({2, 3, 4}, gen);
    const auto r0 = prox_ewt_lgamma(y, Eigen::MatrixXd::Zero(2, 4), 2.0, 1.0, 0.1);
    EXPECT_LT(frobenius_norm(r0.L - y), 1e-12);
    EXPECT_EQ(r0.W, Eigen::MatrixXd::Zero(2, 4));

    DenseTensor bad = y;
    bad[0] = std::numeric_limits<double>::infinity();
    EXPECT_THROW(prox_ewt_lgamma(bad, lb, 2.0, 1.0, 0.1), InvalidArgument);
    EXPECT_THROW(prox_ewt_lgamma(y, Eigen::MatrixXd::Ones(3, 4), 2.0, 1.0, 0.1), InvalidArgument);
}

TEST(Prox, PerValueOptimality) {
    std::mt19937_64 gen(16);
    const auto y = oracle::random_tensor({5, 4, 6}, gen, 3.0);
    const double gamma = 2.0, rho = 0.5, eps = 0.5;
    Eigen::MatrixXd lb = Eigen::MatrixXd::Constant(4, 6, 1.5);
    const auto r = prox_ewt_lgamma(y, lb, gamma, rho, eps);
    const Eigen::MatrixXd sy = oracle::fourier_sigma(y);
    const Eigen::MatrixXd sl = oracle::fourier_sigma(r.L);

    std::normal_distribution<double> nd(0, 0.05);
    for (Eigen::Index k = 0; k < sy.cols(); ++k)
        for (Eigen::Index j = 0; j < sy.rows(); ++j) {
            const PenaltyParams p{lb(j, k), gamma, eps};
            const auto h = [&](double s) { return rho / 2 * (s - sy(j, k)) * (s - sy(j, k)) + mlcp_scalar(s, p); };
            const auto [s_best, h_best] = oracle::grid_minimize(h, 0, sy(j, k), 1e-6, 1e-3);
            EXPECT_NEAR(r.sigma_out(j, k), s_best, 1e-5) << j << "," << k;
            EXPECT_NEAR(sl(j, k), r.sigma_out(j, k), 1e-10);
            EXPECT_NEAR(r.W(j, k), emlcp_weight_minimizer(r.sigma_out(j, k), p), 1e-12);
            for (int t = 0; t < 1000 / int(sy.size()) + 1; ++t)
                EXPECT_LE(h(r.sigma_out(j, k)), h(std::max(0.0, r.sigma_out(j, k) + nd(gen))) + 1e-12);
        }
    // Tensor objective is the slice sum of the per-value objectives.
    double slice_sum = 0;
    for (Eigen::Index k = 0; k < sy.cols(); ++k)
        for (Eigen::Index j = 0; j < sy.rows(); ++j)
            slice_sum += rho / 2 * std::pow(sl(j, k) - sy(j, k), 2) + mlcp_scalar(sl(j, k), {lb(j, k), gamma, eps});
    const double d = frobenius_norm(r.L - y);
    EXPECT_NEAR(rho * 6 / 2 * d * d + ewt_lgamma_norm(r.L, lb, gamma, eps), slice_sum, 1e-8);
}

TEST(Prox, WeightedLogWithZeroWeightsIsIdentity) {
    std::mt19937_64 gen(17);
    const auto y = oracle::random_tensor({3, 4, 5}, gen);
    const auto r = prox_weighted_log(y, Eigen::MatrixXd::Zero(3, 5), 2.0, 0.1);
    EXPECT_LT(frobenius_norm(r.L - y), 1e-12);
}

TEST(WeightSteps, Examples) {
    WeightState s{Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1)};
    Eigen::MatrixXd sig = Eigen::MatrixXd::Constant(1, 1, e - 1);
    EXPECT_NEAR(update_weights(sig, s, 2.0, 1.0, 1.0)(0, 0), 2.0 / 3, 1e-15);
    // The W subproblem: W*l + gamma/2 (W - Lb)^2 + rho/2 (W - W0)^2.
    const auto f = [](double w) { return w * 1.0 + (w - 1) * (w - 1) + 0.5 * (w - 1) * (w - 1); };
    EXPECT_NEAR(oracle::grid_minimize(f, 0, 2, 1e-6, 1e-3).first, 2.0 / 3, 1e-5);

    s.lambda_bar(0, 0) = 0.4;
    s.W(0, 0) = 0.1;
    EXPECT_NEAR(update_weights(Eigen::MatrixXd::Zero(1, 1), s, 2.0, 1.0, 1.0)(0, 0), (0.8 + 0.1) / 3, 1e-15);
    EXPECT_EQ(update_weights(Eigen::MatrixXd::Constant(1, 1, 1e6), s, 2.0, 1.0, 1.0)(0, 0), 0.0);

    const Eigen::MatrixXd w9 = Eigen::MatrixXd::Constant(1, 1, 0.9), l3 = Eigen::MatrixXd::Constant(1, 1, 0.3);
    EXPECT_NEAR(update_lambda_bar(w9, l3, 2.0, 1.0)(0, 0), 0.7, 1e-15);
    EXPECT_EQ(update_lambda_bar(w9, w9, 2.0, 1.0)(0, 0), 0.9);
    EXPECT_EQ(update_lambda_bar(w9, l3, 2.0, 0.0)(0, 0), 0.9);
}
