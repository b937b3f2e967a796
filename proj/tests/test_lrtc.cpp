#include "instances.hpp"
#include "oracles.hpp"

#include <mlcp/lrtc.hpp>

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace mlcp;

namespace {

SamplingMask random_mask(const Shape &shape, double keep, std::mt19937_64 &gen) {
    SamplingMask m = SamplingMask::all(shape);
    std::bernoulli_distribution b(keep);
    for (auto &v : m.observed)
        v = b(gen);
    return m;
}

// Linear index map of an unfolding, by the oracle: pos -> original index.
std::vector<std::size_t> unfold_index(const Shape &shape, std::size_t k1, std::size_t k2) {
    DenseTensor idx(shape);
    for (std::size_t i = 0; i < idx.numel(); ++i)
        idx[i] = double(i);
    const auto u = oracle::unfold(idx, k1, k2);
    std::vector<std::size_t> out(u.numel());
    for (std::size_t i = 0; i < u.numel(); ++i)
        out[i] = std::size_t(u[i]);
    return out;
}

LrtcState random_state(const Shape &shape, std::mt19937_64 &gen, SolverConfig cfg = {}) {
    const auto t = oracle::random_tensor(shape, gen);
    LrtcState s = lrtc_init(t, random_mask(shape, 0.5, gen), cfg);
    s.Z = oracle::random_tensor(shape, gen);
    for (auto &b : s.pairs) {
        b.aux = oracle::random_tensor(b.unfolded, gen);
        b.multiplier = oracle::random_tensor(b.unfolded, gen, 0.1);
        b.sigma = fourier_singular_values(b.aux);
    }
    s.mu = 0.7;
    s.rho = 0.3;
    return s;
}

} // namespace

TEST(Lrtc, FullMaskReturnsInputAfterOneSweep) {
    std::mt19937_64 gen(20);
    const auto t = oracle::random_tensor({4, 5, 3}, gen);
    SolverConfig cfg;
    cfg.max_iter = 1;
    const auto r = lrtc_solve(t, SamplingMask::all(t.shape()), cfg);
    EXPECT_EQ(r.recovered, t);
}

TEST(Lrtc, ZeroDataStaysZero) {
    std::mt19937_64 gen(21);
    const DenseTensor t({4, 3, 5});
    SolverConfig cfg;
    cfg.max_iter = 20;
    const auto r = lrtc_solve(t, random_mask(t.shape(), 0.4, gen), cfg);
    EXPECT_EQ(frobenius_norm(r.recovered), 0.0);
}

TEST(Lrtc, ObservedEntriesAreKeptEverySweep) {
    std::mt19937_64 gen(22);
    const auto t = oracle::random_tensor({5, 4, 3, 2}, gen);
    const auto mask = random_mask(t.shape(), 0.5, gen);
    SolverConfig cfg;
    auto s = lrtc_init(t, mask, cfg);
    ASSERT_EQ(s.pairs.size(), 6u); // uniform beta exercises every pair of a 4-way tensor
    for (int k = 0; k < 5; ++k) {
        lrtc_sweep(s, cfg);
        for (std::size_t i = 0; i < t.numel(); ++i)
            if (mask[i])
                ASSERT_EQ(s.Z[i], t[i]);
    }
}

TEST(Lrtc, UpdateZMatchesLiteralFormula) {
    std::mt19937_64 gen(23);
    const Shape shape{3, 4, 2, 2};
    const LrtcState s = random_state(shape, gen);
    const auto z = update_Z(s);
    std::vector<double> num(s.Z.numel());
    for (std::size_t i = 0; i < num.size(); ++i)
        num[i] = s.rho * s.Z[i];
    for (const auto &b : s.pairs) {
        const auto map = unfold_index(shape, b.pair.first, b.pair.second);
        for (std::size_t pos = 0; pos < map.size(); ++pos)
            num[map[pos]] += s.mu * b.aux[pos] - b.multiplier[pos];
    }
    const double den = double(s.pairs.size()) * s.mu + s.rho;
    for (std::size_t i = 0; i < num.size(); ++i)
        EXPECT_NEAR(z[i], s.omega[i] ? s.T[i] : num[i] / den, 1e-13);
}

TEST(Lrtc, UpdateZFixedPointAndAnchoring) {
    std::mt19937_64 gen(24);
    LrtcState s = random_state({3, 3, 4}, gen);
    for (auto &b : s.pairs) {
        b.aux = unfold_mode_pair(s.Z, b.pair);
        b.multiplier = DenseTensor(b.unfolded);
    }
    const auto z = update_Z(s);
    for (std::size_t i = 0; i < z.numel(); ++i)
        if (!s.omega[i])
            EXPECT_NEAR(z[i], s.Z[i], 1e-14);

    LrtcState far = random_state({3, 3, 4}, gen);
    far.rho = 1e12;
    const auto z2 = update_Z(far);
    for (std::size_t i = 0; i < z2.numel(); ++i)
        if (!far.omega[i])
            EXPECT_NEAR(z2[i], far.Z[i], 1e-9);
}

TEST(Lrtc, MultiplierUpdate) {
    std::mt19937_64 gen(25);
    const LrtcState s = random_state({3, 4, 2}, gen);
    const PairBlock &b = s.pairs[0];
    EXPECT_EQ(update_multiplier_Q(b, b.aux, 0.9), b.multiplier);
    PairBlock q0 = b;
    q0.multiplier = DenseTensor(b.unfolded);
    const auto z = oracle::random_tensor(b.unfolded, gen);
    EXPECT_LT(frobenius_norm(update_multiplier_Q(q0, z, 1.0) - (z - b.aux)), 1e-14);
}

TEST(Lrtc, ZeroWeightsLeaveTheArgumentUnshrunk) {
    std::mt19937_64 gen(26);
    LrtcState s = random_state({4, 3, 5}, gen);
    SolverConfig cfg;
    PairBlock &b = s.pairs[0];
    b.weights.W.setZero();
    b.weights.lambda_bar.setZero();
    const auto step = update_M_pair(s, 0, cfg);
    EXPECT_EQ(step.W, Eigen::MatrixXd::Zero(b.weights.W.rows(), b.weights.W.cols()));
    const double rho1 = cfg.gamma1 * s.mu;
    const auto zu = unfold_mode_pair(s.Z, b.pair);
    DenseTensor arg(b.unfolded);
    for (std::size_t i = 0; i < arg.numel(); ++i)
        arg[i] = b.aux[i] + (s.mu * (zu[i] - b.aux[i]) + b.multiplier[i]) / rho1;
    EXPECT_LT(frobenius_norm(step.aux - arg) / frobenius_norm(arg), 1e-12);
}

TEST(Lrtc, PairStepIsTheSlicewiseProx) {
    std::mt19937_64 gen(27);
    SolverConfig cfg;
    cfg.epsilon = 0.5;
    LrtcState s = random_state({5, 4, 6}, gen, cfg);
    const PairBlock &b = s.pairs[1];
    const auto step = update_M_pair(s, 1, cfg);
    const double rho1 = cfg.gamma1 * s.mu;
    const auto zu = unfold_mode_pair(s.Z, b.pair);
    DenseTensor arg(b.unfolded);
    for (std::size_t i = 0; i < arg.numel(); ++i)
        arg[i] = b.aux[i] + (s.mu * (zu[i] - b.aux[i]) + b.multiplier[i]) / rho1;
    // With LambdaBar pinned (gamma -> inf) the joint prox reduces to the
    // fixed-weight prox used by the pair step.
    const auto ref = prox_ewt_lgamma(arg, step.W, 1e15, rho1, cfg.epsilon);
    EXPECT_LT(frobenius_norm(step.aux - ref.L) / frobenius_norm(ref.L), 1e-9);
    // Each singular value follows the 1-D shrink.
    const Eigen::MatrixXd sy = oracle::fourier_sigma(arg), sm = oracle::fourier_sigma(step.aux);
    for (Eigen::Index k = 0; k < sy.cols(); ++k)
        for (Eigen::Index j = 0; j < sy.rows(); ++j)
            EXPECT_NEAR(sm(j, k), shrink_singular_value(sy(j, k), step.W(j, k), rho1, cfg.epsilon), 1e-9);
}

TEST(Lrtc, OneHotBetaIsASingleUnfoldingSolver) {
    // Solving on the (1,3) unfolding of a tensor equals solving the unfolded
    // tensor directly with its first pair.
    std::mt19937_64 gen(28);
    const Shape shape{4, 3, 5};
    const auto t = oracle::random_tensor(shape, gen);
    const auto mask = random_mask(shape, 0.6, gen);
    SolverConfig cfg;
    cfg.max_iter = 15;
    cfg.beta = {0, 1, 0};
    const auto a = lrtc_solve(t, mask, cfg);

    const ModePair p13{0, 2};
    const auto tu = unfold_mode_pair(t, p13);
    SamplingMask mu = SamplingMask::from_tensor(unfold_mode_pair(mask.as_tensor(), p13));
    cfg.beta = {1, 0, 0};
    const auto b = lrtc_solve(tu, mu, cfg);
    EXPECT_LT(frobenius_norm(unfold_mode_pair(a.recovered, p13) - b.recovered), 1e-12);
}

TEST(Lrtc, SubproblemsDescendWithFrozenPenalties) {
    auto inst = instances::completion();
    inst.cfg.growth = 1;
    inst.cfg.max_iter = 40;
    inst.cfg.check_descent = true;
    const auto r = lrtc_solve(inst.truth, inst.mask, inst.cfg);
    EXPECT_EQ(r.subproblem_checks, 40u * 4u);
    EXPECT_EQ(r.subproblem_violations, 0u);
    for (const auto &row : r.trace)
        EXPECT_LE(row.lagrangian, row.lagrangian_start + 1e-8 * std::max(1.0, std::abs(row.lagrangian_start)));
}

TEST(Lrtc, SyntheticInstanceConvergesBeforeTheLimit) {
    const auto inst = instances::completion();
    const auto r = lrtc_solve(inst.truth, inst.mask, inst.cfg);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(r.iterations, std::size_t(inst.cfg.max_iter));
    EXPECT_LE(instances::relative_error(r.recovered, inst.truth), 1e-2);
}

TEST(Lrtc, RejectsBadInput) {
    const DenseTensor t({3, 3, 3});
    SolverConfig cfg;
    EXPECT_THROW(lrtc_init(t, SamplingMask::all({3, 3, 4}), cfg), InvalidArgument);
    cfg.beta = {0.5, 0.5, 0.5};
    EXPECT_THROW(lrtc_init(t, SamplingMask::all(t.shape()), cfg), InvalidArgument);
    cfg.beta.clear();
    cfg.gamma1 = 1.0;
    EXPECT_THROW(lrtc_init(t, SamplingMask::all(t.shape()), cfg), InvalidArgument);
    DenseTensor bad = t;
    bad[0] = std::nan("");
    EXPECT_THROW(lrtc_init(bad, SamplingMask::all(t.shape()), SolverConfig{}), InvalidArgument);
}

TEST(Lrtc, WarnsOnDegenerateRuns) {
    const DenseTensor t = DenseTensor::filled({3, 3, 3}, 1.0);
    SolverConfig cfg;
    cfg.max_iter = 0;
    auto r = lrtc_solve(t, SamplingMask::all(t.shape()), cfg);
    EXPECT_FALSE(r.warnings.empty());
    EXPECT_EQ(r.recovered, t);
    SamplingMask none = SamplingMask::all(t.shape());
    std::fill(none.observed.begin(), none.observed.end(), 0);
    cfg.max_iter = 5;
    r = lrtc_solve(t, none, cfg);
    EXPECT_FALSE(r.warnings.empty());
}

TEST(Lrtc, TraceCsvColumns) {
    std::mt19937_64 gen(29);
    const auto t = oracle::random_tensor({3, 3, 3}, gen);
    SolverConfig cfg;
    cfg.max_iter = 3;
    const auto r = lrtc_solve(t, random_mask(t.shape(), 0.5, gen), cfg);
    std::ostringstream os;
    write_trace_csv(os, r, false);
    std::istringstream in(os.str());
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "iter,inf_norm_diff,lagrangian,seconds");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);)
        ++rows;
    EXPECT_EQ(rows, r.trace.size());
}
