#include <mlcp/penalty.hpp>
#include <mlcp/tensor_core.hpp>

#include "slice_loop.hpp"
#include "slice_svd.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mlcp {
namespace {

void check_shrink_args(double w, double rho, double epsilon) {
    if (!(w >= 0) || !std::isfinite(w))
        throw InvalidArgument("shrink: weight must be non-negative and finite");
    if (!(rho > 0) || !std::isfinite(rho))
        throw InvalidArgument("shrink: rho must be positive and finite");
    if (!(epsilon > 0) || !std::isfinite(epsilon))
        throw InvalidArgument("shrink: epsilon must be positive and finite");
}

ShrinkOutcome shrink_unchecked(double y, double w, double rho, double epsilon, ShrinkRule rule) {
    const double alpha = w / rho;
    if (y <= 2 * std::sqrt(alpha) - epsilon)
        return {};
    const double l1 = y - epsilon;
    const double l2 = std::sqrt((y + epsilon) * (y + epsilon) - 4 * alpha);
    // The larger stationary point can fall below zero when y < eps; the
    // objective is then increasing on [0, inf) and the minimizer is 0.
    const double root = std::max((l1 + l2) / 2, 0.0);
    if (rule == ShrinkRule::strict && root > 0 &&
        !(shrink_objective(root, y, w, rho, epsilon) < shrink_objective(0.0, y, w, rho, epsilon)))
        return {0.0, true};
    return {root, false};
}

// Shared driver: per non-redundant Fourier slice, SVD -> shrink the singular
// values column-wise -> rebuild. `shrink_column(k, s_in, s_out)` fills s_out
// and returns the number of strict overrides.
template <class ShrinkColumn>
ProxResult shrink_fourier_spectrum(const DenseTensor &y, Exec exec, ShrinkColumn &&shrink_column) {
    const std::size_t i1 = y.extent(0), i2 = y.extent(1), n = y.extent(2);
    const auto r = Eigen::Index(std::min(i1, i2));
    const ComplexSliceStack fy = dft_mode3_half(y);
    const std::size_t h = fy.slices();
    ComplexSliceStack fl(i1, i2, h);
    ProxResult out;
    out.sigma_in.resize(r, Eigen::Index(n));
    out.sigma_out.resize(r, Eigen::Index(n));
    std::vector<std::size_t> overrides(h, 0);

    detail::for_each_index(exec, h, [&](std::size_t k) {
        auto svd = detail::slice_svd(fy.slice(k), detail::is_real_slice(k, n),
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::VectorXd s1(r);
        overrides[k] = shrink_column(k, svd.s, s1);
        out.sigma_in.col(Eigen::Index(k)) = svd.s;
        out.sigma_out.col(Eigen::Index(k)) = s1;
        fl.slice(k).noalias() = svd.U * s1.cast<cplx>().asDiagonal() * svd.V.adjoint();
    });
    for (std::size_t k = h; k < n; ++k) {
        out.sigma_in.col(Eigen::Index(k)) = out.sigma_in.col(Eigen::Index(n - k));
        out.sigma_out.col(Eigen::Index(k)) = out.sigma_out.col(Eigen::Index(n - k));
        overrides.push_back(overrides[n - k]);
    }
    for (std::size_t c : overrides)
        out.strict_overrides += c;
    out.L = idft_mode3_half(fl, n);
    return out;
}

void check_prox_input(const DenseTensor &y, const char *what) {
    require_3way(y, what);
    if (!all_finite(y))
        throw InvalidArgument(std::string(what) + ": input contains non-finite entries");
}

void check_weight_dims(const DenseTensor &y, const Eigen::MatrixXd &m, const char *what) {
    const auto r = Eigen::Index(std::min(y.extent(0), y.extent(1)));
    if (m.rows() != r || m.cols() != Eigen::Index(y.extent(2)))
        throw InvalidArgument(std::string(what) + ": weights must be " + std::to_string(r) + "x" +
                              std::to_string(y.extent(2)));
    if (!(m.array() >= 0).all() || !m.allFinite())
        throw InvalidArgument(std::string(what) + ": weights must be non-negative and finite");
}

} // namespace

double shrink_objective(double s, double y, double w, double rho, double epsilon) {
    const double d = s - y;
    return rho / 2 * d * d + w * std::log1p(s / epsilon);
}

ShrinkOutcome shrink_singular_value_detailed(double y, double w, double rho, double epsilon, ShrinkRule rule) {
    if (!(y >= 0) || !std::isfinite(y))
        throw InvalidArgument("shrink: singular value must be non-negative and finite");
    check_shrink_args(w, rho, epsilon);
    return shrink_unchecked(y, w, rho, epsilon, rule);
}

double shrink_singular_value(double y, double w, double rho, double epsilon, ShrinkRule rule) {
    return shrink_singular_value_detailed(y, w, rho, epsilon, rule).value;
}

ProxResult prox_weighted_log(const DenseTensor &y, const Eigen::MatrixXd &w, double rho, double epsilon,
                             ShrinkRule rule, Exec exec) {
    check_prox_input(y, "prox_weighted_log");
    check_weight_dims(y, w, "prox_weighted_log");
    check_shrink_args(0.0, rho, epsilon);
    ProxResult out = shrink_fourier_spectrum(y, exec, [&](std::size_t k, const Eigen::VectorXd &s, Eigen::VectorXd &s1) {
        std::size_t overrides = 0;
        for (Eigen::Index j = 0; j < s.size(); ++j) {
            const ShrinkOutcome o = shrink_unchecked(s(j), w(j, Eigen::Index(k)), rho, epsilon, rule);
            s1(j) = o.value;
            overrides += o.strict_override;
        }
        return overrides;
    });
    out.W = w;
    return out;
}

ProxResult prox_ewt_lgamma(const DenseTensor &y, const Eigen::MatrixXd &lambda_bar, double gamma, double rho,
                           double epsilon, ShrinkRule rule, Exec exec) {
    check_prox_input(y, "prox_ewt_lgamma");
    check_weight_dims(y, lambda_bar, "prox_ewt_lgamma");
    PenaltyParams{1.0, gamma, epsilon}.validate();
    check_shrink_args(0.0, rho, epsilon);

    constexpr int kMaxSweeps = 200;
    ProxResult out = shrink_fourier_spectrum(y, exec, [&](std::size_t k, const Eigen::VectorXd &s, Eigen::VectorXd &s1) {
        std::size_t overrides = 0;
        for (Eigen::Index j = 0; j < s.size(); ++j) {
            const double lam = lambda_bar(j, Eigen::Index(k));
            // Alternate the two closed forms (shrink with w, then w from the
            // shrunk value), starting from the weight that pairs with y itself.
            double w = std::max(lam - log_term(s(j), epsilon) / gamma, 0.0);
            ShrinkOutcome o = shrink_unchecked(s(j), w, rho, epsilon, rule);
            for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
                const double w_next = std::max(lam - log_term(o.value, epsilon) / gamma, 0.0);
                if (std::abs(w_next - w) <= 1e-15 * std::max(1.0, lam))
                    break;
                w = w_next;
                o = shrink_unchecked(s(j), w, rho, epsilon, rule);
            }
            s1(j) = o.value;
            overrides += o.strict_override;
        }
        return overrides;
    });
    out.W = closed_form_weights(out.sigma_out, lambda_bar, gamma, epsilon);
    return out;
}

} // namespace mlcp
