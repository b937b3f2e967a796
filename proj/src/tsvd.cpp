#include <mlcp/tensor_core.hpp>

#include "slice_loop.hpp"
#include "slice_svd.hpp"

#include <algorithm>

namespace mlcp {

TubalFactorization t_svd(const DenseTensor &z, Exec exec) {
    require_3way(z, "t_svd");
    if (!all_finite(z))
        throw InvalidArgument("t_svd: input contains non-finite entries");
    const std::size_t i1 = z.extent(0), i2 = z.extent(1), n = z.extent(2);
    const std::size_t r = std::min(i1, i2);
    const ComplexSliceStack fz = dft_mode3_half(z);
    const std::size_t h = fz.slices();
    ComplexSliceStack fu(i1, i1, h), fs(i1, i2, h), fv(i2, i2, h);

    detail::for_each_index(exec, h, [&](std::size_t k) {
        auto svd = detail::slice_svd(fz.slice(k), detail::is_real_slice(k, n),
                                     Eigen::ComputeFullU | Eigen::ComputeFullV);
        fu.slice(k) = svd.U;
        fv.slice(k) = svd.V;
        auto s = fs.slice(k);
        s.setZero();
        for (std::size_t j = 0; j < r; ++j)
            s(Eigen::Index(j), Eigen::Index(j)) = svd.s(Eigen::Index(j));
    });

    return {idft_mode3_half(fu, n), idft_mode3_half(fs, n), idft_mode3_half(fv, n)};
}

DenseTensor TubalFactorization::reconstruct() const {
    return t_product(t_product(U, S), conj_transpose(V));
}

Eigen::MatrixXd fourier_singular_values(const DenseTensor &z, Exec exec) {
    require_3way(z, "fourier_singular_values");
    const std::size_t n = z.extent(2);
    const std::size_t r = std::min(z.extent(0), z.extent(1));
    const ComplexSliceStack fz = dft_mode3_half(z);
    const std::size_t h = fz.slices();
    Eigen::MatrixXd sigma(r, n);
    detail::for_each_index(exec, h, [&](std::size_t k) {
        sigma.col(Eigen::Index(k)) = detail::slice_svd(fz.slice(k), detail::is_real_slice(k, n), 0).s;
    });
    for (std::size_t k = h; k < n; ++k)
        sigma.col(Eigen::Index(k)) = sigma.col(Eigen::Index(n - k));
    return sigma;
}

namespace {

double rank_threshold(const Eigen::MatrixXd &sigma) {
    return sigma.size() == 0 ? 0.0 : kRankTolerance * sigma.maxCoeff();
}

} // namespace

std::size_t tubal_rank(const DenseTensor &z) {
    const Eigen::MatrixXd sigma = fourier_singular_values(z);
    const double thr = rank_threshold(sigma);
    std::size_t rank = 0;
    for (Eigen::Index j = 0; j < sigma.rows(); ++j)
        if (sigma.row(j).maxCoeff() > thr)
            ++rank;
    return rank;
}

std::vector<std::size_t> multi_rank(const DenseTensor &z) {
    const Eigen::MatrixXd sigma = fourier_singular_values(z);
    const double thr = rank_threshold(sigma);
    std::vector<std::size_t> ranks(std::size_t(sigma.cols()), 0);
    for (Eigen::Index k = 0; k < sigma.cols(); ++k)
        ranks[std::size_t(k)] = std::size_t((sigma.col(k).array() > thr).count());
    return ranks;
}

std::vector<std::size_t> n_tubal_rank(const DenseTensor &y) {
    std::vector<std::size_t> ranks;
    for (const ModePair &p : mode_pairs(y.ndim()))
        ranks.push_back(tubal_rank(unfold_mode_pair(y, p)));
    return ranks;
}

double tnn(const DenseTensor &z) { return fourier_singular_values(z).sum(); }

} // namespace mlcp
