#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace mlcp::detail {

// Fourier slices 0 and n/2 (n even) of a real tensor are real matrices. Their
// factors are computed in real arithmetic so that dropping the imaginary part
// in the inverse transform is exact.
inline bool is_real_slice(std::size_t k, std::size_t n) { return k == 0 || (n % 2 == 0 && 2 * k == n); }

struct SliceSvd {
    Eigen::MatrixXcd U;
    Eigen::MatrixXcd V;
    Eigen::VectorXd s; // non-increasing
};

inline SliceSvd slice_svd(const Eigen::Ref<const Eigen::MatrixXcd> &m, bool real_slice, unsigned options) {
    SliceSvd out;
    if (real_slice) {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(m.real(), options);
        out.s = svd.singularValues();
        if (options & (Eigen::ComputeFullU | Eigen::ComputeThinU))
            out.U = svd.matrixU().cast<std::complex<double>>();
        if (options & (Eigen::ComputeFullV | Eigen::ComputeThinV))
            out.V = svd.matrixV().cast<std::complex<double>>();
    } else {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, options);
        out.s = svd.singularValues();
        if (options & (Eigen::ComputeFullU | Eigen::ComputeThinU))
            out.U = svd.matrixU();
        if (options & (Eigen::ComputeFullV | Eigen::ComputeThinV))
            out.V = svd.matrixV();
    }
    return out;
}

} // namespace mlcp::detail
