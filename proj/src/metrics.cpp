#include <mlcp/eval_data.hpp>
#include <mlcp/solver_config.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Core>

namespace mlcp {
namespace {

struct Bands {
    std::size_t rows, cols, count;
};

Bands bands_of(const DenseTensor &x, const DenseTensor &ref, const char *what) {
    require_same_shape(x, ref, what);
    if (x.ndim() < 2)
        throw InvalidArgument(std::string(what) + ": need at least two modes");
    const std::size_t r = x.extent(0), c = x.extent(1);
    return {r, c, x.numel() / (r * c)};
}

using ConstMap = Eigen::Map<const Eigen::MatrixXd>;

ConstMap band(const DenseTensor &t, const Bands &b, std::size_t k) {
    return {t.data().data() + k * b.rows * b.cols, Eigen::Index(b.rows), Eigen::Index(b.cols)};
}

Eigen::MatrixXd gaussian_window(Eigen::Index wr, Eigen::Index wc, double sigma) {
    auto taps = [sigma](Eigen::Index n) {
        Eigen::VectorXd g(n);
        const double c = double(n - 1) / 2;
        for (Eigen::Index i = 0; i < n; ++i)
            g(i) = std::exp(-(double(i) - c) * (double(i) - c) / (2 * sigma * sigma));
        return g;
    };
    Eigen::MatrixXd w = taps(wr) * taps(wc).transpose();
    return w / w.sum();
}

// Weighted sums of a band over every valid window position.
Eigen::MatrixXd filter_valid(const Eigen::MatrixXd &img, const Eigen::MatrixXd &w) {
    const Eigen::Index orows = img.rows() - w.rows() + 1, ocols = img.cols() - w.cols() + 1;
    Eigen::MatrixXd out(orows, ocols);
    for (Eigen::Index j = 0; j < ocols; ++j)
        for (Eigen::Index i = 0; i < orows; ++i)
            out(i, j) = (img.block(i, j, w.rows(), w.cols()).array() * w.array()).sum();
    return out;
}

} // namespace

double psnr(const DenseTensor &x, const DenseTensor &ref, double peak) {
    const Bands b = bands_of(x, ref, "psnr");
    if (!(peak > 0))
        throw InvalidArgument("psnr: peak must be positive");
    double sum = 0;
    for (std::size_t k = 0; k < b.count; ++k) {
        const double mse = (band(x, b, k) - band(ref, b, k)).squaredNorm() / double(b.rows * b.cols);
        if (mse == 0)
            return std::numeric_limits<double>::infinity();
        sum += 10 * std::log10(peak * peak / mse);
    }
    return sum / double(b.count);
}

double ssim(const DenseTensor &x, const DenseTensor &ref, double peak) {
    const Bands b = bands_of(x, ref, "ssim");
    if (!(peak > 0))
        throw InvalidArgument("ssim: peak must be positive");
    const double c1 = (0.01 * peak) * (0.01 * peak), c2 = (0.03 * peak) * (0.03 * peak);
    const auto wr = Eigen::Index(std::min<std::size_t>(11, b.rows));
    const auto wc = Eigen::Index(std::min<std::size_t>(11, b.cols));
    const Eigen::MatrixXd w = gaussian_window(wr, wc, 1.5);
    double sum = 0;
    for (std::size_t k = 0; k < b.count; ++k) {
        const Eigen::MatrixXd p = band(x, b, k), q = band(ref, b, k);
        const Eigen::ArrayXXd mp = filter_valid(p, w).array(), mq = filter_valid(q, w).array();
        const Eigen::ArrayXXd spp = filter_valid(p.cwiseProduct(p), w).array() - mp * mp;
        const Eigen::ArrayXXd sqq = filter_valid(q.cwiseProduct(q), w).array() - mq * mq;
        const Eigen::ArrayXXd spq = filter_valid(p.cwiseProduct(q), w).array() - mp * mq;
        const Eigen::ArrayXXd map =
            ((2 * mp * mq + c1) * (2 * spq + c2)) / ((mp * mp + mq * mq + c1) * (spp + sqq + c2));
        sum += map.mean();
    }
    return sum / double(b.count);
}

double ergas(const DenseTensor &x, const DenseTensor &ref, double ratio) {
    const Bands b = bands_of(x, ref, "ergas");
    if (!(ratio > 0))
        throw InvalidArgument("ergas: ratio must be positive");
    const double n = double(b.rows * b.cols);
    double acc = 0;
    for (std::size_t k = 0; k < b.count; ++k) {
        const double mean = band(ref, b, k).sum() / n;
        if (mean == 0)
            throw InvalidArgument("ergas: reference band " + std::to_string(k) + " has zero mean");
        const double rmse = std::sqrt((band(x, b, k) - band(ref, b, k)).squaredNorm() / n);
        acc += (rmse / mean) * (rmse / mean);
    }
    return 100 / ratio * std::sqrt(acc / double(b.count));
}

MetricRow evaluate(const DenseTensor &x, const DenseTensor &ref, double peak, double ratio, std::string method,
                   std::string setting) {
    MetricRow row{std::move(method), std::move(setting), psnr(x, ref, peak), ssim(x, ref, peak), 0};
    row.ergas = ergas(x, ref, ratio);
    return row;
}

void write_metrics_csv(std::ostream &os, const std::vector<MetricRow> &rows) {
    os << "method,sr_or_noise,psnr,ssim,fsim,ergas\n";
    for (const MetricRow &r : rows)
        os << r.method << ',' << r.setting << ',' << (std::isinf(r.psnr) ? "inf" : format_double(r.psnr)) << ','
           << format_double(r.ssim) << ",n/a," << format_double(r.ergas) << '\n';
}

} // namespace mlcp
