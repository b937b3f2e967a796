#include <mlcp/eval_data.hpp>
#include <mlcp/rng.hpp>
#include <mlcp/tensor_core.hpp>

#include <algorithm>
#include <cmath>

namespace mlcp {

SamplingMask SamplingMask::all(const Shape &shape) {
    return {shape, std::vector<std::uint8_t>(shape_numel(shape), 1), 1.0, 0};
}

SamplingMask SamplingMask::from_tensor(const DenseTensor &t) {
    SamplingMask m{t.shape(), std::vector<std::uint8_t>(t.numel(), 0), 0.0, 0};
    for (std::size_t i = 0; i < t.numel(); ++i)
        m.observed[i] = t[i] != 0;
    m.sampling_rate = double(m.count()) / double(t.numel());
    return m;
}

DenseTensor SamplingMask::as_tensor() const {
    DenseTensor t(shape);
    for (std::size_t i = 0; i < observed.size(); ++i)
        t[i] = observed[i];
    return t;
}

std::size_t SamplingMask::count() const { return std::size_t(std::count(observed.begin(), observed.end(), 1)); }

namespace {

Shape as_three_way(const Shape &shape) {
    if (shape.size() < 2)
        throw InvalidArgument("expected at least two modes, got shape " + shape_to_string(shape));
    return {shape[0], shape[1], shape_numel(shape) / (shape[0] * shape[1])};
}

} // namespace

DenseTensor gen_lowrank(const Shape &shape, std::size_t rank, std::uint64_t seed) {
    const Shape s3 = as_three_way(shape);
    if (rank > std::min(s3[0], s3[1]))
        throw InvalidArgument("rank " + std::to_string(rank) + " exceeds min(I1, I2) for shape " +
                              shape_to_string(shape));
    if (rank == 0)
        return DenseTensor(shape);
    CounterRng rng(seed);
    DenseTensor a({s3[0], rank, s3[2]});
    DenseTensor b({rank, s3[1], s3[2]});
    for (double &v : a.data())
        v = rng.normal();
    for (double &v : b.data())
        v = rng.normal();
    return t_product(a, b).reshaped(shape);
}

SamplingMask gen_mask(const Shape &shape, double sr, std::uint64_t seed) {
    if (!(sr > 0 && sr <= 1))
        throw InvalidArgument("sampling rate must be in (0, 1]");
    const std::size_t n = shape_numel(shape);
    const auto m = std::uint64_t(std::llround(sr * double(n)));
    CounterRng rng(seed);
    const auto order = partial_shuffle(n, m, rng);
    SamplingMask mask{shape, std::vector<std::uint8_t>(n, 0), sr, seed};
    for (std::uint64_t i = 0; i < m; ++i)
        mask.observed[order[i]] = 1;
    return mask;
}

void NoiseSpec::validate() const {
    if (!(sp_fraction >= 0 && sp_fraction < 1))
        throw InvalidArgument("salt-and-pepper fraction must be in [0, 1)");
    if (!(gaussian_sigma >= 0) || !std::isfinite(gaussian_sigma))
        throw InvalidArgument("Gaussian sigma must be non-negative");
    if (noniid) {
        const auto [lo, hi] = *noniid;
        if (!(lo >= 0 && lo <= hi && hi < 1))
            throw InvalidArgument("non-iid salt-and-pepper range must satisfy 0 <= lo <= hi < 1");
    }
}

DenseTensor add_mixed_noise(const DenseTensor &z, const NoiseSpec &spec) {
    spec.validate();
    const Shape s3 = as_three_way(z.shape());
    const std::size_t plane = s3[0] * s3[1];
    CounterRng rng(spec.seed);

    std::vector<double> fraction(s3[2], spec.sp_fraction);
    if (spec.noniid)
        for (double &f : fraction)
            f = spec.noniid->first + (spec.noniid->second - spec.noniid->first) * rng.uniform();

    DenseTensor out = z;
    if (spec.gaussian_sigma > 0)
        for (double &v : out.data())
            v += spec.gaussian_sigma * rng.normal();
    for (std::size_t i = 0; i < out.numel(); ++i) {
        const double f = fraction[i / plane];
        if (f > 0 && rng.uniform() < f)
            out[i] = rng.uniform() < 0.5 ? 0.0 : 1.0;
    }
    return out;
}

DenseTensor normalize_unit(const DenseTensor &z) {
    const auto [lo, hi] = std::minmax_element(z.values().begin(), z.values().end());
    const double a = *lo, span = *hi - *lo;
    DenseTensor out(z.shape());
    if (span > 0)
        for (std::size_t i = 0; i < z.numel(); ++i)
            out[i] = (z[i] - a) / span;
    return out;
}

} // namespace mlcp
