#include "gammadep/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "gammadep/numeric.hpp"
#include "gammadep/parallel.hpp"
#include "gammadep/simd.hpp"

namespace gammadep {

namespace {

// Fills the upper triangle row by row, then mirrors it. Each entry is computed
// independently, so row-block parallelism cannot change any value.
Matrix distance_matrix(const Matrix& z, unsigned threads) {
    const std::size_t n = z.rows();
    const Matrix cols = z.transposed();
    const simd::ColumnView view{cols.data(), n, z.cols()};
    Matrix out(n, n, 0.0);
    const std::size_t blocks = std::min<std::size_t>(n, 64);
    parallel_for(blocks, threads, [&](std::size_t blk) {
        for (std::size_t i = blk; i < n; i += blocks) {
            if (i + 1 < n) simd::distance_row(view, i, i + 1, n, out.data() + i * n + i + 1);
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out(j, i) = out(i, j);
    return out;
}

double squared_norm_of_difference(std::span<const double> a, std::span<const double> b) {
    CompensatedSum s;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s.add(d * d);
    }
    return s.value();
}

}  // namespace

Matrix pairwise_dcov(const Matrix& z, unsigned threads) {
    if (z.rows() == 0) throw Error(ErrorCode::empty, "no rows");
    return distance_matrix(z, threads);
}

Matrix pairwise_ghsic(const Matrix& z, double sigma, unsigned threads) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::bad_bandwidth, "sigma must be positive");
    if (z.rows() == 0) throw Error(ErrorCode::empty, "no rows");
    Matrix k = distance_matrix(z, threads);
    const double scale = 1.0 / (2.0 * sigma * sigma);
    const std::size_t n = z.rows();
    for (std::size_t i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = std::exp(-k(i, j) * scale);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

double median_bandwidth(const Matrix& z) {
    const std::size_t n = z.rows();
    if (n < 2) throw Error(ErrorCode::degenerate, "median bandwidth needs at least two rows");
    const Matrix d = distance_matrix(z, 1);
    std::vector<double> positive;
    positive.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (d(i, j) > 0.0) positive.push_back(d(i, j));
    if (positive.empty()) throw Error(ErrorCode::degenerate, "all rows are identical");
    const std::size_t mid = positive.size() / 2;
    std::nth_element(positive.begin(), positive.begin() + static_cast<std::ptrdiff_t>(mid), positive.end());
    const double upper = positive[mid];
    if (positive.size() % 2 == 1) return upper;
    const double lower = *std::max_element(positive.begin(), positive.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

PairKernelMatrices pair_kernel_matrices(const Sample& sample, const KernelPairSpec& spec, unsigned threads) {
    switch (spec.id()) {
        case KernelId::dcov:
            return {spec, pairwise_dcov(sample.x(), threads), pairwise_dcov(sample.y(), threads)};
        case KernelId::ghsic: {
            const auto& bw = *spec.bandwidths();
            return {spec, pairwise_ghsic(sample.x(), bw[0], threads), pairwise_ghsic(sample.y(), bw[1], threads)};
        }
        case KernelId::pcov:
            break;
    }
    throw Error(ErrorCode::bad_argument, "PCOV is not a pair-dependent kernel");
}

double eval_generic_kernel(const KernelPairSpec& spec, KernelSide side, std::span<const std::span<const double>> args) {
    const auto m = static_cast<std::size_t>(spec.arity());
    if (args.size() != m) {
        throw Error(ErrorCode::arity,
                    "kernel expects " + std::to_string(m) + " arguments, got " + std::to_string(args.size()));
    }
    const std::size_t dim = args[0].size();
    for (const auto& a : args)
        if (a.size() != dim || dim == 0) throw Error(ErrorCode::dim_mismatch, "kernel arguments differ in dimension");

    switch (spec.id()) {
        case KernelId::dcov:
            return std::sqrt(squared_norm_of_difference(args[0], args[1]));
        case KernelId::ghsic: {
            const double sigma = (*spec.bandwidths())[side == KernelSide::f1 ? 0 : 1];
            return std::exp(-std::sqrt(squared_norm_of_difference(args[0], args[1])) / (2.0 * sigma * sigma));
        }
        case KernelId::pcov: {
            // angle between z1 - z5 and z2 - z5
            CompensatedSum inner;
            CompensatedSum n1;
            CompensatedSum n2;
            for (std::size_t k = 0; k < dim; ++k) {
                const double p = args[0][k] - args[4][k];
                const double q = args[1][k] - args[4][k];
                inner.add(p * q);
                n1.add(p * p);
                n2.add(q * q);
            }
            if (n1.value() == 0.0 || n2.value() == 0.0) {
                throw Error(ErrorCode::pcov_singular, "projection kernel direction has zero length");
            }
            const double cosine = inner.value() / (std::sqrt(n1.value()) * std::sqrt(n2.value()));
            return std::acos(std::clamp(cosine, -1.0, 1.0));
        }
    }
    return 0.0;
}

KernelPairSpec KernelChoice::resolve(const Sample& sample) const {
    switch (id) {
        case KernelId::dcov: return KernelPairSpec::dcov();
        case KernelId::pcov: return KernelPairSpec::pcov();
        case KernelId::ghsic:
            if (bandwidths) return KernelPairSpec::ghsic((*bandwidths)[0], (*bandwidths)[1]);
            return KernelPairSpec::ghsic(median_bandwidth(sample.x()), median_bandwidth(sample.y()));
    }
    return KernelPairSpec::dcov();
}

}  // namespace gammadep
