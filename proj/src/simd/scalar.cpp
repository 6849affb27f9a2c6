#include <cmath>

#include "gammadep/simd.hpp"

namespace gammadep::simd {

namespace {

void distance_row_scalar(ColumnView z, std::size_t i, std::size_t begin, std::size_t end, double* out) {
    for (std::size_t j = begin; j < end; ++j) {
        double s = 0.0;
        double c = 0.0;
        for (std::size_t k = 0; k < z.dims; ++k) {
            const double* col = z.cols + k * z.stride;
            const double diff = col[j] - col[i];
            const double sq = diff * diff;
            const double t = s + sq;
            if (std::fabs(s) >= std::fabs(sq)) {
                c += (s - t) + sq;
            } else {
                c += (sq - t) + s;
            }
            s = t;
        }
        out[j - begin] = std::sqrt(s + c);
    }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += a[j] * b[j];
    return acc;
}

double gather_dot_scalar(const double* a, const double* b, const std::uint32_t* idx, std::size_t n) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += a[j] * b[idx[j]];
    return acc;
}

double sum_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += a[j];
    return acc;
}

constexpr KernelTable kScalar{distance_row_scalar, dot_scalar, gather_dot_scalar, sum_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace gammadep::simd
