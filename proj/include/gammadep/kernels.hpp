#pragma once
// Pairwise kernel matrices for pair-dependent kernels, and direct evaluation
// of the m-argument kernels used by the brute-force estimators.

#include <array>
#include <optional>
#include <span>

#include "gammadep/data_model.hpp"

namespace gammadep {

/// A = f1 over x pairs, B = f2 over y pairs, for a pair-dependent kernel.
struct PairKernelMatrices {
    KernelPairSpec kernel = KernelPairSpec::dcov();
    Matrix a;
    Matrix b;

    std::size_t n() const noexcept { return a.rows(); }
};

/// Euclidean distance matrix of the rows: symmetric, zero diagonal.
Matrix pairwise_dcov(const Matrix& z, unsigned threads = 1);

/// exp(-||z_i - z_j|| / (2 sigma^2)), using the unsquared norm.
/// Throws BAD_BANDWIDTH if sigma <= 0.
Matrix pairwise_ghsic(const Matrix& z, double sigma, unsigned threads = 1);

/// Median of the strictly positive pairwise distances.
/// Throws DEGENERATE when every row is identical (or n < 2).
double median_bandwidth(const Matrix& z);

/// Builds A and B for DCOV or GHSIC. Throws BAD_ARGUMENT for PCOV.
PairKernelMatrices pair_kernel_matrices(const Sample& sample, const KernelPairSpec& spec, unsigned threads = 1);

enum class KernelSide { f1, f2 };

/// f(z_1, ..., z_m) for the chosen side of the kernel pair.
/// Throws ARITY, DIM_MISMATCH, or PCOV_SINGULAR (zero-length direction).
double eval_generic_kernel(const KernelPairSpec& spec, KernelSide side, std::span<const std::span<const double>> args);

/// Kernel family plus optional fixed bandwidths; GHSIC without bandwidths
/// resolves them per sample with the median heuristic.
struct KernelChoice {
    KernelId id = KernelId::dcov;
    std::optional<std::array<double, 2>> bandwidths;

    KernelPairSpec resolve(const Sample& sample) const;
};

}  // namespace gammadep
