#pragma once
// Unbiased estimates of S1, S2, S3.
//
// psi_1 pairs f2(y1, y2, y3, y4, ...), psi_2 pairs f2(y3, y4, y1, y2, ...),
// psi_3 pairs f2(y1, y3, y2, y4, ...); f1 always sees x in natural order.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gammadep/data_model.hpp"
#include "gammadep/kernels.hpp"

namespace gammadep {

struct TupleBudget {
    std::size_t max_n_bruteforce = 14;

    /// 14 for m = 4, 10 for m = 5.
    static TupleBudget for_arity(int m) noexcept { return {m >= 5 ? std::size_t{10} : std::size_t{14}}; }
};

/// Exact average over all (n)_m ordered distinct tuples.
/// Throws TOO_SMALL if n < m and TOO_LARGE above the budget.
StatTriple brute_force_triple(const Sample& sample, const KernelPairSpec& spec, TupleBudget budget,
                              unsigned threads = 1);
inline StatTriple brute_force_triple(const Sample& sample, const KernelPairSpec& spec) {
    return brute_force_triple(sample, spec, TupleBudget::for_arity(spec.arity()));
}

/// Sufficient statistics of the fast path (all sums over off-diagonal entries).
struct PairSums {
    double t1 = 0.0;      // sum_{i != j} a_ij b_ij
    double sum_rc = 0.0;  // sum_i R_i C_i
    double a_all = 0.0;   // A..
    double b_all = 0.0;   // B..
    std::size_t n = 0;
};

StatTriple triple_from_sums(const PairSums& sums, const KernelPairSpec& spec);

/// Precomputed hollow kernel matrices and row sums. Evaluates the triple for
/// any relabelling of y without rebuilding B: permuting y rows permutes rows
/// and columns of B, and leaves A.. and B.. unchanged.
class PairStatEngine {
  public:
    explicit PairStatEngine(const PairKernelMatrices& mats);

    std::size_t n() const noexcept { return n_; }
    const KernelPairSpec& kernel() const noexcept { return kernel_; }

    /// y row i replaced by y row perm[i].
    PairSums sums(std::span<const std::uint32_t> perm) const;
    PairSums sums() const;
    StatTriple triple(std::span<const std::uint32_t> perm) const { return triple_from_sums(sums(perm), kernel_); }
    StatTriple triple() const { return triple_from_sums(sums(), kernel_); }

  private:
    KernelPairSpec kernel_;
    std::size_t n_;
    std::vector<double> a_;  // hollow copies, row-major
    std::vector<double> b_;
    std::vector<double> row_a_;
    std::vector<double> row_b_;
    double a_all_;
    double b_all_;
    std::vector<std::uint32_t> identity_;
};

/// Closed-form O(n^2) triple for DCOV/GHSIC. Throws TOO_SMALL if n < 4.
StatTriple fast_triple_pair(const PairKernelMatrices& mats);

enum class PsiIndex { first, third };

/// Fully symmetrized psi_l at four distinct rows, from the kernel matrices.
/// Throws DUP_INDEX on repeated indices.
double symmetrized_psi_pair(const PairKernelMatrices& mats, PsiIndex l, std::array<std::size_t, 4> idx);

/// Same for any kernel, averaging psi_l over all m! orderings of the m rows.
double symmetrized_psi_generic(const Sample& sample, const KernelPairSpec& spec, PsiIndex l,
                               std::span<const std::size_t> idx);

}  // namespace gammadep
