#pragma once
// Jackknife estimate of the variance of the first-order projection of
// psi~_1 - psi~_3, used to studentize the even / infinite gamma statistics.

#include "gammadep/data_model.hpp"
#include "gammadep/kernels.hpp"
#include "gammadep/ustat.hpp"

namespace gammadep {

struct JackknifeEstimate {
    enum class Method { brute, fast };

    double sigma0_sq = 0.0;
    std::size_t n = 0;
    Method method = Method::fast;
};

/// For each i, average psi~_1 - psi~_3 over all (m-1)-subsets of the other
/// rows with row i included; sigma0^2 = (n-1)/(n-m)^2 * sum_i avg_i^2.
/// Throws TOO_SMALL if n <= m and TOO_LARGE above the budget.
JackknifeEstimate jackknife_brute(const Sample& sample, const KernelPairSpec& spec, TupleBudget budget,
                                  unsigned threads = 1);
inline JackknifeEstimate jackknife_brute(const Sample& sample, const KernelPairSpec& spec) {
    return jackknife_brute(sample, spec, TupleBudget::for_arity(spec.arity()));
}

/// Same quantity in O(n^2) from row sums of the kernel matrices.
/// Throws TOO_SMALL if n <= 4.
JackknifeEstimate jackknife_fast(const PairKernelMatrices& mats);

}  // namespace gammadep
