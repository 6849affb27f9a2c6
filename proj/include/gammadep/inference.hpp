#pragma once
// Asymptotic and permutation p-values, and p-value combination.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gammadep/data_model.hpp"

namespace gammadep {

struct PermutationPlan {
    std::size_t b_count = 200;
    std::optional<std::uint64_t> seed;
    TieMode tie_mode = TieMode::strict;
};

/// Permutation b (1-based) of a plan: a pure function of (seed, b).
std::vector<std::uint32_t> plan_permutation(std::uint64_t seed, std::size_t b, std::size_t n);

/// Half-normal tail probability of t = scaled / (2^(1/gamma) m sigma0).
/// Throws BAD_GAMMA for odd gamma and BAD_SIGMA when sigma0 <= 0.
double asymptotic_pvalue(double scaled_mu, std::size_t n, Gamma gamma, double sigma0, int m);

/// sum -2 ln p. Throws ZERO_P if some p is 0.
double combine_fisher(std::span<const double> p);
/// -min p.
double combine_min(std::span<const double> p);
/// sum (1/2) tan(pi (1/2 - p)). Throws P_BOUNDARY if some p is 0 or 1.
double combine_cauchy(std::span<const double> p);
double combine(Combiner method, std::span<const double> p);

/// p_k = (1 + #{k' != k : s_k' > s_k}) / (B + 1) for every member of a pool
/// of B + 1 exchangeable statistics (>= under inclusive ties). A pool whose
/// members are all equal carries no evidence and gets p = 1 throughout.
std::vector<double> pooled_pvalues(std::span<const double> pool, TieMode mode);

/// Algorithm: statistics on the observed sample, on B relabellings of y, pooled
/// ranking per gamma, then combined statistics ranked the same way.
/// Throws SEED_REQUIRED if the plan has no seed.
TestReport permutation_test(const Sample& sample, const KernelPairSpec& spec, const GammaSet& gammas,
                            const PermutationPlan& plan, std::span<const Combiner> combiners, unsigned threads = 1);

}  // namespace gammadep
