#include "gammadep/inference.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>

#include "gammadep/kernels.hpp"
#include "gammadep/metric.hpp"
#include "gammadep/parallel.hpp"
#include "gammadep/rng.hpp"
#include "gammadep/ustat.hpp"
#include "gammadep/variance.hpp"

namespace gammadep {

std::vector<std::uint32_t> plan_permutation(std::uint64_t seed, std::size_t b, std::size_t n) {
    Engine engine = make_engine(seed, b);
    return random_permutation(n, engine);
}

double asymptotic_pvalue(double scaled_mu, std::size_t n, Gamma gamma, double sigma0, int m) {
    (void)n;  // scaled_mu already carries the sqrt(n) rate
    if (gamma.is_odd()) throw Error(ErrorCode::bad_gamma, "no asymptotic null law for odd gamma " + gamma.to_string());
    if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) throw Error(ErrorCode::bad_sigma, "sigma0 must be positive");
    const double root2 = gamma.is_infinite() ? 1.0 : std::pow(2.0, 1.0 / gamma.order());
    const double t = scaled_mu / (root2 * m * sigma0);
    const double p = std::erfc(t / std::numbers::sqrt2);
    return std::clamp(p, DBL_MIN, 1.0);
}

double combine_fisher(std::span<const double> p) {
    double s = 0.0;
    for (double x : p) {
        if (!(x > 0.0)) throw Error(ErrorCode::zero_p, "Fisher combination needs p > 0");
        s += -2.0 * std::log(x);
    }
    return s;
}

double combine_min(std::span<const double> p) {
    if (p.empty()) throw Error(ErrorCode::bad_argument, "no p-values to combine");
    return -*std::min_element(p.begin(), p.end());
}

double combine_cauchy(std::span<const double> p) {
    double s = 0.0;
    for (double x : p) {
        if (!(x > 0.0 && x < 1.0)) throw Error(ErrorCode::p_boundary, "Cauchy combination needs 0 < p < 1");
        s += 0.5 * std::tan(std::numbers::pi * (0.5 - x));
    }
    return s;
}

double combine(Combiner method, std::span<const double> p) {
    switch (method) {
        case Combiner::fisher: return combine_fisher(p);
        case Combiner::min: return combine_min(p);
        case Combiner::cauchy: return combine_cauchy(p);
    }
    return 0.0;
}

std::vector<double> pooled_pvalues(std::span<const double> pool, TieMode mode) {
    const std::size_t size = pool.size();
    if (size == 0) return {};
    std::vector<double> out(size, 1.0);
    const auto [lo, hi] = std::minmax_element(pool.begin(), pool.end());
    if (*lo == *hi) return out;
    std::vector<double> sorted(pool.begin(), pool.end());
    std::sort(sorted.begin(), sorted.end());
    const auto denom = static_cast<double>(size);
    for (std::size_t k = 0; k < size; ++k) {
        std::size_t count;
        if (mode == TieMode::strict) {
            count = static_cast<std::size_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), pool[k]));
        } else {
            count = static_cast<std::size_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), pool[k])) - 1;
        }
        out[k] = (1.0 + static_cast<double>(count)) / denom;
    }
    return out;
}

TestReport permutation_test(const Sample& sample, const KernelPairSpec& spec, const GammaSet& gammas,
                            const PermutationPlan& plan, std::span<const Combiner> combiners, unsigned threads) {
    if (!plan.seed) throw Error(ErrorCode::seed_required, "permutation plan has no seed");
    if (plan.b_count == 0) throw Error(ErrorCode::bad_argument, "B must be positive");
    const std::uint64_t seed = *plan.seed;
    const std::size_t n = sample.n();
    const auto m = static_cast<std::size_t>(spec.arity());
    if (n < m) throw Error(ErrorCode::too_small, "need n >= " + std::to_string(m) + ", got " + std::to_string(n));
    const std::size_t B = plan.b_count;
    const std::size_t L = gammas.size();

    TestReport report;
    // stats[k * L + g]: pool member k (0 = observed) at gamma g
    std::vector<double> stats((B + 1) * L);
    auto store = [&](std::size_t k, const StatTriple& t) {
        const auto gs = gamma_stats(t, gammas);
        for (std::size_t g = 0; g < L; ++g) stats[k * L + g] = gs[g].scaled;
    };

    if (spec.is_pair_dependent()) {
        const PairKernelMatrices mats = pair_kernel_matrices(sample, spec, threads);
        const PairStatEngine engine(mats);
        report.triple = engine.triple();
        if (n > 4) report.sigma0_sq = jackknife_fast(mats).sigma0_sq;
        parallel_for(B, threads, [&](std::size_t b) {
            store(b + 1, engine.triple(plan_permutation(seed, b + 1, n)));
        });
    } else {
        const TupleBudget budget = TupleBudget::for_arity(spec.arity());
        report.triple = brute_force_triple(sample, spec, budget, threads);
        if (n > m) report.sigma0_sq = jackknife_brute(sample, spec, budget, threads).sigma0_sq;
        parallel_for(B, threads, [&](std::size_t b) {
            store(b + 1, brute_force_triple(sample.with_permuted_y(plan_permutation(seed, b + 1, n)), spec, budget));
        });
    }
    store(0, report.triple);

    // per-gamma pooled p-values, pvals[k * L + g]
    std::vector<double> pvals((B + 1) * L);
    std::vector<double> column(B + 1);
    for (std::size_t g = 0; g < L; ++g) {
        for (std::size_t k = 0; k <= B; ++k) column[k] = stats[k * L + g];
        const auto p = pooled_pvalues(column, plan.tie_mode);
        for (std::size_t k = 0; k <= B; ++k) pvals[k * L + g] = p[k];
    }

    const auto observed = gamma_stats(report.triple, gammas);
    const double sigma0 = report.sigma0_sq ? std::sqrt(*report.sigma0_sq) : 0.0;
    for (std::size_t g = 0; g < L; ++g) {
        GammaResult r{gammas[g], observed[g].mu_hat, observed[g].scaled, pvals[g], std::nullopt};
        if (gammas[g].has_half_normal_limit() && sigma0 > 0.0) {
            r.p_asym = asymptotic_pvalue(observed[g].scaled, n, gammas[g], sigma0, spec.arity());
        }
        report.per_gamma.push_back(r);
    }

    const double p_lo = 1.0 / static_cast<double>(B + 1);
    const double p_hi = static_cast<double>(B) / static_cast<double>(B + 1);
    std::vector<double> vec(L);
    for (Combiner method : combiners) {
        for (std::size_t k = 0; k <= B; ++k) {
            for (std::size_t g = 0; g < L; ++g) {
                const double p = pvals[k * L + g];
                vec[g] = method == Combiner::cauchy ? std::clamp(p, p_lo, p_hi) : p;
            }
            column[k] = combine(method, vec);
        }
        const auto p = pooled_pvalues(column, plan.tie_mode);
        report.combined.push_back({method, column[0], p[0]});
    }

    report.meta = ReportMeta{B, seed, spec, gammas, n, sample.d1(), sample.d2(), plan.tie_mode};
    return report;
}

}  // namespace gammadep
