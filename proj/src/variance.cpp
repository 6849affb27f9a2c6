#include "gammadep/variance.hpp"

#include <vector>

#include "gammadep/numeric.hpp"
#include "gammadep/parallel.hpp"

namespace gammadep {

namespace {

double finish(std::span<const double> h, std::size_t n, std::size_t m) {
    CompensatedSum ss;
    for (double x : h) ss.add(x * x);
    const double gap = static_cast<double>(n - m);
    return static_cast<double>(n - 1) / (gap * gap) * ss.value();
}

// Calls visit(subset) for every k-subset of {0..n-1} \ {skip}, in lexicographic order.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, std::size_t skip, F&& visit) {
    std::vector<std::size_t> pool;
    for (std::size_t j = 0; j < n; ++j)
        if (j != skip) pool.push_back(j);
    if (pool.size() < k) return;
    std::vector<std::size_t> pick(k);
    for (std::size_t j = 0; j < k; ++j) pick[j] = j;
    std::vector<std::size_t> chosen(k);
    while (true) {
        for (std::size_t j = 0; j < k; ++j) chosen[j] = pool[pick[j]];
        visit(chosen);
        std::size_t j = k;
        while (j > 0 && pick[j - 1] == pool.size() - k + j - 1) --j;
        if (j == 0) return;
        ++pick[j - 1];
        for (std::size_t q = j; q < k; ++q) pick[q] = pick[q - 1] + 1;
    }
}

}  // namespace

JackknifeEstimate jackknife_brute(const Sample& sample, const KernelPairSpec& spec, TupleBudget budget,
                                  unsigned threads) {
    const std::size_t n = sample.n();
    const auto m = static_cast<std::size_t>(spec.arity());
    if (n <= m) throw Error(ErrorCode::too_small, "jackknife needs n > " + std::to_string(m));
    if (n > budget.max_n_bruteforce) {
        throw Error(ErrorCode::too_large, "brute jackknife capped at n = " + std::to_string(budget.max_n_bruteforce));
    }
    std::optional<PairKernelMatrices> mats;
    if (spec.is_pair_dependent()) mats = pair_kernel_matrices(sample, spec);

    std::vector<double> h(n);
    parallel_for(n, threads, [&](std::size_t i) {
        CompensatedSum acc;
        std::size_t count = 0;
        std::vector<std::size_t> tuple(m);
        for_each_subset(n, m - 1, i, [&](const std::vector<std::size_t>& rest) {
            tuple[0] = i;
            std::copy(rest.begin(), rest.end(), tuple.begin() + 1);
            double d;
            if (mats) {
                const std::array<std::size_t, 4> t4{tuple[0], tuple[1], tuple[2], tuple[3]};
                d = symmetrized_psi_pair(*mats, PsiIndex::first, t4) - symmetrized_psi_pair(*mats, PsiIndex::third, t4);
            } else {
                d = symmetrized_psi_generic(sample, spec, PsiIndex::first, tuple) -
                    symmetrized_psi_generic(sample, spec, PsiIndex::third, tuple);
            }
            acc.add(d);
            ++count;
        });
        h[i] = acc.value() / static_cast<double>(count);
    });
    return {finish(h, n, m), n, JackknifeEstimate::Method::brute};
}

JackknifeEstimate jackknife_fast(const PairKernelMatrices& mats) {
    const std::size_t n = mats.n();
    if (n <= 4) throw Error(ErrorCode::too_small, "jackknife needs n > 4, got " + std::to_string(n));
    if (!mats.kernel.is_pair_dependent()) throw Error(ErrorCode::bad_argument, "kernel is not pair-dependent");

    // Hollow row sums R, C and per-row statistics; diagonals never enter.
    std::vector<double> r(n), c(n), t1_row(n);
    for (std::size_t i = 0; i < n; ++i) {
        CompensatedSum sr, sc, st;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sr.add(mats.a(i, j));
            sc.add(mats.b(i, j));
            st.add(mats.a(i, j) * mats.b(i, j));
        }
        r[i] = sr.value();
        c[i] = sc.value();
        t1_row[i] = st.value();
    }
    std::vector<double> d(n), e(n);  // D_i = sum_p a_ip C_p, E_i = sum_p b_ip R_p
    CompensatedSum t1_all, rc_all;
    for (std::size_t i = 0; i < n; ++i) {
        CompensatedSum sd, se;
        for (std::size_t p = 0; p < n; ++p) {
            if (p == i) continue;
            sd.add(mats.a(i, p) * c[p]);
            se.add(mats.b(i, p) * r[p]);
        }
        d[i] = sd.value();
        e[i] = se.value();
        t1_all.add(t1_row[i]);
        rc_all.add(r[i] * c[i]);
    }
    const double t1 = t1_all.value();
    const double sigma3 = rc_all.value() - t1;
    const auto nd = static_cast<double>(n);
    const double q = (nd - 1.0) * (nd - 2.0);

    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ti = t1_row[i];
        const double rci = r[i] * c[i];
        // psi~_1 average: one of the six pairs contains i with probability 1/2
        const double g1 = 0.5 * (ti / (nd - 1.0) + (t1 - 2.0 * ti) / q);
        // psi~_3 average: centre of the (p,q,r) star is i, or i is one of its
        // two leaves, or i is not involved
        const double g3 = 0.25 * ((rci - ti) / q + (d[i] - ti) / q + (e[i] - ti) / q +
                                  (sigma3 - rci - d[i] - e[i] + 3.0 * ti) / (q * (nd - 3.0)));
        h[i] = g1 - g3;
    }
    return {finish(h, n, 4), n, JackknifeEstimate::Method::fast};
}

}  // namespace gammadep
