#include "gammadep/ustat.hpp"

#include <algorithm>
#include <numeric>

#include "gammadep/numeric.hpp"
#include "gammadep/parallel.hpp"
#include "gammadep/simd.hpp"

namespace gammadep {

namespace {

// Argument order of f2 for psi_1, psi_2, psi_3 (0-based, first four slots).
constexpr std::array<std::array<int, 4>, 3> kYOrder{{{0, 1, 2, 3}, {2, 3, 0, 1}, {0, 2, 1, 3}}};

std::array<double, 3> psi_values(const Sample& s, const KernelPairSpec& spec, std::span<const std::size_t> t) {
    const std::size_t m = t.size();
    std::array<std::span<const double>, 5> xs{};
    std::array<std::span<const double>, 5> ys{};
    for (std::size_t k = 0; k < m; ++k) xs[k] = s.x().row(t[k]);
    const double f1 = eval_generic_kernel(spec, KernelSide::f1, std::span(xs.data(), m));
    std::array<double, 3> out{};
    for (int l = 0; l < 3; ++l) {
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t slot = k < 4 ? static_cast<std::size_t>(kYOrder[l][k]) : k;
            ys[k] = s.y().row(t[slot]);
        }
        out[l] = f1 * eval_generic_kernel(spec, KernelSide::f2, std::span(ys.data(), m));
    }
    return out;
}

void require_distinct(std::span<const std::size_t> idx) {
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (idx[i] == idx[j]) throw Error(ErrorCode::dup_index, "index " + std::to_string(idx[i]) + " repeated");
}

}  // namespace

StatTriple brute_force_triple(const Sample& sample, const KernelPairSpec& spec, TupleBudget budget, unsigned threads) {
    const std::size_t n = sample.n();
    const auto m = static_cast<std::size_t>(spec.arity());
    if (n < m) throw Error(ErrorCode::too_small, "need n >= " + std::to_string(m) + ", got " + std::to_string(n));
    if (n > budget.max_n_bruteforce) {
        throw Error(ErrorCode::too_large, "brute force capped at n = " + std::to_string(budget.max_n_bruteforce) +
                                              ", got " + std::to_string(n));
    }
    // one slot per leading index, reduced in order
    std::vector<std::array<double, 3>> partial(n);
    parallel_for(n, threads, [&](std::size_t first) {
        std::array<CompensatedSum, 3> acc;
        std::vector<std::size_t> t(m);
        t[0] = first;
        // odometer over the remaining m-1 slots
        std::vector<std::size_t> digits(m - 1, 0);
        while (true) {
            bool distinct = true;
            for (std::size_t k = 1; k < m && distinct; ++k) {
                t[k] = digits[k - 1];
                for (std::size_t q = 0; q < k; ++q)
                    if (t[q] == t[k]) {
                        distinct = false;
                        break;
                    }
            }
            if (distinct) {
                const auto v = psi_values(sample, spec, t);
                for (int l = 0; l < 3; ++l) acc[l].add(v[l]);
            }
            std::size_t pos = digits.size();
            while (pos > 0) {
                if (++digits[pos - 1] < n) break;
                digits[pos - 1] = 0;
                --pos;
            }
            if (pos == 0) break;
        }
        for (int l = 0; l < 3; ++l) partial[first][l] = acc[l].value();
    });
    std::array<CompensatedSum, 3> total;
    for (const auto& p : partial)
        for (int l = 0; l < 3; ++l) total[l].add(p[l]);
    const double count = falling_factorial(n, m);
    return StatTriple{total[0].value() / count, total[1].value() / count, total[2].value() / count, n, spec};
}

StatTriple triple_from_sums(const PairSums& s, const KernelPairSpec& spec) {
    const double n2 = falling_factorial(s.n, 2);
    const double n3 = falling_factorial(s.n, 3);
    const double n4 = falling_factorial(s.n, 4);
    const double sigma3 = s.sum_rc - s.t1;
    StatTriple out;
    out.s1 = s.t1 / n2;
    out.s3 = sigma3 / n3;
    out.s2 = (s.a_all * s.b_all - 4.0 * sigma3 - 2.0 * s.t1) / n4;
    out.n = s.n;
    out.kernel = spec;
    return out;
}

PairStatEngine::PairStatEngine(const PairKernelMatrices& mats)
    : kernel_(mats.kernel), n_(mats.n()), a_(mats.a.values()), b_(mats.b.values()), row_a_(n_), row_b_(n_) {
    if (!kernel_.is_pair_dependent()) throw Error(ErrorCode::bad_argument, "kernel is not pair-dependent");
    if (mats.b.rows() != n_ || mats.a.cols() != n_ || mats.b.cols() != n_) {
        throw Error(ErrorCode::dim_mismatch, "kernel matrices must both be n x n");
    }
    for (std::size_t i = 0; i < n_; ++i) {
        a_[i * n_ + i] = 0.0;
        b_[i * n_ + i] = 0.0;
    }
    CompensatedSum sa;
    CompensatedSum sb;
    for (std::size_t i = 0; i < n_; ++i) {
        row_a_[i] = compensated_sum(std::span(a_.data() + i * n_, n_));
        row_b_[i] = compensated_sum(std::span(b_.data() + i * n_, n_));
        sa.add(row_a_[i]);
        sb.add(row_b_[i]);
    }
    a_all_ = sa.value();
    b_all_ = sb.value();
    identity_.resize(n_);
    std::iota(identity_.begin(), identity_.end(), 0u);
}

PairSums PairStatEngine::sums() const { return sums(identity_); }

PairSums PairStatEngine::sums(std::span<const std::uint32_t> perm) const {
    if (perm.size() != n_) throw Error(ErrorCode::dim_mismatch, "permutation length differs from n");
    CompensatedSum t1;
    CompensatedSum rc;
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t pi = perm[i];
        t1.add(simd::gather_dot(a_.data() + i * n_, b_.data() + pi * n_, perm.data(), n_));
        rc.add(row_a_[i] * row_b_[pi]);
    }
    return PairSums{t1.value(), rc.value(), a_all_, b_all_, n_};
}

StatTriple fast_triple_pair(const PairKernelMatrices& mats) {
    if (mats.n() < 4) throw Error(ErrorCode::too_small, "need n >= 4, got " + std::to_string(mats.n()));
    return PairStatEngine(mats).triple();
}

double symmetrized_psi_pair(const PairKernelMatrices& mats, PsiIndex l, std::array<std::size_t, 4> idx) {
    require_distinct(idx);
    for (auto i : idx)
        if (i >= mats.n()) throw Error(ErrorCode::bad_argument, "index out of range");
    const auto a = [&](int p, int q) { return mats.a(idx[p], idx[q]); };
    const auto b = [&](int p, int q) { return mats.b(idx[p], idx[q]); };
    double s = 0.0;
    if (l == PsiIndex::first) {
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) s += a(p, q) * b(p, q);
        return s / 6.0;
    }
    for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q)
            for (int r = 0; r < 4; ++r)
                if (p != q && p != r && q != r) s += a(p, q) * b(p, r);
    return s / 24.0;
}

double symmetrized_psi_generic(const Sample& sample, const KernelPairSpec& spec, PsiIndex l,
                               std::span<const std::size_t> idx) {
    const auto m = static_cast<std::size_t>(spec.arity());
    if (idx.size() != m) throw Error(ErrorCode::arity, "expected " + std::to_string(m) + " indices");
    require_distinct(idx);
    std::vector<std::size_t> order(idx.begin(), idx.end());
    std::sort(order.begin(), order.end());
    const int which = l == PsiIndex::first ? 0 : 2;
    CompensatedSum acc;
    std::size_t count = 0;
    do {
        acc.add(psi_values(sample, spec, order)[which]);
        ++count;
    } while (std::next_permutation(order.begin(), order.end()));
    return acc.value() / static_cast<double>(count);
}

}  // namespace gammadep
