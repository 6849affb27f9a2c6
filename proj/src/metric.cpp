#include "gammadep/metric.hpp"

#include <algorithm>
#include <cmath>

namespace gammadep {

namespace {

double ipow(double x, int k) noexcept {
    if (k > 8) return std::pow(x, k);
    double r = x;
    for (int i = 1; i < k; ++i) r *= x;
    return r;
}

}  // namespace

double aggregate(double u, double v, Gamma gamma) noexcept {
    if (gamma.is_infinite()) return std::max(u, v);
    const int g = gamma.order();
    if (g == 1) return u + v;
    // scale first so high powers of small differences do not underflow
    const double scale = std::max(std::fabs(u), std::fabs(v));
    if (scale == 0.0) return 0.0;
    const double s = ipow(u / scale, g) + ipow(v / scale, g);
    if (s == 0.0) return 0.0;
    const double root = g == 2 ? std::sqrt(std::fabs(s)) : std::pow(std::fabs(s), 1.0 / g);
    return std::copysign(root, s) * scale;
}

double rate_w(std::size_t n, Gamma gamma) noexcept {
    const auto nd = static_cast<double>(n);
    if (gamma.is_odd()) {
        if (gamma.order() == 1) return nd;
        return std::pow(nd, (gamma.order() + 1.0) / (2.0 * gamma.order()));
    }
    return std::sqrt(nd);
}

std::vector<GammaStat> gamma_stats(const StatTriple& triple, const GammaSet& gammas) {
    std::vector<GammaStat> out;
    out.reserve(gammas.size());
    const double u = triple.u();
    const double v = triple.v();
    for (const Gamma& g : gammas.values()) {
        // gamma = 1 is taken as S1 + S2 - 2 S3 directly
        const double mu = g.order() == 1 && !g.is_infinite() ? triple.s1 + triple.s2 - 2.0 * triple.s3 : aggregate(u, v, g);
        out.push_back({g, mu, rate_w(triple.n, g) * mu});
    }
    return out;
}

}  // namespace gammadep
