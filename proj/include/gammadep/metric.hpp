#pragma once
// gamma-aggregation of u = S1 - S3 and v = S2 - S3.

#include <vector>

#include "gammadep/data_model.hpp"

namespace gammadep {

/// Finite gamma: sign(s)|s|^(1/gamma) with s = u^gamma + v^gamma.
/// Infinity: max(u, v).
double aggregate(double u, double v, Gamma gamma) noexcept;

/// n^((gamma+1)/(2 gamma)) for odd gamma, sqrt(n) for even gamma and infinity.
double rate_w(std::size_t n, Gamma gamma) noexcept;

struct GammaStat {
    Gamma gamma = Gamma::finite(1);
    double mu_hat = 0.0;
    double scaled = 0.0;

    bool operator==(const GammaStat&) const = default;
};

std::vector<GammaStat> gamma_stats(const StatTriple& triple, const GammaSet& gammas);

}  // namespace gammadep
