#pragma once
// Shared fixtures for the unit tests.

#include <random>

#include "gammadep/data_model.hpp"
#include "gammadep/rng.hpp"

namespace gammadep::testing {

inline Matrix gaussian_matrix(std::size_t n, std::size_t d, std::uint64_t seed) {
    Engine engine = make_engine(seed, 0x5eed);
    std::normal_distribution<double> z;
    Matrix m(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = z(engine);
    return m;
}

inline Sample gaussian_sample(std::size_t n, std::size_t d1, std::size_t d2, std::uint64_t seed) {
    return validate_sample(gaussian_matrix(n, d1, seed), gaussian_matrix(n, d2, seed ^ 0xabcdefULL));
}

inline Matrix constant_matrix(std::size_t n, std::size_t d, double value) { return Matrix(n, d, value); }

}  // namespace gammadep::testing
