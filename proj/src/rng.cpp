#include "gammadep/rng.hpp"

#include <algorithm>
#include <numeric>

namespace gammadep {

std::vector<std::uint32_t> random_permutation(std::size_t n, Engine& engine) {
    std::vector<std::uint32_t> out(n);
    std::iota(out.begin(), out.end(), 0u);
    std::shuffle(out.begin(), out.end(), engine);
    return out;
}

}  // namespace gammadep
