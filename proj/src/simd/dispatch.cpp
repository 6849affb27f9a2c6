#include <atomic>
#include <cstdlib>
#include <string>
#include <string_view>

#include "gammadep/data_model.hpp"
#include "gammadep/simd.hpp"

namespace gammadep::simd {

#if defined(GAMMADEP_HAVE_AVX2)
namespace detail {
const KernelTable& avx2_table() noexcept;
}
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(GAMMADEP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable* table_for(Isa isa) noexcept {
    if (isa == Isa::scalar) return &scalar_kernels();
    return avx2_kernels();
}

Isa initial_isa() noexcept {
    Isa isa = detected_isa();
    if (const char* env = std::getenv("GAMMADEP_SIMD")) {
        std::string_view s(env);
        if (s == "scalar") isa = Isa::scalar;
        // An unsupported request falls back to the detected ISA.
        if (s == "avx2" && avx2_kernels() != nullptr) isa = Isa::avx2;
    }
    return isa;
}

std::atomic<Isa>& active_slot() noexcept {
    static std::atomic<Isa> slot{initial_isa()};
    return slot;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

const KernelTable* avx2_kernels() noexcept {
#if defined(GAMMADEP_HAVE_AVX2)
    static const bool ok = cpu_has_avx2();
    return ok ? &detail::avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

Isa detected_isa() noexcept { return avx2_kernels() != nullptr ? Isa::avx2 : Isa::scalar; }

Isa active_isa() noexcept { return active_slot().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
    if (table_for(isa) == nullptr) {
        throw Error(ErrorCode::bad_argument, "SIMD level " + std::string(to_string(isa)) + " is not available");
    }
    active_slot().store(isa, std::memory_order_relaxed);
}

const KernelTable& active_kernels() noexcept { return *table_for(active_isa()); }

}  // namespace gammadep::simd
