#pragma once
// Data-parallel inner loops: portable scalar reference kernels plus AVX2
// variants, selected once at runtime from CPUID (override with
// GAMMADEP_SIMD=scalar|avx2 or set_isa()).
//
// The distance kernel vectorizes across target rows and keeps the per-entry
// operation order of the scalar kernel, so both produce bit-identical
// matrices. The reductions use a 4-lane accumulator in the AVX2 path and
// agree with the scalar path to rounding only.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace gammadep::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;

/// Best ISA supported by this CPU and build.
Isa detected_isa() noexcept;
/// ISA currently used by the dispatching entry points below.
Isa active_isa() noexcept;
/// Throws gammadep::Error(BAD_ARGUMENT) if `isa` is not available.
void set_isa(Isa isa);

/// RAII override of the active ISA, for tests and benchmarks.
class ScopedIsa {
  public:
    explicit ScopedIsa(Isa isa) : previous_(active_isa()) { set_isa(isa); }
    ~ScopedIsa() { set_isa(previous_); }
    ScopedIsa(const ScopedIsa&) = delete;
    ScopedIsa& operator=(const ScopedIsa&) = delete;

  private:
    Isa previous_;
};

/// Column-major coordinates: coordinate k of row j lives at cols[k * stride + j].
struct ColumnView {
    const double* cols;
    std::size_t stride;
    std::size_t dims;
};

struct KernelTable {
    /// out[j - begin] = Euclidean distance between rows i and j, j in [begin, end).
    /// Squared differences are accumulated with Neumaier compensation.
    void (*distance_row)(ColumnView z, std::size_t i, std::size_t begin, std::size_t end, double* out);
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// sum_j a[j] * b[idx[j]]
    double (*gather_dot)(const double* a, const double* b, const std::uint32_t* idx, std::size_t n);
    double (*sum)(const double* a, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the build or CPU lacks AVX2.
const KernelTable* avx2_kernels() noexcept;
const KernelTable& active_kernels() noexcept;

inline void distance_row(ColumnView z, std::size_t i, std::size_t begin, std::size_t end, double* out) {
    active_kernels().distance_row(z, i, begin, end, out);
}
inline double dot(const double* a, const double* b, std::size_t n) { return active_kernels().dot(a, b, n); }
inline double gather_dot(const double* a, const double* b, const std::uint32_t* idx, std::size_t n) {
    return active_kernels().gather_dot(a, b, idx, n);
}
inline double sum(const double* a, std::size_t n) { return active_kernels().sum(a, n); }

}  // namespace gammadep::simd
