#pragma once
// Core value types shared by every gammadep module.

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gammadep {

enum class ErrorCode {
    row_mismatch,
    nonfinite,
    empty,
    bad_bandwidth,
    degenerate,
    arity,
    dim_mismatch,
    pcov_singular,
    too_large,
    too_small,
    dup_index,
    bad_gamma,
    bad_sigma,
    zero_p,
    p_boundary,
    seed_required,
    not_pd,
    bad_dim,
    bad_model,
    bad_argument,
    duplicate_gamma,
    io,
    parse,
    column_not_found,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message);
    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

/// Dense row-major matrix. Rows are observations, columns are coordinates.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }

    const std::vector<double>& values() const noexcept { return data_; }
    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }

    /// Copy with rows reordered: result row i is this row order[i].
    Matrix permuted_rows(std::span<const std::uint32_t> order) const;
    Matrix transposed() const;

    bool operator==(const Matrix&) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Paired observations {(x_i, y_i)}; immutable once validated.
class Sample {
  public:
    const Matrix& x() const noexcept { return x_; }
    const Matrix& y() const noexcept { return y_; }
    std::size_t n() const noexcept { return x_.rows(); }
    std::size_t d1() const noexcept { return x_.cols(); }
    std::size_t d2() const noexcept { return y_.cols(); }

    /// Same x, y rows reordered by `order`.
    Sample with_permuted_y(std::span<const std::uint32_t> order) const;

    bool operator==(const Sample&) const = default;

  private:
    Sample(Matrix x, Matrix y) : x_(std::move(x)), y_(std::move(y)) {}
    friend Sample validate_sample(Matrix x, Matrix y);

    Matrix x_;
    Matrix y_;
};

/// Validates shapes and finiteness. Throws ROW_MISMATCH, NONFINITE or EMPTY.
Sample validate_sample(Matrix x, Matrix y);

/// Aggregation order: a positive integer or infinity.
class Gamma {
  public:
    static Gamma finite(int order);
    static Gamma infinity() noexcept { return Gamma(0, true); }
    /// Accepts "1", "2", ..., "inf", "infinity".
    static Gamma parse(std::string_view text);

    bool is_infinite() const noexcept { return infinite_; }
    /// Finite order; 0 for infinity.
    int order() const noexcept { return order_; }
    bool is_odd() const noexcept { return !infinite_ && order_ % 2 == 1; }
    bool is_even() const noexcept { return !infinite_ && order_ % 2 == 0; }
    /// Even or infinite orders have a half-normal null limit.
    bool has_half_normal_limit() const noexcept { return !is_odd(); }

    std::string to_string() const;

    bool operator==(const Gamma&) const = default;

  private:
    Gamma(int order, bool infinite) noexcept : order_(order), infinite_(infinite) {}
    int order_;
    bool infinite_;
};

/// Ordered, duplicate-free candidate set of gammas.
class GammaSet {
  public:
    /// Throws DUPLICATE_GAMMA on repeats and BAD_GAMMA when empty.
    explicit GammaSet(std::vector<Gamma> gammas);
    /// Comma-separated list, e.g. "1,2,3,inf".
    static GammaSet parse(std::string_view text);
    /// {1,2,3,4,5,6,inf}
    static GammaSet standard();

    std::span<const Gamma> values() const noexcept { return gammas_; }
    std::size_t size() const noexcept { return gammas_.size(); }
    const Gamma& operator[](std::size_t i) const noexcept { return gammas_[i]; }
    std::string to_string() const;

    bool operator==(const GammaSet&) const = default;

  private:
    std::vector<Gamma> gammas_;
};

enum class KernelId { dcov, ghsic, pcov };

std::string_view to_string(KernelId id) noexcept;
KernelId parse_kernel_id(std::string_view text);

/// Kernel pair (f1 on x, f2 on y). Bandwidths exist exactly for GHSIC.
class KernelPairSpec {
  public:
    static KernelPairSpec dcov() noexcept { return KernelPairSpec(KernelId::dcov, std::nullopt); }
    static KernelPairSpec pcov() noexcept { return KernelPairSpec(KernelId::pcov, std::nullopt); }
    /// Throws BAD_BANDWIDTH unless both bandwidths are finite and positive.
    static KernelPairSpec ghsic(double sigma_x, double sigma_y);

    KernelId id() const noexcept { return id_; }
    int arity() const noexcept { return id_ == KernelId::pcov ? 5 : 4; }
    bool is_pair_dependent() const noexcept { return id_ != KernelId::pcov; }
    const std::optional<std::array<double, 2>>& bandwidths() const noexcept { return bandwidths_; }

    bool operator==(const KernelPairSpec&) const = default;

  private:
    KernelPairSpec(KernelId id, std::optional<std::array<double, 2>> bw) : id_(id), bandwidths_(bw) {}
    KernelId id_;
    std::optional<std::array<double, 2>> bandwidths_;
};

/// Unbiased estimates of S1, S2, S3 for one kernel pair.
struct StatTriple {
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;
    std::size_t n = 0;
    KernelPairSpec kernel = KernelPairSpec::dcov();

    double u() const noexcept { return s1 - s3; }
    double v() const noexcept { return s2 - s3; }

    bool operator==(const StatTriple&) const = default;
};

enum class Combiner { fisher, min, cauchy };

std::string_view to_string(Combiner c) noexcept;
Combiner parse_combiner(std::string_view text);

/// How permutation counts treat ties with the observed statistic.
enum class TieMode { strict, inclusive };

std::string_view to_string(TieMode mode) noexcept;
TieMode parse_tie_mode(std::string_view text);

struct GammaResult {
    Gamma gamma = Gamma::finite(1);
    double mu_hat = 0.0;
    double scaled_stat = 0.0;
    double p_perm = 1.0;
    std::optional<double> p_asym;

    bool operator==(const GammaResult&) const = default;
};

struct CombinedResult {
    Combiner method = Combiner::fisher;
    double stat = 0.0;
    double p_perm = 1.0;

    bool operator==(const CombinedResult&) const = default;
};

struct ReportMeta {
    std::size_t b_count = 0;
    std::uint64_t seed = 0;
    KernelPairSpec kernel = KernelPairSpec::dcov();
    GammaSet gammas = GammaSet::standard();
    std::size_t n = 0;
    std::size_t d1 = 0;
    std::size_t d2 = 0;
    TieMode tie_mode = TieMode::strict;

    bool operator==(const ReportMeta&) const = default;
};

struct TestReport {
    std::vector<GammaResult> per_gamma;
    std::vector<CombinedResult> combined;
    StatTriple triple;
    /// Jackknife variance; absent when it could not be formed.
    std::optional<double> sigma0_sq;
    ReportMeta meta;

    bool operator==(const TestReport&) const = default;
};

}  // namespace gammadep
