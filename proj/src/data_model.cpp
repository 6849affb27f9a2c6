#include "gammadep/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace gammadep {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::row_mismatch: return "ROW_MISMATCH";
        case ErrorCode::nonfinite: return "NONFINITE";
        case ErrorCode::empty: return "EMPTY";
        case ErrorCode::bad_bandwidth: return "BAD_BANDWIDTH";
        case ErrorCode::degenerate: return "DEGENERATE";
        case ErrorCode::arity: return "ARITY";
        case ErrorCode::dim_mismatch: return "DIM_MISMATCH";
        case ErrorCode::pcov_singular: return "PCOV_SINGULAR";
        case ErrorCode::too_large: return "TOO_LARGE";
        case ErrorCode::too_small: return "TOO_SMALL";
        case ErrorCode::dup_index: return "DUP_INDEX";
        case ErrorCode::bad_gamma: return "BAD_GAMMA";
        case ErrorCode::bad_sigma: return "BAD_SIGMA";
        case ErrorCode::zero_p: return "ZERO_P";
        case ErrorCode::p_boundary: return "P_BOUNDARY";
        case ErrorCode::seed_required: return "SEED_REQUIRED";
        case ErrorCode::not_pd: return "NOT_PD";
        case ErrorCode::bad_dim: return "BAD_DIM";
        case ErrorCode::bad_model: return "BAD_MODEL";
        case ErrorCode::bad_argument: return "BAD_ARGUMENT";
        case ErrorCode::duplicate_gamma: return "DUPLICATE_GAMMA";
        case ErrorCode::io: return "IO";
        case ErrorCode::parse: return "PARSE";
        case ErrorCode::column_not_found: return "COLUMN_NOT_FOUND";
    }
    return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
    if (data_.size() != rows * cols) {
        throw Error(ErrorCode::dim_mismatch, "matrix storage does not match its shape");
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw Error(ErrorCode::dim_mismatch, "ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::permuted_rows(std::span<const std::uint32_t> order) const {
    if (order.size() != rows_) throw Error(ErrorCode::dim_mismatch, "permutation length differs from row count");
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        auto src = row(order[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

Matrix Matrix::transposed() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

// ---------------------------------------------------------------------------
// Sample

Sample Sample::with_permuted_y(std::span<const std::uint32_t> order) const {
    return Sample(x_, y_.permuted_rows(order));
}

Sample validate_sample(Matrix x, Matrix y) {
    if (x.rows() != y.rows()) {
        throw Error(ErrorCode::row_mismatch,
                    "x has " + std::to_string(x.rows()) + " rows but y has " + std::to_string(y.rows()));
    }
    if (x.rows() == 0) throw Error(ErrorCode::empty, "sample has no observations");
    if (x.cols() == 0 || y.cols() == 0) throw Error(ErrorCode::empty, "sample has no coordinates");
    auto check = [](const Matrix& m, const char* name) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (!std::isfinite(m(i, j))) {
                    throw Error(ErrorCode::nonfinite, std::string(name) + " has a non-finite entry at row " +
                                                          std::to_string(i) + ", column " + std::to_string(j));
                }
    };
    check(x, "x");
    check(y, "y");
    return Sample(std::move(x), std::move(y));
}

// ---------------------------------------------------------------------------
// Gamma

Gamma Gamma::finite(int order) {
    if (order < 1) throw Error(ErrorCode::bad_gamma, "gamma must be a positive integer, got " + std::to_string(order));
    return Gamma(order, false);
}

Gamma Gamma::parse(std::string_view text) {
    auto t = trim(text);
    auto l = lower(t);
    if (l == "inf" || l == "infinity" || l == "∞") return infinity();
    int value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw Error(ErrorCode::bad_gamma, "cannot parse gamma '" + std::string(text) + "'");
    }
    return finite(value);
}

std::string Gamma::to_string() const { return infinite_ ? "inf" : std::to_string(order_); }

GammaSet::GammaSet(std::vector<Gamma> gammas) : gammas_(std::move(gammas)) {
    if (gammas_.empty()) throw Error(ErrorCode::bad_gamma, "gamma set is empty");
    for (std::size_t i = 0; i < gammas_.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (gammas_[i] == gammas_[j]) {
                throw Error(ErrorCode::duplicate_gamma, "gamma " + gammas_[i].to_string() + " listed twice");
            }
}

GammaSet GammaSet::parse(std::string_view text) {
    std::vector<Gamma> out;
    while (true) {
        auto comma = text.find(',');
        auto token = trim(text.substr(0, comma));
        if (!token.empty()) out.push_back(Gamma::parse(token));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return GammaSet(std::move(out));
}

GammaSet GammaSet::standard() {
    return GammaSet({Gamma::finite(1), Gamma::finite(2), Gamma::finite(3), Gamma::finite(4), Gamma::finite(5),
                     Gamma::finite(6), Gamma::infinity()});
}

std::string GammaSet::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < gammas_.size(); ++i) {
        if (i) out += ',';
        out += gammas_[i].to_string();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Kernel spec and enums

std::string_view to_string(KernelId id) noexcept {
    switch (id) {
        case KernelId::dcov: return "dcov";
        case KernelId::ghsic: return "ghsic";
        case KernelId::pcov: return "pcov";
    }
    return "unknown";
}

KernelId parse_kernel_id(std::string_view text) {
    auto l = lower(trim(text));
    if (l == "dcov") return KernelId::dcov;
    if (l == "ghsic" || l == "hsic") return KernelId::ghsic;
    if (l == "pcov") return KernelId::pcov;
    throw Error(ErrorCode::bad_argument, "unknown kernel '" + std::string(text) + "'");
}

KernelPairSpec KernelPairSpec::ghsic(double sigma_x, double sigma_y) {
    if (!(sigma_x > 0.0) || !(sigma_y > 0.0) || !std::isfinite(sigma_x) || !std::isfinite(sigma_y)) {
        throw Error(ErrorCode::bad_bandwidth, "GHSIC bandwidths must be finite and positive");
    }
    return KernelPairSpec(KernelId::ghsic, std::array<double, 2>{sigma_x, sigma_y});
}

std::string_view to_string(Combiner c) noexcept {
    switch (c) {
        case Combiner::fisher: return "fisher";
        case Combiner::min: return "min";
        case Combiner::cauchy: return "cauchy";
    }
    return "unknown";
}

Combiner parse_combiner(std::string_view text) {
    auto l = lower(trim(text));
    if (l == "fisher") return Combiner::fisher;
    if (l == "min") return Combiner::min;
    if (l == "cauchy") return Combiner::cauchy;
    throw Error(ErrorCode::bad_argument, "unknown combiner '" + std::string(text) + "'");
}

std::string_view to_string(TieMode mode) noexcept {
    return mode == TieMode::strict ? "strict" : "inclusive";
}

TieMode parse_tie_mode(std::string_view text) {
    auto l = lower(trim(text));
    if (l == "strict") return TieMode::strict;
    if (l == "inclusive") return TieMode::inclusive;
    throw Error(ErrorCode::bad_argument, "unknown tie mode '" + std::string(text) + "'");
}

}  // namespace gammadep
