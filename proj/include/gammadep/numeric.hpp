#pragma once

#include <cmath>
#include <span>

namespace gammadep {

/// Neumaier-compensated running sum.
class CompensatedSum {
  public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

/// Falling factorial (n)_k = n (n-1) ... (n-k+1) as a double.
inline double falling_factorial(std::size_t n, std::size_t k) noexcept {
    double out = 1.0;
    for (std::size_t i = 0; i < k; ++i) out *= static_cast<double>(n - i);
    return out;
}

}  // namespace gammadep
