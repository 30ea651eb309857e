#ifndef BURRCE_MATH_UTILS_HPP
#define BURRCE_MATH_UTILS_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace burrce {

/// ln(1 + e^t), evaluated as max(t,0) + log1p(e^-|t|) so it never
/// overflows; exact in both tails.
inline double softplus(double t) {
  if (std::isinf(t) && t < 0.0) return 0.0;
  return std::fmax(t, 0.0) + std::log1p(std::exp(-std::fabs(t)));
}

/// ln(1 + x^c) for x >= 0, c > 0, via softplus(c ln x). Safe where x^c
/// itself overflows or underflows.
inline double log1p_pow(double x, double c) {
  if (x == 0.0) return 0.0;
  return softplus(c * std::log(x));
}

/// Logistic function 1/(1 + e^-t), branch-stable for large |t|.
/// x^c/(1+x^c) == sigmoid(c ln x).
inline double sigmoid(double t) {
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

/// ln(e^t - 1) for t > 0, no overflow for large t.
inline double log_expm1(double t) {
  if (t > 36.8) return t;  // e^-t below double epsilon
  if (t > 0.5) return t + std::log1p(-std::exp(-t));
  return std::log(std::expm1(t));
}

/// Streaming pairwise summation (binary-counter scheme). The reduction
/// tree depends only on the number of pushed terms, so sums are
/// bit-identical at any thread count as long as push order is fixed.
class PairwiseSum {
 public:
  void push(double v) {
    std::uint64_t c = count_;
    int level = 0;
    while (c & 1u) {
      v += partial_[level];
      c >>= 1;
      ++level;
    }
    partial_[level] = v;
    ++count_;
  }

  double value() const {
    double s = 0.0;
    std::uint64_t c = count_;
    for (int level = 0; c != 0; ++level, c >>= 1) {
      if (c & 1u) s += partial_[level];
    }
    return s;
  }

  std::uint64_t count() const { return count_; }

 private:
  std::array<double, 64> partial_{};
  std::uint64_t count_ = 0;
};

}  // namespace burrce

#endif  // BURRCE_MATH_UTILS_HPP
