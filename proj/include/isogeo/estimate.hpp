#pragma once

#include <cmath>
#include <cstdint>

namespace isogeo {

// Scalar Monte-Carlo estimate with its standard error and sample count.
struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

inline double combined_se(const EstimateWithError& a, const EstimateWithError& b) {
  return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

// Welford accumulator with an order-sensitive merge; chunked reductions merge
// partials in chunk order so results do not depend on the worker count.
class RunningStat {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningStat& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double delta = other.mean_ - mean_;
    const double total = na + nb;
    mean_ += delta * nb / total;
    m2_ += other.m2_ + delta * delta * na * nb / total;
    count_ += other.count_;
  }

  std::int64_t count() const { return count_; }
  double mean() const { return mean_; }

  // Unbiased sample variance; 0 for fewer than two observations.
  double variance() const {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }

  double sd() const { return std::sqrt(variance()); }

  double se() const {
    return count_ > 0 ? sd() / std::sqrt(static_cast<double>(count_)) : 0.0;
  }

  EstimateWithError estimate() const { return {mean(), se(), count()}; }

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Standard error of a binomial fraction p_hat over n trials.
inline double binomial_se(double p_hat, std::int64_t n) {
  if (n <= 0) return 0.0;
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

}  // namespace isogeo
