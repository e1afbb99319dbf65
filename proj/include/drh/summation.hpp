#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

namespace drh {

// Neumaier-compensated accumulator. Merging two accumulators is order
// dependent, so callers merge in a fixed order to get reproducible bits.
class CompensatedSum {
 public:
  constexpr CompensatedSum() = default;
  explicit constexpr CompensatedSum(double v) : sum_(v) {}

  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  void merge(const CompensatedSum& other) {
    add(other.sum_);
    comp_ += other.comp_;
  }

  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }

  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexCompensatedSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  void merge(const ComplexCompensatedSum& other) {
    re_.merge(other.re_);
    im_.merge(other.im_);
  }
  [[nodiscard]] std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

// Fixed-shape pairwise merge: the tree depends only on parts.size().
template <class Acc>
Acc pairwise_merge(std::span<const Acc> parts) {
  if (parts.empty()) return Acc{};
  if (parts.size() == 1) return parts[0];
  const std::size_t half = parts.size() / 2;
  Acc left = pairwise_merge(parts.first(half));
  const Acc right = pairwise_merge(parts.subspan(half));
  left.merge(right);
  return left;
}

// K parallel compensated sums sharing one merge schedule.
template <std::size_t K>
struct SumVector {
  std::array<CompensatedSum, K> parts{};

  void add(const std::array<double, K>& terms) {
    for (std::size_t i = 0; i < K; ++i) parts[i].add(terms[i]);
  }
  void merge(const SumVector& other) {
    for (std::size_t i = 0; i < K; ++i) parts[i].merge(other.parts[i]);
  }
  [[nodiscard]] std::array<double, K> value() const {
    std::array<double, K> out{};
    for (std::size_t i = 0; i < K; ++i) out[i] = parts[i].value();
    return out;
  }
};

}  // namespace drh
