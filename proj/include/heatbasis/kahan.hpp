#pragma once

namespace heatbasis {

/// Compensated (Kahan–Babuška/Neumaier) accumulator.
class KahanSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (sum_ >= 0 ? sum_ >= (v >= 0 ? v : -v) : -sum_ >= (v >= 0 ? v : -v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  KahanSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace heatbasis
