#pragma once

#include <algorithm>
#include <array>

namespace heatbasis {

/// Truncated Taylor expansion of order ≤ 4 in three spatial variables.
/// coeff(e) is the coefficient of h^e, so ∂^e f = e! · coeff(e). Products
/// truncate at the smaller operand order.
class Jet {
 public:
  static constexpr int kOrder = 4;

  explicit Jet(int order = kOrder) : order_(order) { c_.fill(0.0); }
  static Jet constant(double v, int order = kOrder) {
    Jet j(order);
    j.c_[0] = v;
    return j;
  }
  /// The coordinate x_i expanded at value x0.
  static Jet variable(int i, double x0, int order = kOrder) {
    Jet j = constant(x0, order);
    if (order == 0) return j;
    std::array<int, 3> e{0, 0, 0};
    e[i] = 1;
    j.at(e) = 1.0;
    return j;
  }

  double& at(const std::array<int, 3>& e) { return c_[index(e)]; }
  double at(const std::array<int, 3>& e) const { return c_[index(e)]; }
  double value() const { return c_[0]; }
  int order() const { return order_; }

  /// ∂^α at the expansion point.
  double derivative(const std::array<int, 3>& alpha) const {
    double f = 1.0;
    for (int a : alpha)
      for (int q = 2; q <= a; ++q) f *= q;
    return f * at(alpha);
  }

  Jet operator+(const Jet& o) const {
    Jet r(order_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
  }
  Jet operator*(double s) const {
    Jet r(order_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] * s;
    return r;
  }
  Jet operator*(const Jet& o) const {
    const int K = std::min(order_, o.order_);
    Jet r(K);
    for (int a1 = 0; a1 <= K; ++a1)
      for (int b1 = 0; a1 + b1 <= K; ++b1)
        for (int c1 = 0; a1 + b1 + c1 <= K; ++c1) {
          const double u = at({a1, b1, c1});
          if (u == 0.0) continue;
          for (int a2 = 0; a1 + b1 + c1 + a2 <= K; ++a2)
            for (int b2 = 0; a1 + b1 + c1 + a2 + b2 <= K; ++b2)
              for (int c2 = 0; a1 + b1 + c1 + a2 + b2 + c2 <= K; ++c2)
                r.at({a1 + a2, b1 + b2, c1 + c2}) += u * o.at({a2, b2, c2});
        }
    return r;
  }

  /// F(this) given F and its first four derivatives at value().
  Jet compose(const std::array<double, kOrder + 1>& derivs) const {
    Jet h = *this;
    h.c_[0] = 0.0;
    Jet result = constant(derivs[0], order_);
    Jet power = constant(1.0, order_);
    double fact = 1.0;
    for (int q = 1; q <= order_; ++q) {
      power = power * h;
      fact *= q;
      result = result + power * (derivs[q] / fact);
    }
    return result;
  }

 private:
  static constexpr int index(const std::array<int, 3>& e) { return (e[0] * 5 + e[1]) * 5 + e[2]; }
  int order_;
  std::array<double, 125> c_;
};

}  // namespace heatbasis
