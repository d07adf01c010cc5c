#pragma once

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "heatbasis/domain.hpp"

namespace heatbasis {

/// Sparse real polynomial in (x₁, x₂, x₃, t). Exponent slot 3 is time.
class Polynomial {
 public:
  using Exponent = std::array<int, 4>;

  Polynomial() = default;
  static Polynomial constant(double c) {
    Polynomial p;
    p.add_term({0, 0, 0, 0}, c);
    return p;
  }
  /// The single variable x_i (i in 0..2) or t (i = 3).
  static Polynomial variable(int i) {
    Exponent e{0, 0, 0, 0};
    e[i] = 1;
    Polynomial p;
    p.add_term(e, 1.0);
    return p;
  }

  void add_term(const Exponent& e, double c) {
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  const std::map<Exponent, double>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  Polynomial operator+(const Polynomial& o) const {
    Polynomial r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }
  Polynomial operator-(const Polynomial& o) const { return *this + o * -1.0; }
  Polynomial operator*(double s) const {
    Polynomial r;
    if (s == 0.0) return r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, c * s);
    return r;
  }
  Polynomial operator*(const Polynomial& o) const {
    Polynomial r;
    for (const auto& [e1, c1] : terms_)
      for (const auto& [e2, c2] : o.terms_)
        r.add_term({e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]}, c1 * c2);
    return r;
  }

  /// ∂^order / ∂var^order.
  Polynomial derivative(int var, int order = 1) const {
    Polynomial r;
    for (const auto& [e, c] : terms_) {
      if (e[var] < order) continue;
      double f = c;
      for (int q = 0; q < order; ++q) f *= e[var] - q;
      Exponent ne = e;
      ne[var] -= order;
      r.add_term(ne, f);
    }
    return r;
  }

  /// ∂_t^j ∂^α_x.
  Polynomial derivative(const std::array<int, 3>& alpha, int j) const {
    Polynomial r = *this;
    for (int i = 0; i < 3; ++i)
      if (alpha[i] > 0) r = r.derivative(i, alpha[i]);
    if (j > 0) r = r.derivative(3, j);
    return r;
  }

  Polynomial laplacian(int n) const {
    Polynomial r;
    for (int i = 0; i < n; ++i) r = r + derivative(i, 2);
    return r;
  }

  double operator()(const Vec& x, double t) const {
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
      double m = c;
      for (int i = 0; i < 3; ++i)
        for (int q = 0; q < e[i]; ++q) m *= x[i];
      for (int q = 0; q < e[3]; ++q) m *= t;
      s += m;
    }
    return s;
  }
  double operator()(const SpaceTimePoint& p) const { return (*this)(p.x, p.t); }

  /// True when every term has spatial degree `degree` and no time factor.
  bool is_homogeneous_spatial(int degree) const {
    for (const auto& [e, c] : terms_)
      if (e[0] + e[1] + e[2] != degree || e[3] != 0) return false;
    return true;
  }

  /// Largest |coefficient|.
  double max_coefficient() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::map<Exponent, double> terms_;
};

}  // namespace heatbasis
