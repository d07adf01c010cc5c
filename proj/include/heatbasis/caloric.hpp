#pragma once

// Exact solutions of the heat equation ∂_t u = Δu: heat polynomials,
// translates of the fundamental solution, separable Bessel–harmonic atoms on
// balls, static harmonics and the t·ΔG + G family. Every atom evaluates its
// own derivatives ∂_t^j ∂_x^α up to anisotropic order |α| + 2j ≤ 4.

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "heatbasis/domain.hpp"
#include "heatbasis/error.hpp"
#include "heatbasis/jet.hpp"
#include "heatbasis/polynomial.hpp"
#include "heatbasis/specialfn.hpp"

namespace heatbasis {

inline constexpr int kMaxDerivativeOrder = 4;

/// Derivative ∂_t^j ∂_x^α.
struct MultiIndex {
  std::array<int, 3> alpha{0, 0, 0};
  int j = 0;

  int spatial_order() const { return alpha[0] + alpha[1] + alpha[2]; }
  /// Anisotropic order |α| + 2j.
  int order() const { return spatial_order() + 2 * j; }
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

inline void check_multi_index(const MultiIndex& d, int n) {
  for (int i = 0; i < 3; ++i)
    if (d.alpha[i] < 0 || (i >= n && d.alpha[i] != 0)) throw InvalidArgument("invalid multi-index for dimension");
  if (d.j < 0) throw InvalidArgument("invalid multi-index: negative time order");
  if (d.order() > kMaxDerivativeOrder)
    throw InvalidArgument("unsupported derivative order " + std::to_string(d.order()) + " (cap is 4)");
}

/// Heat kernel Φ(x, t) = exp(−|x|²/4t) / (2√(πt))ⁿ for t > 0, 0 for t ≤ 0.
inline double fundamental_solution(int n, const Vec& x, double t) {
  if (t <= 0.0) {
    if (t == 0.0 && norm2(x, n) == 0.0) throw DomainError("fundamental solution is singular at (0, 0)");
    return 0.0;
  }
  return std::exp(-norm2(x, n) / (4.0 * t)) / std::pow(2.0 * std::sqrt(std::numbers::pi * t), n);
}

/// Physicists' Hermite polynomial H_m(u).
inline double hermite(int m, double u) {
  double h0 = 1.0, h1 = 2.0 * u;
  if (m == 0) return h0;
  for (int q = 1; q < m; ++q) {
    const double h2 = 2.0 * u * h1 - 2.0 * q * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

/// 1-D heat polynomial H_m(x, t) = m! Σ_{q ≤ m/2} t^q x^{m−2q} / (q!(m−2q)!)
/// as a polynomial in variable slot `var` and time.
inline Polynomial heat_polynomial_1d(int m, int var) {
  Polynomial p;
  double mfact = 1.0;
  for (int i = 2; i <= m; ++i) mfact *= i;
  for (int q = 0; 2 * q <= m; ++q) {
    double den = 1.0;
    for (int i = 2; i <= q; ++i) den *= i;
    for (int i = 2; i <= m - 2 * q; ++i) den *= i;
    Polynomial::Exponent e{0, 0, 0, q};
    e[var] = m - 2 * q;
    p.add_term(e, mfact / den);
  }
  return p;
}

/// Homogeneous harmonic polynomial |x|^k h^{(j)}_k(x/|x|) in Cartesian form.
inline Polynomial harmonic_polynomial(const HarmonicIndex& h) {
  const AzimuthalOrder o = azimuthal_order(h);
  // Re/Im (x + i y)^m
  auto planar = [](int m, bool imag) {
    Polynomial p;
    double binom = 1.0;
    for (int q = 0; q <= m; ++q) {
      if (q > 0) binom = binom * (m - q + 1) / q;
      if ((q % 2 == 1) != imag) continue;
      const double sign = ((imag ? (q - 1) / 2 : q / 2) % 2 == 0) ? 1.0 : -1.0;
      p.add_term({m - q, q, 0, 0}, sign * binom);
    }
    return p;
  };
  if (h.n == 2) {
    if (h.k == 0) return Polynomial::constant(1.0 / std::sqrt(2.0 * std::numbers::pi));
    return planar(h.k, o.is_sin) * (1.0 / std::sqrt(std::numbers::pi));
  }
  const int k = h.k, m = o.m;
  // Legendre P_k(u) = 2^{−k} Σ_q (−1)^q C(k,q) C(2k−2q,k) u^{k−2q}
  std::vector<double> leg(k + 1, 0.0);
  auto binom = [](int a, int b) {
    double r = 1.0;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  for (int q = 0; 2 * q <= k; ++q)
    leg[k - 2 * q] = (q % 2 == 0 ? 1.0 : -1.0) * binom(k, q) * binom(2 * k - 2 * q, k) / std::pow(2.0, k);
  // m-th derivative
  std::vector<double> dm(k + 1, 0.0);
  for (int i = m; i <= k; ++i) {
    double f = leg[i];
    for (int q = 0; q < m; ++q) f *= i - q;
    dm[i - m] = f;
  }
  Polynomial r2;
  r2.add_term({2, 0, 0, 0}, 1.0);
  r2.add_term({0, 2, 0, 0}, 1.0);
  r2.add_term({0, 0, 2, 0}, 1.0);
  // r^{k−m} P_k^{(m)}(z/r) = Σ_i c_i z^i (r²)^{(k−m−i)/2}
  Polynomial radial;
  for (int i = 0; i <= k - m; ++i) {
    if (dm[i] == 0.0 || (k - m - i) % 2 != 0) continue;
    Polynomial term;
    term.add_term({0, 0, i, 0}, dm[i]);
    for (int q = 0; q < (k - m - i) / 2; ++q) term = term * r2;
    radial = radial + term;
  }
  double ratio = 1.0;
  for (int i = k - m + 1; i <= k + m; ++i) ratio /= i;
  double nrm = std::sqrt((2.0 * k + 1.0) / (4.0 * std::numbers::pi) * ratio);
  if (m > 0) nrm *= std::numbers::sqrt2;
  return planar(m, o.is_sin) * radial * nrm;
}

enum class BoundaryProblem { Dirichlet, Neumann };

struct HeatPolynomialAtom {
  std::vector<int> degrees;
};
struct FundamentalTranslateAtom {
  Vec source{};
  double tau = 0.0;
};
/// e^{−λt} r^{(2−n)/2} J_p(√λ r) h^{(j)}_k(x/r), p = k + (n−2)/2, with
/// √λ·R2 the m-th zero of J_p (Dirichlet) or of the radial derivative of
/// the profile (Neumann; the zeros of J'_p when n = 2).
struct SeparableBallAtom {
  BoundaryProblem problem = BoundaryProblem::Dirichlet;
  int k = 0;
  int j = 1;
  int m = 1;
  double R2 = 1.0;
};
struct StaticHarmonicAtom {
  int k = 0;
  int j = 1;
};
/// t·ΔG + G for a homogeneous biharmonic polynomial G.
struct BiharmonicCaloricAtom {
  Polynomial G;
};

enum class AtomKind { HeatPolynomial, FundamentalTranslate, SeparableBall, StaticHarmonic, BiharmonicCaloric };

/// Immutable exact caloric function on ℝⁿ × ℝ.
class CaloricAtom {
 public:
  using Params = std::variant<HeatPolynomialAtom, FundamentalTranslateAtom, SeparableBallAtom,
                              StaticHarmonicAtom, BiharmonicCaloricAtom>;

  static CaloricAtom heat_polynomial(int n, std::vector<int> degrees) {
    check_dim(n);
    if (static_cast<int>(degrees.size()) != n) throw InvalidArgument("heat polynomial needs one degree per axis");
    Polynomial p = Polynomial::constant(1.0);
    for (int i = 0; i < n; ++i) {
      if (degrees[i] < 0) throw InvalidArgument("heat polynomial degrees must be >= 0");
      p = p * heat_polynomial_1d(degrees[i], i);
    }
    CaloricAtom a(n, HeatPolynomialAtom{std::move(degrees)});
    a.poly_ = std::move(p);
    return a;
  }

  static CaloricAtom fundamental_translate(int n, Vec source, double tau) {
    check_dim(n);
    for (int i = n; i < 3; ++i) source[i] = 0.0;
    return CaloricAtom(n, FundamentalTranslateAtom{source, tau});
  }

  static CaloricAtom separable_ball(int n, BoundaryProblem problem, int k, int j, int m, double R2) {
    if (n != 2 && n != 3) throw InvalidArgument("separable ball atoms need n in {2, 3}");
    if (m < 1) throw InvalidArgument("zero index m must be >= 1");
    if (!(R2 > 0)) throw InvalidArgument("R2 must be positive");
    const HarmonicIndex h(n, k, j);
    CaloricAtom a(n, SeparableBallAtom{problem, k, j, m, R2});
    a.order_ = k + 0.5 * (n - 2);
    const double z = problem == BoundaryProblem::Dirichlet ? bessel_zero(a.order_, m, ZeroKind::Function)
                                                           : ball_neumann_zero(n, a.order_, m);
    a.rate_ = z / R2;
    a.lambda_ = a.rate_ * a.rate_;
    a.poly_ = harmonic_polynomial(h);
    for (int e0 = 0; e0 <= 4; ++e0)
      for (int e1 = 0; e0 + e1 <= 4; ++e1)
        for (int e2 = 0; e0 + e1 + e2 <= 4; ++e2) {
          if ((n < 3 && e2 > 0)) continue;
          a.harmonic_taylor_.push_back({{e0, e1, e2}, a.poly_.derivative({e0, e1, e2}, 0)});
        }
    return a;
  }

  static CaloricAtom static_harmonic(int n, int k, int j) {
    if (n != 2 && n != 3) throw InvalidArgument("static harmonics need n in {2, 3}");
    const HarmonicIndex h(n, k, j);
    CaloricAtom a(n, StaticHarmonicAtom{k, j});
    a.poly_ = harmonic_polynomial(h);
    return a;
  }

  static CaloricAtom biharmonic_caloric(int n, Polynomial G) {
    check_dim(n);
    if (G.is_zero()) throw InvalidArgument("biharmonic polynomial must be nonzero");
    const int deg = [&] {
      const auto& e = G.terms().begin()->first;
      return e[0] + e[1] + e[2];
    }();
    if (!G.is_homogeneous_spatial(deg)) throw InvalidArgument("G must be a homogeneous spatial polynomial");
    for (const auto& [e, c] : G.terms())
      for (int i = n; i < 3; ++i)
        if (e[i] != 0) throw InvalidArgument("G uses coordinates beyond the dimension");
    const Polynomial bi = G.laplacian(n).laplacian(n);
    if (bi.max_coefficient() > 1e-12 * G.max_coefficient()) throw InvalidArgument("G is not biharmonic");
    CaloricAtom a(n, BiharmonicCaloricAtom{G});
    a.poly_ = Polynomial::variable(3) * G.laplacian(n) + G;
    return a;
  }

  int dim() const noexcept { return n_; }
  const Params& params() const noexcept { return params_; }
  AtomKind kind() const noexcept { return static_cast<AtomKind>(params_.index()); }
  bool is_polynomial() const noexcept {
    return kind() == AtomKind::HeatPolynomial || kind() == AtomKind::StaticHarmonic ||
           kind() == AtomKind::BiharmonicCaloric;
  }
  /// Polynomial form (polynomial kinds) or the harmonic factor Y (separable kind).
  const Polynomial& polynomial() const noexcept { return poly_; }
  /// λ = (zero/R2)² for separable atoms, 0 otherwise.
  double lambda() const noexcept { return lambda_; }
  /// Bessel order p = k + (n−2)/2 for separable atoms.
  double bessel_order() const noexcept { return order_; }

  /// False when the atom has a singularity in the closed cylinder.
  bool is_smooth_on(const Cylinder& cyl) const {
    if (const auto* f = std::get_if<FundamentalTranslateAtom>(&params_))
      return !cyl.closure_contains(SpaceTimePoint{f->source, f->tau});
    return true;
  }

  std::string describe() const;

  /// Evaluates several derivatives at one point into `out`.
  void eval_many(std::span<const MultiIndex> ds, const SpaceTimePoint& p, std::span<double> out) const;

  double eval(const MultiIndex& d, const SpaceTimePoint& p) const {
    double v = 0.0;
    eval_many(std::span<const MultiIndex>(&d, 1), p, std::span<double>(&v, 1));
    return v;
  }
  double operator()(const SpaceTimePoint& p) const { return eval(MultiIndex{}, p); }

 private:
  friend class AtomSampler;

  CaloricAtom(int n, Params p) : params_(std::move(p)), n_(n) {}
  static void check_dim(int n) {
    if (n < 1 || n > 3) throw InvalidArgument("unsupported dimension " + std::to_string(n));
  }

  // (radial) r^{−ν} J_ν(a·r), entire in r².
  static double scaled_bessel(double nu, double a, double r) {
    const double z = a * r;
    if (z < 2.0) {
      const double h = 0.5 * z, q = -h * h;
      double term = std::pow(0.5 * a, nu) / std::tgamma(nu + 1.0), sum = term;
      for (int i = 1; i < 60; ++i) {
        term *= q / (i * (nu + i));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
      }
      return sum;
    }
    return std::pow(r, -nu) * bessel_j(nu, z);
  }

  void eval_separable(std::span<const MultiIndex> ds, const SpaceTimePoint& p, std::span<double> out) const {
    int order = 0;
    for (const auto& d : ds) order = std::max(order, d.spatial_order());
    const double r = norm(p.x, n_);
    // F(s) = r^{−p} J_p(a r) at s = r²: F^{(q)}(s) = (−a/2)^q r^{−(p+q)} J_{p+q}(a r).
    std::array<double, Jet::kOrder + 1> fd{};
    double c = 1.0;
    for (int q = 0; q <= order; ++q) {
      fd[q] = c * scaled_bessel(order_ + q, rate_, r);
      c *= -0.5 * rate_;
    }
    Jet s(order);
    for (int i = 0; i < n_; ++i) {
      const Jet xi = Jet::variable(i, p.x[i], order);
      s = s + xi * xi;
    }
    const Jet radial = s.compose(fd);
    Jet harm(order);
    for (const auto& [e, dp] : harmonic_taylor_) {
      if (e[0] + e[1] + e[2] > order) continue;
      double f = 1.0;
      for (int v : e)
        for (int q = 2; q <= v; ++q) f *= q;
      harm.at(e) = dp(p.x, 0.0) / f;
    }
    const Jet prod = radial * harm;
    const double decay = std::exp(-lambda_ * p.t);
    for (std::size_t i = 0; i < ds.size(); ++i)
      out[i] = std::pow(-lambda_, ds[i].j) * decay * prod.derivative(ds[i].alpha);
  }

  void eval_fundamental(const FundamentalTranslateAtom& f, std::span<const MultiIndex> ds, const SpaceTimePoint& p,
                        std::span<double> out) const {
    const Vec x = sub(p.x, f.source);
    const double t = p.t - f.tau;
    if (t <= 0.0) {
      if (t == 0.0 && norm2(x, n_) == 0.0) throw DomainError("fundamental translate evaluated at its source");
      for (std::size_t i = 0; i < ds.size(); ++i) out[i] = 0.0;
      return;
    }
    const double phi = fundamental_solution(n_, x, t);
    // factor[i][m] = ∂_{x_i}^m φ(x_i)/φ(x_i) = (−1)^m (2√t)^{−m} H_m(x_i / 2√t)
    const double st = 2.0 * std::sqrt(t);
    std::array<std::array<double, 5>, 3> factor{};
    for (int i = 0; i < n_; ++i) {
      double scale = 1.0;
      for (int m = 0; m <= 4; ++m) {
        factor[i][m] = scale * hermite(m, x[i] / st);
        scale *= -1.0 / st;
      }
    }
    auto spatial = [&](const std::array<int, 3>& a) {
      double v = phi;
      for (int i = 0; i < n_; ++i) v *= factor[i][a[i]];
      return v;
    };
    for (std::size_t q = 0; q < ds.size(); ++q) {
      const MultiIndex& d = ds[q];
      // ∂_t^j Φ = Δ^j Φ
      if (d.j == 0) {
        out[q] = spatial(d.alpha);
      } else if (d.j == 1) {
        double v = 0.0;
        for (int i = 0; i < n_; ++i) {
          auto a = d.alpha;
          a[i] += 2;
          v += spatial(a);
        }
        out[q] = v;
      } else {
        double v = 0.0;
        for (int i = 0; i < n_; ++i)
          for (int l = 0; l < n_; ++l) {
            auto a = d.alpha;
            a[i] += 2;
            a[l] += 2;
            v += spatial(a);
          }
        out[q] = v;
      }
    }
  }

  Params params_;
  int n_;
  Polynomial poly_;
  double lambda_ = 0.0;
  double rate_ = 0.0;
  double order_ = 0.0;
  std::vector<std::pair<std::array<int, 3>, Polynomial>> harmonic_taylor_;
};

inline void CaloricAtom::eval_many(std::span<const MultiIndex> ds, const SpaceTimePoint& p,
                                   std::span<double> out) const {
  for (const auto& d : ds) check_multi_index(d, n_);
  switch (kind()) {
    case AtomKind::FundamentalTranslate:
      eval_fundamental(std::get<FundamentalTranslateAtom>(params_), ds, p, out);
      return;
    case AtomKind::SeparableBall:
      eval_separable(ds, p, out);
      return;
    default:
      for (std::size_t i = 0; i < ds.size(); ++i) out[i] = poly_.derivative(ds[i].alpha, ds[i].j)(p);
  }
}

inline std::string CaloricAtom::describe() const {
  return std::visit(
      [this](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, HeatPolynomialAtom>) {
          std::string s = "heat_polynomial(";
          for (std::size_t i = 0; i < a.degrees.size(); ++i) s += (i ? "," : "") + std::to_string(a.degrees[i]);
          return s + ")";
        } else if constexpr (std::is_same_v<T, FundamentalTranslateAtom>) {
          std::string s = "fundamental_translate(";
          for (int i = 0; i < n_; ++i) s += std::to_string(a.source[i]) + ",";
          return s + "tau=" + std::to_string(a.tau) + ")";
        } else if constexpr (std::is_same_v<T, SeparableBallAtom>) {
          return std::string("separable_ball(") + (a.problem == BoundaryProblem::Dirichlet ? "D" : "N") +
                 ",k=" + std::to_string(a.k) + ",j=" + std::to_string(a.j) + ",m=" + std::to_string(a.m) + ")";
        } else if constexpr (std::is_same_v<T, StaticHarmonicAtom>) {
          return "static_harmonic(k=" + std::to_string(a.k) + ",j=" + std::to_string(a.j) + ")";
        } else {
          return "biharmonic_caloric";
        }
      },
      params_);
}

/// Repeated evaluation of a fixed derivative list; caches derivative
/// polynomials for the polynomial kinds.
class AtomSampler {
 public:
  AtomSampler(const CaloricAtom& atom, std::vector<MultiIndex> ds) : atom_(&atom), ds_(std::move(ds)) {
    for (const auto& d : ds_) check_multi_index(d, atom.dim());
    if (atom.is_polynomial())
      for (const auto& d : ds_) polys_.push_back(atom.polynomial().derivative(d.alpha, d.j));
  }

  std::size_t size() const noexcept { return ds_.size(); }

  void sample(const SpaceTimePoint& p, std::span<double> out) const {
    if (!polys_.empty()) {
      for (std::size_t i = 0; i < polys_.size(); ++i) out[i] = polys_[i](p);
      return;
    }
    atom_->eval_many(ds_, p, out);
  }

 private:
  const CaloricAtom* atom_;
  std::vector<MultiIndex> ds_;
  std::vector<Polynomial> polys_;
};

/// ∂_t^j ∂_x^α of an atom at a point.
inline double eval_atom(const CaloricAtom& atom, const MultiIndex& d, const SpaceTimePoint& p) {
  return atom.eval(d, p);
}

/// Finite linear combination Σ cᵢ·atomᵢ; itself caloric.
class CaloricCombination {
 public:
  CaloricCombination() = default;
  explicit CaloricCombination(int n) : n_(n) {}
  CaloricCombination(const CaloricAtom& a) : n_(a.dim()) { add(1.0, a); }  // NOLINT(implicit)

  void add(double c, const CaloricAtom& a) {
    if (n_ == 0) n_ = a.dim();
    if (a.dim() != n_) throw InvalidArgument("combination mixes dimensions");
    terms_.emplace_back(c, a);
  }

  int dim() const noexcept { return n_; }
  const std::vector<std::pair<double, CaloricAtom>>& terms() const noexcept { return terms_; }

  double eval(const MultiIndex& d, const SpaceTimePoint& p) const {
    double s = 0.0;
    for (const auto& [c, a] : terms_)
      if (c != 0.0) s += c * a.eval(d, p);
    return s;
  }
  double operator()(const SpaceTimePoint& p) const { return eval(MultiIndex{}, p); }

  bool is_smooth_on(const Cylinder& cyl) const {
    for (const auto& [c, a] : terms_)
      if (c != 0.0 && !a.is_smooth_on(cyl)) return false;
    return true;
  }

 private:
  int n_ = 0;
  std::vector<std::pair<double, CaloricAtom>> terms_;
};

/// Anything exposing derivatives ∂_t^j ∂_x^α at space–time points.
template <class F>
concept CaloricField = requires(const F& f, const MultiIndex& d, const SpaceTimePoint& p) {
  { f.dim() } -> std::convertible_to<int>;
  { f.eval(d, p) } -> std::convertible_to<double>;
};

/// ∂_t u − Δu at a point; zero for caloric u.
template <CaloricField F>
double heat_residual(const F& u, const SpaceTimePoint& p) {
  double r = u.eval(MultiIndex{{0, 0, 0}, 1}, p);
  for (int i = 0; i < u.dim(); ++i) {
    MultiIndex d;
    d.alpha[i] = 2;
    r -= u.eval(d, p);
  }
  return r;
}

// --- JSON -----------------------------------------------------------------

inline nlohmann::json to_json(const CaloricAtom& a) {
  const int n = a.dim();
  return std::visit(
      [&](const auto& p) -> nlohmann::json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, HeatPolynomialAtom>) {
          return {{"kind", "heat_polynomial"}, {"degrees", p.degrees}};
        } else if constexpr (std::is_same_v<T, FundamentalTranslateAtom>) {
          return {{"kind", "fundamental_translate"}, {"source", detail::vec_to_json(p.source, n)}, {"tau", p.tau}};
        } else if constexpr (std::is_same_v<T, SeparableBallAtom>) {
          return {{"kind", "separable_ball"},
                  {"n", n},
                  {"problem", p.problem == BoundaryProblem::Dirichlet ? "dirichlet" : "neumann"},
                  {"k", p.k},
                  {"j", p.j},
                  {"m", p.m},
                  {"R2", p.R2}};
        } else if constexpr (std::is_same_v<T, StaticHarmonicAtom>) {
          return {{"kind", "static_harmonic"}, {"n", n}, {"k", p.k}, {"j", p.j}};
        } else {
          nlohmann::json terms = nlohmann::json::array();
          for (const auto& [e, c] : p.G.terms())
            terms.push_back({{"exp", std::vector<int>(e.begin(), e.begin() + n)}, {"coef", c}});
          return {{"kind", "biharmonic_caloric"}, {"n", n}, {"terms", terms}};
        }
      },
      a.params());
}

inline CaloricAtom atom_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "heat_polynomial") {
      auto deg = j.at("degrees").get<std::vector<int>>();
      return CaloricAtom::heat_polynomial(static_cast<int>(deg.size()), deg);
    }
    if (kind == "fundamental_translate") {
      int n = 0;
      const Vec y = detail::vec_from_json(j.at("source"), n);
      return CaloricAtom::fundamental_translate(n, y, j.at("tau").get<double>());
    }
    if (kind == "separable_ball") {
      const std::string prob = j.at("problem").get<std::string>();
      if (prob != "dirichlet" && prob != "neumann")
        throw InvalidArgument("invalid-config", "problem must be dirichlet or neumann");
      return CaloricAtom::separable_ball(j.at("n").get<int>(),
                                         prob == "dirichlet" ? BoundaryProblem::Dirichlet : BoundaryProblem::Neumann,
                                         j.at("k").get<int>(), j.at("j").get<int>(), j.at("m").get<int>(),
                                         j.at("R2").get<double>());
    }
    if (kind == "static_harmonic")
      return CaloricAtom::static_harmonic(j.at("n").get<int>(), j.at("k").get<int>(), j.at("j").get<int>());
    if (kind == "biharmonic_caloric") {
      const int n = j.at("n").get<int>();
      Polynomial G;
      for (const auto& t : j.at("terms")) {
        const auto e = t.at("exp").get<std::vector<int>>();
        if (static_cast<int>(e.size()) != n) throw InvalidArgument("invalid-config", "exponent length must equal n");
        Polynomial::Exponent ex{0, 0, 0, 0};
        for (int i = 0; i < n; ++i) ex[i] = e[i];
        G.add_term(ex, t.at("coef").get<double>());
      }
      return CaloricAtom::biharmonic_caloric(n, G);
    }
    throw InvalidArgument("invalid-config", "unknown atom kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("invalid-config", std::string("atom: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument("invalid-config", e.what());
  }
}

inline nlohmann::json dictionary_to_json(const std::vector<CaloricAtom>& dict) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& atom : dict) a.push_back(to_json(atom));
  return a;
}

inline std::vector<CaloricAtom> dictionary_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InvalidArgument("invalid-config", "dictionary must be a JSON array");
  std::vector<CaloricAtom> dict;
  for (const auto& e : j) dict.push_back(atom_from_json(e));
  return dict;
}

}  // namespace heatbasis
