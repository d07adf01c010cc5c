#pragma once

// Doubly orthogonal systems on nested cylinders ω_{T1,T2} ⊂ Ω_{T1,T2}:
// orthonormal in a Sobolev product on the big cylinder and orthogonal in L²
// of the small one. Built from a dictionary of caloric atoms by whitening
// the big Gram matrix and diagonalizing the small one. Also: L² projection
// (density experiments), truncated continuation from ω to Ω, and partial
// sums of the reproducing kernel.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "heatbasis/caloric.hpp"
#include "heatbasis/domain.hpp"
#include "heatbasis/numerics.hpp"
#include "heatbasis/sobolev.hpp"

namespace heatbasis {

/// Throws unless `inner` sits strictly inside `outer` (concentric for round
/// bases) and both share the time interval.
inline void check_nested(const Cylinder& inner, const Cylinder& outer) {
  if (inner.dim() != outer.dim()) throw InvalidArgument("invalid-config", "nested cylinders differ in dimension");
  if (inner.t_start() != outer.t_start() || inner.t_end() != outer.t_end())
    throw InvalidArgument("invalid-config", "nested cylinders must share the time interval");
  const int n = inner.dim();
  auto center_radius = [](const BaseDomain& b, Vec& c, double& r) {
    if (const auto* s = std::get_if<Ball>(&b.shape())) {
      c = s->center;
      r = s->radius;
      return true;
    }
    if (const auto* s = std::get_if<Annulus>(&b.shape())) {
      c = s->center;
      r = s->r_outer;
      return true;
    }
    return false;
  };
  Vec ci{}, co{};
  double ri = 0, ro = 0;
  const bool round_in = center_radius(inner.base(), ci, ri);
  const bool round_out = center_radius(outer.base(), co, ro);
  if (round_in && round_out) {
    if (norm(sub(ci, co), n) != 0.0) throw InvalidArgument("invalid-config", "nested round domains must be concentric");
    if (!(ri < ro)) throw InvalidArgument("invalid-config", "inner radius must be strictly smaller than outer radius");
    return;
  }
  const auto* bi = std::get_if<Box>(&inner.base().shape());
  const auto* bo = std::get_if<Box>(&outer.base().shape());
  if (bi && bo) {
    for (int d = 0; d < n; ++d)
      if (!(bi->low[d] > bo->low[d] && bi->high[d] < bo->high[d]))
        throw InvalidArgument("invalid-config", "inner box must lie strictly inside the outer box");
    return;
  }
  throw InvalidArgument("invalid-config", "unsupported nesting of base domains");
}

/// Finite-dimensional realization of the restriction from the big cylinder
/// to the small one: one Gram matrix per inner product over the same atoms.
struct GramPair {
  std::vector<CaloricAtom> dictionary;
  InnerProductSpec big_spec;
  InnerProductSpec small_spec;
  DictionarySamples big_samples;
  DictionarySamples small_samples;
  SymmetricMatrix big;
  SymmetricMatrix small;

  int order() const { return static_cast<int>(dictionary.size()); }
};

inline GramPair build_gram_pair(std::vector<CaloricAtom> dictionary, const Cylinder& omega, const Cylinder& Omega,
                                InnerProductKind big_kind, const Resolution& small_res, const Resolution& big_res) {
  check_nested(omega, Omega);
  for (const auto& a : dictionary) {
    if (a.dim() != Omega.dim()) throw InvalidArgument("atom dimension differs from the cylinder dimension");
    if (!a.is_smooth_on(Omega))
      throw DomainError("atom " + a.describe() + " is singular inside the closed big cylinder");
  }
  InnerProductSpec big_spec = InnerProductSpec::make(big_kind, Omega, big_res);
  InnerProductSpec small_spec = InnerProductSpec::make(InnerProductKind::l2(), omega, small_res);
  DictionarySamples bs(dictionary, big_spec);
  DictionarySamples ss(dictionary, small_spec);
  SymmetricMatrix big = gram(bs);
  SymmetricMatrix small = gram(ss);
  return GramPair{std::move(dictionary), std::move(big_spec), std::move(small_spec), std::move(bs),
                  std::move(ss),         std::move(big),      std::move(small)};
}

/// Columns of `coefficients` are basis vectors b_ν in dictionary coordinates.
struct DoBasis {
  Matrix coefficients;
  std::vector<double> mu;  ///< ‖b_ν‖²_{L²(ω)}, descending
  int rank = 0;
  std::vector<int> pivots;      ///< dictionary indices spanning the retained subspace
  double big_residual = 0.0;    ///< max |(CᵀAC − I)ᵢⱼ|
  double small_offdiag = 0.0;   ///< max off-diagonal |(CᵀBC)ᵢⱼ|
  double small_diag_error = 0.0;  ///< max |(CᵀBC)ᵢᵢ − μᵢ|

  int size() const { return rank; }
};

namespace detail {

/// CᵀGC.
inline Matrix congruence(const Matrix& C, const SymmetricMatrix& G) { return C.transpose() * (G.dense() * C); }

}  // namespace detail

/// Whitens `big` with a truncated pivoted Cholesky factor L (rank r), forms
/// M = L⁻¹·small·L⁻ᵀ on the pivot atoms, diagonalizes M = V·diag(μ)·Vᵀ and
/// returns C = L⁻ᵀV scattered back to dictionary rows. Diagnostics are
/// recomputed from the original Gram matrices.
inline DoBasis double_orthogonal_basis(const SymmetricMatrix& big, const SymmetricMatrix& small, double rel_tol = 1e-10) {
  if (big.order() != small.order()) throw InvalidArgument("Gram matrices differ in order");
  const int n = big.order();
  const CholeskyFactor f = cholesky_trunc(big, rel_tol);
  const int r = f.rank;
  if (r == 0) throw InvalidArgument("double_orthogonal_basis: big Gram matrix has rank 0");
  const Matrix L = f.leading();
  // X = L⁻¹ S_pp, M = L⁻¹ Xᵀ
  Matrix X(r, r);
  for (int c = 0; c < r; ++c) {
    std::vector<double> col(r);
    for (int i = 0; i < r; ++i) col[i] = small(f.perm[i], f.perm[c]);
    const auto y = solve_lower(L, col);
    for (int i = 0; i < r; ++i) X(i, c) = y[i];
  }
  Matrix M(r, r);
  for (int c = 0; c < r; ++c) {
    std::vector<double> row(r);
    for (int i = 0; i < r; ++i) row[i] = X(c, i);
    const auto y = solve_lower(L, row);
    for (int i = 0; i < r; ++i) M(i, c) = y[i];
  }
  const EigenDecomposition eig = symmetric_eig(SymmetricMatrix::from_lower(M));
  DoBasis b;
  b.rank = r;
  b.mu = eig.eigenvalues;
  b.pivots.assign(f.perm.begin(), f.perm.begin() + r);
  b.coefficients = Matrix(n, r);
  for (int c = 0; c < r; ++c) {
    const auto x = solve_lower_transpose(L, eig.eigenvectors.column(c));
    for (int i = 0; i < r; ++i) b.coefficients(f.perm[i], c) = x[i];
  }
  const Matrix A = detail::congruence(b.coefficients, big);
  const Matrix B = detail::congruence(b.coefficients, small);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      b.big_residual = std::max(b.big_residual, std::abs(A(i, j) - (i == j ? 1.0 : 0.0)));
      if (i != j)
        b.small_offdiag = std::max(b.small_offdiag, std::abs(B(i, j)));
      else
        b.small_diag_error = std::max(b.small_diag_error, std::abs(B(i, i) - b.mu[i]));
    }
  return b;
}

inline DoBasis double_orthogonal_basis(const GramPair& pair, double rel_tol = 1e-10) {
  return double_orthogonal_basis(pair.big, pair.small, rel_tol);
}

/// (target, atomᵢ)_{L²(ω)} for every dictionary atom, plus ‖target‖².
struct TargetMoments {
  std::vector<double> products;
  double norm2 = 0.0;
};

template <class Target>
TargetMoments target_moments(const Target& target, const GramPair& pair) {
  const auto& rule = pair.small_spec.rule;
  std::vector<double> tv(rule.size());
  for (std::size_t q = 0; q < rule.size(); ++q) tv[q] = target(rule.nodes[q]);
  TargetMoments m;
  KahanSum nrm;
  for (std::size_t q = 0; q < rule.size(); ++q) nrm += rule.weights[q] * (tv[q] * tv[q]);
  m.norm2 = nrm.value();
  m.products.resize(pair.dictionary.size());
  for (std::size_t a = 0; a < pair.dictionary.size(); ++a) {
    const auto va = pair.small_samples.values(a, 0);
    KahanSum s;
    for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * (tv[q] * va[q]);
    m.products[a] = s.value();
  }
  return m;
}

struct Projection {
  std::vector<double> coefficients;
  double residual = 0.0;     ///< min ‖target − Σ cᵢ atomᵢ‖_{L²(ω)}
  double target_norm = 0.0;  ///< ‖target‖_{L²(ω)}
  int rank = 0;
};

/// Least-squares L²(ω) projection of `target` onto the dictionary span.
/// Atoms are whitened in dictionary order, dropping any atom whose distance
/// from the span of the kept ones is negligible (cholesky_sequential), so
/// growing a dictionary by appending atoms grows the span. The residual is
/// integrated directly on the small rule.
template <class Target>
Projection project_l2(const Target& target, const GramPair& pair, double rel_tol = 1e-10) {
  const auto& rule = pair.small_spec.rule;
  const TargetMoments mom = target_moments(target, pair);
  Projection p;
  p.target_norm = std::sqrt(mom.norm2);
  p.coefficients.assign(pair.dictionary.size(), 0.0);
  if (pair.dictionary.empty() || mom.norm2 == 0.0) {
    p.residual = p.target_norm;
    return p;
  }
  const CholeskyFactor f = cholesky_sequential(pair.small, rel_tol);
  p.rank = f.rank;
  if (f.rank > 0) {
    const Matrix L = f.leading();
    std::vector<double> b(f.rank);
    for (int i = 0; i < f.rank; ++i) b[i] = mom.products[f.perm[i]];
    const auto x = solve_lower_transpose(L, solve_lower(L, b));
    for (int i = 0; i < f.rank; ++i) p.coefficients[f.perm[i]] = x[i];
  }
  KahanSum res;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    double v = target(rule.nodes[q]);
    for (std::size_t a = 0; a < pair.dictionary.size(); ++a)
      if (p.coefficients[a] != 0.0) v -= p.coefficients[a] * pair.small_samples.values(a, 0)[q];
    res += rule.weights[q] * (v * v);
  }
  p.residual = std::sqrt(std::max(0.0, res.value()));
  return p;
}

/// Dictionary combination Σ_ν c_ν b_ν with c_ν = (target, b_ν)_{L²(ω)} / μ_ν
/// for ν < n_trunc: a truncated spectral continuation from ω to Ω.
template <class Target>
CaloricCombination continue_solution(const Target& target, const DoBasis& basis, const GramPair& pair, int n_trunc) {
  if (n_trunc < 0 || n_trunc > basis.rank)
    throw InvalidArgument("continue_solution: truncation index outside [0, rank]");
  const TargetMoments mom = target_moments(target, pair);
  const int n = pair.order();
  std::vector<double> dict_coeffs(n, 0.0);
  const double mu1 = basis.mu.empty() ? 0.0 : basis.mu.front();
  for (int v = 0; v < n_trunc; ++v) {
    if (!(basis.mu[v] >= 1e-14 * mu1) || basis.mu[v] <= 0.0)
      throw TruncationRequired("continue_solution: mu_" + std::to_string(v + 1) + " is below 1e-14·mu_1");
    double pairing = 0.0;
    for (int i = 0; i < n; ++i) pairing += basis.coefficients(i, v) * mom.products[i];
    const double c = pairing / basis.mu[v];
    for (int i = 0; i < n; ++i) dict_coeffs[i] += c * basis.coefficients(i, v);
  }
  CaloricCombination out(pair.dictionary.empty() ? 0 : pair.dictionary.front().dim());
  for (int i = 0; i < n; ++i)
    if (dict_coeffs[i] != 0.0) out.add(dict_coeffs[i], pair.dictionary[i]);
  return out;
}

/// Deterministic points of Ω∖ω̄ × (T1, T2) for concentric round bases:
/// radii spread over (R1, R2), golden-angle directions, times spread over
/// the open interval.
inline std::vector<SpaceTimePoint> gap_probes(const Cylinder& omega, const Cylinder& Omega, int count) {
  check_nested(omega, Omega);
  const auto round = [](const BaseDomain& b, Vec& c) -> double {
    if (const auto* s = std::get_if<Ball>(&b.shape())) {
      c = s->center;
      return s->radius;
    }
    if (const auto* s = std::get_if<Annulus>(&b.shape())) {
      c = s->center;
      return s->r_outer;
    }
    throw InvalidArgument("gap_probes needs round bases");
  };
  Vec c{};
  const double R1 = round(omega.base(), c);
  const double R2 = round(Omega.base(), c);
  const int n = Omega.dim();
  const double T1 = Omega.t_start(), L = Omega.t_end() - T1;
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  std::vector<SpaceTimePoint> out;
  for (int i = 0; i < count; ++i) {
    const double frac = (i + 0.5) / count;
    const double r = R1 + (R2 - R1) * (0.1 + 0.8 * frac);
    const double u = std::fmod((i + 0.5) * golden, 1.0);
    Vec d{};
    if (n == 1) {
      d[0] = i % 2 == 0 ? 1.0 : -1.0;
    } else if (n == 2) {
      d = {std::cos(2.0 * std::numbers::pi * u), std::sin(2.0 * std::numbers::pi * u), 0.0};
    } else {
      const double z = 1.0 - 2.0 * frac;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      d = {rho * std::cos(2.0 * std::numbers::pi * u), rho * std::sin(2.0 * std::numbers::pi * u), z};
    }
    SpaceTimePoint p;
    for (int k = 0; k < n; ++k) p.x[k] = c[k] + r * d[k];
    p.t = T1 + L * (0.05 + 0.9 * std::fmod((i + 0.5) * 0.3819660112501051, 1.0));
    out.push_back(p);
  }
  return out;
}

/// Values of b_1..b_N at a point.
inline std::vector<double> basis_values(const DoBasis& basis, std::span<const CaloricAtom> dict, const SpaceTimePoint& p,
                                        int N) {
  std::vector<double> atoms(dict.size());
  for (std::size_t i = 0; i < dict.size(); ++i)
    atoms[i] = dict[i](p);
  std::vector<double> e(N, 0.0);
  for (int v = 0; v < N; ++v) {
    double s = 0.0;
    for (std::size_t i = 0; i < dict.size(); ++i) s += basis.coefficients(static_cast<int>(i), v) * atoms[i];
    e[v] = s;
  }
  return e;
}

/// K_N(P, Q) = Σ_{ν < N} b_ν(P)·b_ν(Q).
inline double kernel_partial_sum(const DoBasis& basis, std::span<const CaloricAtom> dict, const SpaceTimePoint& P,
                                 const SpaceTimePoint& Q, int N) {
  if (N < 0 || N > basis.rank) throw InvalidArgument("kernel_partial_sum: N outside [0, rank]");
  if (N == 0) return 0.0;
  const auto ep = basis_values(basis, dict, P, N);
  const auto eq = basis_values(basis, dict, Q, N);
  double s = 0.0;
  for (int v = 0; v < N; ++v) s += ep[v] * eq[v];
  return s;
}

/// (u, K_N(P, ·))_big for u = Σ uᵢ atomᵢ, evaluated through the big Gram
/// matrix: Σ_ν b_ν(P)·(u, b_ν)_big.
inline double kernel_reproduce(const DoBasis& basis, const GramPair& pair, std::span<const double> u_coeffs,
                               const SpaceTimePoint& P, int N) {
  const auto ep = basis_values(basis, pair.dictionary, P, N);
  const auto Au = pair.big.dense() * u_coeffs;
  double s = 0.0;
  for (int v = 0; v < N; ++v) {
    double c = 0.0;
    for (int i = 0; i < pair.order(); ++i) c += basis.coefficients(i, v) * Au[i];
    s += ep[v] * c;
  }
  return s;
}

// --- density experiments ----------------------------------------------------

enum class DensityScenario { NoHole, Hole };

struct DensityConfig {
  int n = 2;
  double T1 = 0.0;
  double T2 = 1.0;
  double hole_radius = 0.25;  ///< inner radius of the annulus ω (Hole)
  double R1 = 0.5;            ///< outer radius of ω
  double R2 = 1.0;            ///< radius of Ω
  double shell_factor = 1.5;  ///< source shell radius R3 = shell_factor·R2
  int heat_degree = 4;        ///< heat polynomials of total degree ≤ this
  std::vector<int> sizes{8, 16, 32, 64, 128};  ///< numbers of fundamental translates
  Resolution small_res{16, 32, 16};
  double rel_tol = 1e-12;
  double target_scale = 1.0;  ///< 0 gives the zero target
  /// NoHole target source: spatial offset along x₁ (in units of R2) and
  /// time lag before T1 (in units of T2 − T1).
  double nohole_source_radius = 0.0;
  double nohole_source_lag = 0.1;
};

struct DensityPoint {
  int N = 0;            ///< total dictionary size
  int translates = 0;   ///< number of fundamental translates in it
  double residual = 0.0;
  double relative = 0.0;
};

struct DensityCurve {
  DensityScenario scenario = DensityScenario::NoHole;
  double target_norm = 0.0;
  std::vector<DensityPoint> points;
};

/// Space–time sources of the fundamental-translate family: a prefix-stable
/// sequence on the sphere of radius R3 with times cycling through three
/// rings below T1 and three levels inside (T1, T2).
inline std::vector<SpaceTimePoint> shell_sources(int n, double R3, double T1, double T2, int count) {
  const double len = T2 - T1;
  const std::array<double, 6> times{T1 - 0.1 * len, T1 + 0.25 * len, T1 - 0.3 * len,
                                    T1 + 0.5 * len, T1 - 0.6 * len, T1 + 0.75 * len};
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  std::vector<SpaceTimePoint> out;
  for (int i = 0; i < count; ++i) {
    SpaceTimePoint p;
    const double u = std::fmod((i + 0.5) * golden, 1.0);
    if (n == 1) {
      p.x[0] = (i % 2 == 0 ? 1.0 : -1.0) * R3;
    } else if (n == 2) {
      const double th = 2.0 * std::numbers::pi * u;
      p.x = {R3 * std::cos(th), R3 * std::sin(th), 0.0};
    } else {
      const double z = 1.0 - 2.0 * (i + 0.5) / std::max(count, 1);
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double ph = 2.0 * std::numbers::pi * u;
      p.x = {R3 * rho * std::cos(ph), R3 * rho * std::sin(ph), R3 * z};
    }
    p.t = times[i % times.size()];
    out.push_back(p);
  }
  return out;
}

/// Heat polynomials (products of 1-D ones) of total degree ≤ cap, graded.
inline std::vector<CaloricAtom> heat_polynomial_family(int n, int cap) {
  std::vector<CaloricAtom> out;
  for (int d = 0; d <= cap; ++d)
    for (const auto& e : multi_indices(n, d)) out.push_back(CaloricAtom::heat_polynomial(n, {e.begin(), e.begin() + n}));
  return out;
}

struct DensityGeometry {
  Cylinder omega;
  Cylinder Omega;
  CaloricAtom target;
};

inline DensityGeometry density_geometry(DensityScenario scenario, const DensityConfig& cfg) {
  const int n = cfg.n;
  if (!(cfg.R1 < cfg.R2)) throw InvalidArgument("invalid-config", "R1 must be smaller than R2");
  const Cylinder Omega(BaseDomain::ball(n, {}, cfg.R2), cfg.T1, cfg.T2);
  if (scenario == DensityScenario::Hole) {
    if (!(cfg.hole_radius > 0 && cfg.hole_radius < cfg.R1))
      throw InvalidArgument("invalid-config", "hole must satisfy 0 < hole_radius < R1");
    const Cylinder omega(BaseDomain::annulus(n, {}, cfg.hole_radius, cfg.R1), cfg.T1, cfg.T2);
    return {omega, Omega, CaloricAtom::fundamental_translate(n, {}, 0.5 * (cfg.T1 + cfg.T2))};
  }
  const Cylinder omega(BaseDomain::ball(n, {}, cfg.R1), cfg.T1, cfg.T2);
  Vec y{};
  y[0] = cfg.nohole_source_radius * cfg.R2;
  const double tau = cfg.T1 - cfg.nohole_source_lag * (cfg.T2 - cfg.T1);
  CaloricAtom target = CaloricAtom::fundamental_translate(n, y, tau);
  if (!target.is_smooth_on(Omega))
    throw InvalidArgument("invalid-config", "NoHole target source must lie outside the closed big cylinder");
  return {omega, Omega, target};
}

/// Dictionary of the density sweep at a given number of translates.
inline std::vector<CaloricAtom> density_dictionary(const DensityConfig& cfg, int translates) {
  std::vector<CaloricAtom> dict = heat_polynomial_family(cfg.n, cfg.heat_degree);
  for (const auto& s : shell_sources(cfg.n, cfg.shell_factor * cfg.R2, cfg.T1, cfg.T2, translates))
    dict.push_back(CaloricAtom::fundamental_translate(cfg.n, s.x, s.t));
  return dict;
}

/// L²(ω) residual of projecting the scenario's target onto growing
/// dictionaries. Hole: ω is an annulus whose inner ball is a compact
/// component of Ω∖ω and the target is singular at the hole centre,
/// mid-time. NoHole: ω is a concentric ball and the target's source sits
/// outside the closed big cylinder.
inline DensityCurve density_experiment(DensityScenario scenario, const DensityConfig& cfg) {
  const DensityGeometry geo = density_geometry(scenario, cfg);
  DensityCurve curve;
  curve.scenario = scenario;
  const double scale = cfg.target_scale;
  auto target = [&](const SpaceTimePoint& p) { return scale == 0.0 ? 0.0 : scale * geo.target(p); };
  const int max_translates = cfg.sizes.empty() ? 0 : *std::max_element(cfg.sizes.begin(), cfg.sizes.end());
  const std::vector<CaloricAtom> full = density_dictionary(cfg, max_translates);
  const std::size_t base = full.size() - max_translates;
  // Sample the largest dictionary once; every smaller one is a prefix.
  const InnerProductSpec small_spec = InnerProductSpec::make(InnerProductKind::l2(), geo.omega, cfg.small_res);
  DictionarySamples samples(full, small_spec);
  const SymmetricMatrix G = gram(samples);
  for (int N : cfg.sizes) {
    if (N < 0) throw InvalidArgument("invalid-config", "dictionary sizes must be >= 0");
    const std::size_t size = base + N;
    Matrix sub(static_cast<int>(size), static_cast<int>(size));
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j) sub(int(i), int(j)) = G(int(i), int(j));
    const SymmetricMatrix small = SymmetricMatrix::from_lower(sub);
    // Only the L²(ω) half of the pair takes part in a projection.
    const GramPair pair{{full.begin(), full.begin() + static_cast<std::ptrdiff_t>(size)},
                        small_spec, small_spec, samples, samples, small, small};
    const Projection p = project_l2(target, pair, cfg.rel_tol);
    curve.target_norm = p.target_norm;
    curve.points.push_back({static_cast<int>(size), N, p.residual, p.target_norm > 0 ? p.residual / p.target_norm : 0.0});
  }
  return curve;
}

}  // namespace heatbasis
