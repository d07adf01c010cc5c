#pragma once

// Anisotropic Sobolev inner products on cylinders,
//   (u, v)_{H^{2s,s}}   = Σ_{|α|+2j ≤ 2s} ∫ ∂_t^j ∂_x^α u · ∂_t^j ∂_x^α v,
//   (u, v)_{H^{k,2s,s}} = Σ_{|β| ≤ k} (∂^β u, ∂^β v)_{H^{2s,s}},
// realized on a fixed quadrature rule, and Gram-matrix assembly.

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "heatbasis/caloric.hpp"
#include "heatbasis/domain.hpp"
#include "heatbasis/kahan.hpp"
#include "heatbasis/numerics.hpp"

namespace heatbasis {

/// Spatial multi-indices of total order `total` in dimension n, in
/// lexicographic order with the first coordinate descending.
inline std::vector<std::array<int, 3>> multi_indices(int n, int total) {
  std::vector<std::array<int, 3>> out;
  if (n == 1) {
    out.push_back({total, 0, 0});
  } else if (n == 2) {
    for (int a = total; a >= 0; --a) out.push_back({a, total - a, 0});
  } else {
    for (int a = total; a >= 0; --a)
      for (int b = total - a; b >= 0; --b) out.push_back({a, b, total - a - b});
  }
  return out;
}

/// One summand of an inner product: ∫ ∂^d u ∂^d v with integer multiplicity.
struct DerivativeTerm {
  MultiIndex d;
  int multiplicity = 1;
};

/// L2, Aniso(s) = H^{2s,s}, AnisoK(k, s) = H^{k,2s,s}. L2 ≡ Aniso(0) ≡ AnisoK(0,0).
class InnerProductKind {
 public:
  enum class Type { L2, Aniso, AnisoK };

  static InnerProductKind l2() { return {Type::L2, 0, 0}; }
  static InnerProductKind aniso(int s) { return {Type::Aniso, 0, s}; }
  static InnerProductKind aniso_k(int k, int s) { return {Type::AnisoK, k, s}; }

  Type type() const noexcept { return type_; }
  int k() const noexcept { return k_; }
  int s() const noexcept { return s_; }
  /// max |β| + 2s.
  int max_order() const noexcept { return k_ + 2 * s_; }

  std::string name() const {
    switch (type_) {
      case Type::L2: return "L2";
      case Type::Aniso: return "Aniso(" + std::to_string(s_) + ")";
      default: return "AnisoK(" + std::to_string(k_) + "," + std::to_string(s_) + ")";
    }
  }

  /// Collapsed list of derivative terms, β in graded order, then (j, α) graded.
  std::vector<DerivativeTerm> terms(int n) const {
    std::vector<DerivativeTerm> out;
    auto add = [&](const MultiIndex& d) {
      for (auto& t : out)
        if (t.d == d) {
          ++t.multiplicity;
          return;
        }
      out.push_back({d, 1});
    };
    for (int kb = 0; kb <= k_; ++kb)
      for (const auto& beta : multi_indices(n, kb))
        for (int order = 0; order <= 2 * s_; ++order)
          for (int j = order / 2; j >= 0; --j) {
            const int spatial = order - 2 * j;
            for (const auto& alpha : multi_indices(n, spatial)) {
              MultiIndex d;
              d.j = j;
              for (int i = 0; i < 3; ++i) d.alpha[i] = alpha[i] + beta[i];
              add(d);
            }
          }
    return out;
  }

  friend bool operator==(const InnerProductKind& a, const InnerProductKind& b) {
    return a.k_ == b.k_ && a.s_ == b.s_;
  }

 private:
  InnerProductKind(Type t, int k, int s) : type_(t), k_(k), s_(s) {
    if (k < 0 || s < 0) throw InvalidArgument("inner product orders must be >= 0");
    if (k + 2 * s > kMaxDerivativeOrder)
      throw InvalidArgument("inner product needs derivative order " + std::to_string(k + 2 * s) + " > 4");
  }

  Type type_;
  int k_;
  int s_;
};

struct InnerProductSpec {
  InnerProductKind kind;
  Cylinder cylinder;
  QuadratureRule rule;

  static InnerProductSpec make(InnerProductKind kind, const Cylinder& cyl, const Resolution& res) {
    return InnerProductSpec{kind, cyl, tensor_quadrature(cyl, res)};
  }
};

/// Quadrature value of the inner product. Symmetric in (u, v) bit-for-bit.
template <CaloricField U, CaloricField V>
double inner_product(const U& u, const V& v, const InnerProductSpec& spec) {
  const auto terms = spec.kind.terms(u.dim());
  KahanSum s;
  for (const auto& term : terms)
    for (std::size_t q = 0; q < spec.rule.size(); ++q) {
      const auto& p = spec.rule.nodes[q];
      s += term.multiplicity * (spec.rule.weights[q] * (u.eval(term.d, p) * v.eval(term.d, p)));
    }
  return s.value();
}

/// All derivative terms of every atom sampled at every node of a rule.
/// Atom indices may address any prefix of the sampled dictionary.
class DictionarySamples {
 public:
  DictionarySamples() = default;
  DictionarySamples(std::span<const CaloricAtom> dict, const InnerProductSpec& spec)
      : terms_(spec.kind.terms(dict.empty() ? 1 : dict.front().dim())),
        atoms_(dict.size()),
        nodes_(spec.rule.size()),
        weights_(spec.rule.weights) {
    std::vector<MultiIndex> ds;
    for (const auto& t : terms_) ds.push_back(t.d);
    auto values = std::make_shared<std::vector<double>>(atoms_ * terms_.size() * nodes_);
    for (std::size_t a = 0; a < atoms_; ++a) {
      if (!dict[a].is_smooth_on(spec.cylinder))
        throw DomainError("atom " + dict[a].describe() + " is singular in the closed cylinder");
      const AtomSampler sampler(dict[a], ds);
      std::vector<double> buf(ds.size());
      for (std::size_t q = 0; q < nodes_; ++q) {
        sampler.sample(spec.rule.nodes[q], buf);
        for (std::size_t t = 0; t < ds.size(); ++t) (*values)[(a * terms_.size() + t) * nodes_ + q] = buf[t];
      }
    }
    values_ = std::move(values);
  }

  std::size_t atoms() const noexcept { return atoms_; }
  std::size_t nodes() const noexcept { return nodes_; }
  const std::vector<DerivativeTerm>& terms() const noexcept { return terms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::span<const double> values(std::size_t atom, std::size_t term) const {
    return {values_->data() + (atom * terms_.size() + term) * nodes_, nodes_};
  }

  /// Inner product of atoms a and b under the sampled spec.
  double pair(std::size_t a, std::size_t b) const {
    KahanSum s;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
      const auto va = values(a, t), vb = values(b, t);
      const double mult = terms_[t].multiplicity;
      for (std::size_t q = 0; q < nodes_; ++q) s += mult * (weights_[q] * (va[q] * vb[q]));
    }
    return s.value();
  }

 private:
  std::vector<DerivativeTerm> terms_;
  std::size_t atoms_ = 0;
  std::size_t nodes_ = 0;
  std::vector<double> weights_;
  // Shared so that copies (e.g. dictionary prefixes) stay cheap; never mutated.
  std::shared_ptr<const std::vector<double>> values_;
};

/// Gram matrix G_ij = (atom_i, atom_j) under the given inner product; exactly symmetric.
inline SymmetricMatrix gram(const DictionarySamples& samples) {
  const int n = static_cast<int>(samples.atoms());
  SymmetricMatrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) g.set(i, j, samples.pair(i, j));
  return g;
}

inline SymmetricMatrix gram(std::span<const CaloricAtom> dict, const InnerProductSpec& spec) {
  return gram(DictionarySamples(dict, spec));
}

}  // namespace heatbasis
