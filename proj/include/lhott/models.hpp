#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "lhott/quantize.hpp"

namespace lhott {

struct SurfaceSpec {
  std::size_t genus = 0;
};

inline constexpr std::uint64_t default_size_limit = 1'000'000;

namespace detail {

/// |G|^k, or limit+1 once it passes the limit.
inline std::uint64_t bounded_power(std::uint64_t base, std::size_t k, std::uint64_t limit) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < k; ++i) {
    r *= base;
    if (r > limit) return limit + 1;
  }
  return r;
}

inline void check_size(const FiniteGroup& g, std::size_t letters, std::uint64_t limit) {
  auto n = bounded_power(g.order(), letters, limit);
  require(n <= limit, ErrorKind::SizeLimit,
          "enumeration of " + std::to_string(g.order()) + "^" + std::to_string(letters) + " tuples exceeds limit " +
              std::to_string(limit));
}

/// Calls fn(tuple) for every k-tuple of group elements, last letter fastest.
template <class Fn>
void for_each_tuple(const FiniteGroup& g, std::size_t k, Fn&& fn) {
  std::vector<FiniteGroup::Element> t(k, 0);
  for (;;) {
    fn(t);
    std::size_t i = k;
    while (i > 0 && ++t[i - 1] == g.order()) t[--i] = 0;
    if (i == 0) return;
  }
}

/// prod_i [a_i, b_i] for a tuple (a_1, b_1, ..., a_g, b_g).
inline FiniteGroup::Element boundary_word(const FiniteGroup& g, const std::vector<FiniteGroup::Element>& t) {
  FiniteGroup::Element r = g.identity();
  for (std::size_t i = 0; i + 1 < t.size(); i += 2) r = g.mul(r, g.commutator(t[i], t[i + 1]));
  return r;
}

/// Tuples of length k (optionally filtered) with G acting by simultaneous
/// conjugation; objects in enumeration order.
template <class Keep>
std::pair<FiniteGroupoid, std::vector<std::vector<FiniteGroup::Element>>> conjugation_groupoid(
    const FiniteGroup& g, std::size_t k, Keep&& keep) {
  std::vector<std::vector<FiniteGroup::Element>> tuples;
  for_each_tuple(g, k, [&](const auto& t) {
    if (keep(t)) tuples.push_back(t);
  });
  std::map<std::vector<FiniteGroup::Element>, std::size_t> where;
  for (std::size_t i = 0; i < tuples.size(); ++i) where.emplace(tuples[i], i);
  std::vector<std::vector<std::size_t>> action(g.order(), std::vector<std::size_t>(tuples.size()));
  for (FiniteGroup::Element h = 0; h < g.order(); ++h)
    for (std::size_t i = 0; i < tuples.size(); ++i) {
      auto c = tuples[i];
      for (auto& a : c) a = g.conjugate(h, a);
      action[h][i] = where.at(c);
    }
  return {action_groupoid(tuples.size(), g, action), std::move(tuples)};
}

/// G//G under conjugation.
inline FiniteGroupoid adjoint_groupoid(const FiniteGroup& g) {
  std::vector<std::vector<std::size_t>> action(g.order(), std::vector<std::size_t>(g.order()));
  for (FiniteGroup::Element h = 0; h < g.order(); ++h)
    for (FiniteGroup::Element a = 0; a < g.order(); ++a) action[h][a] = g.conjugate(h, a);
  return action_groupoid(g.order(), g, action);
}

}  // namespace detail

/// Hom(pi_1 Sigma_g, G)//G.
inline FiniteGroupoid rep_groupoid(const SurfaceSpec& spec, const FiniteGroup& g,
                                   std::uint64_t limit = default_size_limit) {
  detail::check_size(g, 2 * spec.genus, limit);
  return detail::conjugation_groupoid(g, 2 * spec.genus, [&](const auto& t) {
           return detail::boundary_word(g, t) == g.identity();
         }).first;
}

/// The trivial kernel on point <- X -> point.
inline PrequantumKernel trivial_kernel(const FiniteGroupoid& x) {
  auto t = terminal_functor(x);
  auto one = unit_system(t.codomain());
  return {{t, t}, one, one, identity_map(unit_system(x))};
}

inline Rational dw_partition(const FiniteGroup& g, const SurfaceSpec& spec, std::uint64_t limit = default_size_limit) {
  auto k = trivial_kernel(rep_groupoid(spec, g, limit));
  return secondary_transform(k, canonical_fundamental_class(k.corr.right))(0, 0);
}

/// Counts solutions of the surface relation and divides by |G|.
inline Rational dw_brute_force(const FiniteGroup& g, const SurfaceSpec& spec,
                               std::uint64_t limit = default_size_limit) {
  detail::check_size(g, 2 * spec.genus, limit);
  unsigned long count = 0;
  detail::for_each_tuple(g, 2 * spec.genus, [&](const auto& t) {
    if (detail::boundary_word(g, t) == g.identity()) ++count;
  });
  return Rational(count) / Rational(static_cast<unsigned long>(g.order()));
}

/// sum_i (order / d_i)^(2g - 2).
inline Rational mednykh_cross_check(const std::vector<unsigned long>& dims, unsigned long order, std::size_t genus) {
  require(!dims.empty(), ErrorKind::BadCharacterData, "no irreducible dimensions given");
  unsigned long squares = 0;
  for (auto d : dims) {
    require(d > 0, ErrorKind::BadCharacterData, "irreducible dimension must be positive");
    squares += d * d;
  }
  require(squares == order, ErrorKind::BadCharacterData,
          "sum of squared dimensions is " + std::to_string(squares) + ", not " + std::to_string(order));
  Rational total = 0;
  for (auto d : dims) {
    Rational base = Rational(order) / Rational(d);
    Rational term = 1;
    if (genus == 0)
      term = 1 / (base * base);
    else
      for (std::size_t i = 0; i + 2 < 2 * genus; ++i) term *= base;
    total += term;
  }
  return total;
}

/// Kernel on discrete(n) <- discrete(n) x discrete(m) -> discrete(m) with
/// components K(x, y) and unit coefficients.
inline PrequantumKernel matrix_kernel(const QMatrix& k) {
  auto x1 = discrete(k.rows()), x2 = discrete(k.cols());
  auto z = product(x1, x2);
  std::vector<QMatrix> comps(z.groupoid.object_count());
  for (std::size_t x = 0; x < k.rows(); ++x)
    for (std::size_t y = 0; y < k.cols(); ++y) comps[z.object(x, y)] = QMatrix::scalar(k(x, y));
  auto one = unit_system(z.groupoid);
  return {{z.first, z.second}, unit_system(x1), unit_system(x2), SystemMap(one, one, std::move(comps))};
}

struct MatrixModelReport {
  std::vector<Rational> transform;
  std::vector<Rational> oracle;
  bool equal = false;
};

inline MatrixModelReport matrix_model(const QMatrix& k, const std::vector<Rational>& v) {
  require(v.size() == k.cols(), ErrorKind::ShapeMismatch,
          "vector of length " + std::to_string(v.size()) + " for a matrix with " + std::to_string(k.cols()) +
              " columns");
  MatrixModelReport r;
  r.oracle.assign(k.rows(), Rational(0));
  for (std::size_t i = 0; i < k.rows(); ++i)
    for (std::size_t j = 0; j < k.cols(); ++j) r.oracle[i] += k(i, j) * v[j];
  if (k.rows() == 0) {
    r.equal = true;
    return r;
  }
  auto kernel = matrix_kernel(k);
  QMatrix t = secondary_transform(kernel, canonical_fundamental_class(kernel.corr.right));
  QMatrix out = t * QMatrix::column(std::span<const Rational>(v));
  for (std::size_t i = 0; i < out.rows(); ++i) r.transform.push_back(out(i, 0));
  r.equal = r.transform == r.oracle;
  return r;
}

/// The two halves of a closed surface of genus g1 + g2 as spans
/// point <- R1 -> G//G and G//G <- R2 -> point; the right half reads
/// boundary holonomy with reversed orientation.
struct GaugeSpans {
  PrequantumKernel left;
  PrequantumKernel right;
};

inline GaugeSpans gauge_spans(const FiniteGroup& g, std::size_t g1, std::size_t g2,
                              std::uint64_t limit = default_size_limit) {
  detail::check_size(g, 2 * (g1 + g2), limit);
  auto adj = detail::adjoint_groupoid(g);
  auto half = [&](std::size_t genus, bool reversed) {
    auto [r, tuples] = detail::conjugation_groupoid(g, 2 * genus, [](const auto&) { return true; });
    std::vector<ObjectId> objs(r.object_count());
    for (ObjectId o = 0; o < objs.size(); ++o) {
      auto w = detail::boundary_word(g, tuples[o]);
      objs[o] = reversed ? g.inverse(w) : w;
    }
    // morphism (h, t) : t -> h.t maps to (h, boundary(t)) in G//G
    const std::size_t n = r.object_count();
    std::vector<MorphismId> mors(r.morphism_count());
    for (MorphismId m = 0; m < mors.size(); ++m) mors[m] = (m / n) * g.order() + objs[m % n];
    return GroupoidFunctor(r, adj, std::move(objs), std::move(mors));
  };
  auto b1 = half(g1, false);
  auto b2 = half(g2, true);
  auto one_pt = unit_system(point());
  auto one_adj = unit_system(adj);
  GaugeSpans s{{{terminal_functor(b1.domain()), b1}, one_pt, one_adj, identity_map(unit_system(b1.domain()))},
               {{b2, terminal_functor(b2.domain())}, one_adj, one_pt, identity_map(unit_system(b2.domain()))}};
  return s;
}

struct GlueReport {
  Rational glued;       // transform of the composed span
  Rational factorized;  // transform(left) * transform(right)
  Rational partition;   // dw_partition at genus g1 + g2
  Rational brute_force;
  bool equal = false;
};

inline GlueReport dw_glue_check(const FiniteGroup& g, std::size_t g1, std::size_t g2,
                                std::uint64_t limit = default_size_limit) {
  auto spans = gauge_spans(g, g1, g2, limit);
  auto anomaly = anomaly_defect(spans.right, spans.left);
  GlueReport r;
  r.glued = anomaly.composite(0, 0);
  r.factorized = anomaly.product(0, 0);
  r.partition = dw_partition(g, {g1 + g2}, limit);
  r.brute_force = dw_brute_force(g, {g1 + g2}, limit);
  r.equal = anomaly.equal && r.glued == r.partition && r.partition == r.brute_force;
  return r;
}

}  // namespace lhott
