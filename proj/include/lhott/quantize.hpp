#pragma once

#include <optional>
#include <vector>

#include "lhott/base_change.hpp"

namespace lhott {

/// X1 <-left- apex -right-> X2.
struct Correspondence {
  GroupoidFunctor left;
  GroupoidFunctor right;

  const FiniteGroupoid& apex() const noexcept { return left.domain(); }
  const FiniteGroupoid& left_base() const noexcept { return left.codomain(); }
  const FiniteGroupoid& right_base() const noexcept { return right.codomain(); }

  void validate() const {
    require(left.domain() == right.domain(), ErrorKind::Mismatch, "correspondence legs have different domains");
    left.validate();
    right.validate();
  }
};

/// A correspondence with coefficient systems and a kernel map
/// xi : right^* A2 -> left^* A1 over the apex.
struct PrequantumKernel {
  Correspondence corr;
  LocalSystem a1;
  LocalSystem a2;
  SystemMap xi;

  void validate() const {
    corr.validate();
    require(a1.base() == corr.left_base() && a2.base() == corr.right_base(), ErrorKind::BaseMismatch,
            "kernel coefficients do not live on the correspondence ends");
    require(xi.source() == pullback(corr.right, a2) && xi.target() == pullback(corr.left, a1), ErrorKind::Mismatch,
            "kernel map must go from right^* A2 to left^* A1");
    if (auto bad = xi.naturality_failure())
      fail(ErrorKind::InvalidMap, "kernel map is not natural at apex morphism " + std::to_string(*bad));
  }
};

namespace detail {

/// Applies the fiber transfer  [v at i] |-> sum over fiber morphisms m : i -> j of C(m) v at j
/// to every column of `w` (ambient x c).
inline QMatrix apply_transfer(const KanResult::Fiber& fb, const LocalSystem& c, const QMatrix& w) {
  QMatrix out(w.rows(), w.cols());
  for (const auto& m : fb.index.morphisms()) {
    const std::size_t di = fb.offset[m.source + 1] - fb.offset[m.source];
    if (di == 0) continue;
    out.add_block(fb.offset[m.target], 0, c.transport(m.m) * w.block(fb.offset[m.source], 0, di, w.cols()));
  }
  return out;
}

inline SparseVector apply_transfer(const KanResult::Fiber& fb, const LocalSystem& c,
                                   const std::vector<std::vector<std::size_t>>& out_of, const SparseVector& v) {
  std::map<std::size_t, Rational> acc;
  std::size_t i = 0;
  for (const auto& [col, x] : v) {
    while (fb.offset[i + 1] <= col) ++i;
    const std::size_t k = col - fb.offset[i];
    for (std::size_t mi : out_of[i]) {
      const auto& m = fb.index.morphisms()[mi];
      const QMatrix& t = c.transport(m.m);
      for (std::size_t r = 0; r < t.rows(); ++r)
        if (t(r, k) != 0) acc[fb.offset[m.target] + r] += t(r, k) * x;
    }
  }
  return to_sparse(acc);
}

}  // namespace detail

/// Norm map sum_f C -> prod_f C for any C on the domain of f: the map
/// induced by summing the transports over all fiber morphisms.
inline SystemMap norm_map_on(const GroupoidFunctor& f, const LocalSystem& c) {
  auto s = dependent_sum(f, c);
  auto p = dependent_product(f, c);
  const auto& cod = f.codomain();
  std::vector<QMatrix> comps(cod.object_count());
  for (ObjectId y = 0; y < cod.object_count(); ++y) {
    const auto& fs = s.fiber(y);
    const auto& fp = p.fiber(y);
    QMatrix ts = detail::apply_transfer(fs, c, fs.from_value);
    // lands in the equalizer
    require(fp.from_value * (fp.to_value * ts) == ts, ErrorKind::InternalAxiomFailure,
            "norm transfer does not land in the invariants");
    // vanishes on the coequalizer relations
    std::vector<std::vector<std::size_t>> out_of(fs.index.size());
    for (std::size_t k = 0; k < fs.index.morphisms().size(); ++k) out_of[fs.index.morphisms()[k].source].push_back(k);
    auto rel = detail::coequalizer_relations(fs.index, fs.offset, c);
    for (const auto& [pivot, row] : rel.rows())
      require(detail::apply_transfer(fs, c, out_of, row).empty(), ErrorKind::InternalAxiomFailure,
              "norm transfer is not defined on the coinvariants");
    comps[y] = fp.to_value * ts;
  }
  return SystemMap(s.system(), p.system(), std::move(comps));
}

/// Nm : f_! f^* A -> f_* f^* A for A on the codomain.
inline SystemMap norm_map(const GroupoidFunctor& f, const LocalSystem& a) {
  require(a.base() == f.codomain(), ErrorKind::BaseMismatch, "norm: system not on the codomain");
  auto nm = norm_map_on(f, pullback(f, a));
  require(is_equivalence(nm).has_value(), ErrorKind::NonInvertibleNorm, "norm map is not invertible");
  return nm;
}

/// A twist tau on the codomain (all fibers 1-dimensional) with a chosen
/// equivalence f_! f^* 1 -> f_* f^* tau.
class FundamentalClass {
 public:
  FundamentalClass(GroupoidFunctor along, LocalSystem twist, SystemMap comparison)
      : along_(std::move(along)), twist_(std::move(twist)), comparison_(std::move(comparison)) {
    require(twist_.base() == along_.codomain(), ErrorKind::BaseMismatch, "twist must live on the codomain");
    for (auto d : twist_.dims()) require(d == 1, ErrorKind::InvalidTwist, "twist must be invertible (rank one)");
    twist_.validate();
    auto src = dependent_sum(along_, unit_system(along_.domain())).system();
    auto dst = dependent_product(along_, pullback(along_, twist_)).system();
    require(comparison_.source() == src && comparison_.target() == dst, ErrorKind::InvalidTwist,
            "comparison must map f_! f^* 1 to f_* f^* tau");
    if (auto bad = comparison_.naturality_failure())
      fail(ErrorKind::InvalidTwist, "comparison is not natural at morphism " + std::to_string(*bad));
    require(is_equivalence(comparison_).has_value(), ErrorKind::InvalidTwist, "comparison is not an equivalence");
  }

  const GroupoidFunctor& along() const noexcept { return along_; }
  const LocalSystem& twist() const noexcept { return twist_; }
  const SystemMap& comparison() const noexcept { return comparison_; }

  bool is_untwisted() const {
    for (const auto& t : twist_.transports())
      if (!t.is_identity()) return false;
    return true;
  }

 private:
  GroupoidFunctor along_;
  LocalSystem twist_;
  SystemMap comparison_;
};

/// Untwisted class whose comparison is the un-normalized norm map.
inline FundamentalClass canonical_fundamental_class(const GroupoidFunctor& f) {
  auto one = unit_system(f.codomain());
  return FundamentalClass(f, one, norm_map(f, one));
}

/// A (x) prod_f C -> prod_f ((f^* A) (x) C).
inline SystemMap product_projection(const GroupoidFunctor& f, const LocalSystem& a, const LocalSystem& c) {
  auto pc = dependent_product(f, c);
  auto rhs = dependent_product(f, tensor(pullback(f, a), c));
  const auto& cod = f.codomain();
  std::vector<QMatrix> comps(cod.object_count());
  for (ObjectId y = 0; y < cod.object_count(); ++y) {
    const auto& fb = rhs.fiber(y);
    QMatrix family(fb.ambient(), a.dim(y) * pc.system().dim(y));
    for (std::size_t i = 0; i < fb.index.size(); ++i)
      family.set_block(fb.offset[i], 0,
                       kron(a.transport(cod.inverse(fb.index.objects()[i].phi)), pc.structure_map(y, i)));
    comps[y] = fb.to_value * family;
  }
  return SystemMap(tensor(a, pc.system()), rhs.system(), std::move(comps));
}

/// The equivalence f_! f^* A -> f_* f^* (A (x) tau) induced by the class:
/// projection formula, then the comparison, then the product projection.
inline SystemMap class_norm(const FundamentalClass& fc, const LocalSystem& a) {
  const auto& f = fc.along();
  require(a.base() == f.codomain(), ErrorKind::BaseMismatch, "system not on the codomain of the class");
  auto fa = pullback(f, a);
  auto one_z = unit_system(f.domain());
  auto frob = frobenius_iso(f, one_z, a);
  auto sum_fa = dependent_sum(f, fa).system();
  frob = SystemMap(sum_fa, frob.target(), frob.components());  // f^*A (x) 1 == f^*A
  auto mid = tensor_map(identity_map(a), fc.comparison());
  auto proj = product_projection(f, a, pullback(f, fc.twist()));
  auto target = dependent_product(f, pullback(f, tensor(a, fc.twist()))).system();
  proj = SystemMap(proj.source(), target, proj.components());
  return compose(proj, compose(mid, frob));
}

/// [f]_A : A (x) tau -> f_! f^* A, the inverse class norm after the unit.
inline SystemMap fundamental_class_map(const FundamentalClass& fc, const LocalSystem& a) {
  auto n = class_norm(fc, a);
  AdjunctionMaps adj(fc.along());
  auto eta = adj.product_unit(tensor(a, fc.twist()));
  return compose(invert(n), eta);
}

/// d mu_f(A) = D(sum_Y [f]_A) as a matrix in dual coordinates.
inline QMatrix measure(const FundamentalClass& fc, const LocalSystem& a) {
  auto cls = fundamental_class_map(fc, a);
  auto global = sum_map(terminal_functor(fc.along().codomain()), cls);
  return global.component(0).transpose();
}

/// The dual secondary integral transform sum_{X2}(A2 (x) tau) -> sum_{X1} A1.
inline QMatrix secondary_transform(const PrequantumKernel& k, const FundamentalClass& fc) {
  require(fc.along() == k.corr.right, ErrorKind::Mismatch, "fundamental class must live on the right leg");
  const auto& i1 = k.corr.left;
  const auto& i2 = k.corr.right;
  auto t1 = terminal_functor(k.corr.left_base());
  auto t2 = terminal_functor(k.corr.right_base());
  auto tz = terminal_functor(k.corr.apex());
  auto pull = sum_map(t2, fundamental_class_map(fc, k.a2));
  auto into_apex = invert(sum_composition_iso(t2, i2, pullback(i2, k.a2)));
  auto kernel = sum_map(tz, k.xi);
  auto out_of_apex = sum_composition_iso(t1, i1, pullback(i1, k.a1));
  auto push = sum_map(t1, AdjunctionMaps(i1).sum_counit(k.a1));
  auto total = compose(push, compose(out_of_apex, compose(kernel, compose(into_apex, pull))));
  return total.component(0);
}

/// The undualized transform D sum_{X1} A1 -> D sum_{X2}(A2 (x) tau).
inline QMatrix secondary_transform_undual(const PrequantumKernel& k, const FundamentalClass& fc) {
  return secondary_transform(k, fc).transpose();
}

inline PrequantumKernel identity_kernel(const LocalSystem& a) {
  auto id = identity_functor(a.base());
  return {{id, id}, a, a, identity_map(a)};
}

/// Composite kernel X1 -> X3 of k1 : X1 -> X2 and k2 : X2 -> X3 over the
/// iso-comma of the middle legs.
inline PrequantumKernel compose_correspondences(const PrequantumKernel& k2, const PrequantumKernel& k1) {
  require(k1.corr.right_base() == k2.corr.left_base(), ErrorKind::InterfaceMismatch,
          "kernels do not share the middle context");
  require(k1.a2 == k2.a1, ErrorKind::InterfaceMismatch, "kernels have different middle coefficients");
  auto w = iso_comma(k1.corr.right, k2.corr.left);
  auto left = compose(k1.corr.left, w.left);
  auto right = compose(k2.corr.right, w.right);
  const auto& mid = k1.a2;
  std::vector<QMatrix> comps(w.apex.object_count());
  for (ObjectId o = 0; o < comps.size(); ++o) {
    const auto [z1, z2, phi] = w.labels[o];
    comps[o] = k1.xi.component(z1) * mid.transport(k1.corr.right_base().inverse(phi)) * k2.xi.component(z2);
  }
  SystemMap xi(pullback(right, k2.a2), pullback(left, k1.a1), std::move(comps));
  return {{left, right}, k1.a1, k2.a2, std::move(xi)};
}

struct AnomalyReport {
  QMatrix composite;  // transform of the composed kernel
  QMatrix product;    // transform(k1) * transform(k2)
  bool equal = false;
  QMatrix difference() const { return composite - product; }
};

/// Compares the transform of k2 o k1 with the product of the transforms,
/// each computed with the supplied class on its right leg.
inline AnomalyReport anomaly_defect(const PrequantumKernel& k2, const PrequantumKernel& k1,
                                    const FundamentalClass& c2, const FundamentalClass& c1,
                                    const FundamentalClass& c21) {
  auto k = compose_correspondences(k2, k1);
  require(c21.along() == k.corr.right, ErrorKind::Mismatch, "class for the composite must live on its right leg");
  AnomalyReport r;
  r.composite = secondary_transform(k, c21);
  r.product = secondary_transform(k1, c1) * secondary_transform(k2, c2);
  r.equal = r.composite == r.product;
  return r;
}

/// anomaly_defect with canonical classes on every right leg.
inline AnomalyReport anomaly_defect(const PrequantumKernel& k2, const PrequantumKernel& k1) {
  auto k = compose_correspondences(k2, k1);
  return anomaly_defect(k2, k1, canonical_fundamental_class(k2.corr.right),
                        canonical_fundamental_class(k1.corr.right), canonical_fundamental_class(k.corr.right));
}

/// sum_{f2} prod_g f1^* A for X1 <-f1- W -g-> V -f2-> X2.
inline LocalSystem polynomial_functor(const GroupoidFunctor& f1, const GroupoidFunctor& g, const GroupoidFunctor& f2,
                                      const LocalSystem& a) {
  require(f1.domain() == g.domain() && g.codomain() == f2.domain(), ErrorKind::BaseMismatch,
          "polynomial diagram legs do not fit");
  return dependent_sum(f2, dependent_product(g, pullback(f1, a)).system()).system();
}

struct KernelFactorization {
  ProductGroupoid ends;   // X1 x X2 with projections
  GroupoidFunctor pair;   // apex -> X1 x X2
  LocalSystem kernel;     // K = sum_pair 1
  SystemMap comparison;   // sum_{right} left^* A -> sum_{p2}((p1^* A) (x) K)
};

inline KernelFactorization kernel_factorization(const Correspondence& corr, const LocalSystem& a) {
  require(a.base() == corr.left_base(), ErrorKind::BaseMismatch, "system not on the left end");
  auto ends = product(corr.left_base(), corr.right_base());
  auto h = pairing(ends, corr.left, corr.right);
  auto one = unit_system(corr.apex());
  auto kernel = dependent_sum(h, one).system();
  auto f1a = pullback(corr.left, a);
  auto split = sum_composition_iso(ends.second, h, f1a);
  auto frob = frobenius_iso(h, one, pullback(ends.first, a));
  auto inner = dependent_sum(h, f1a).system();
  frob = SystemMap(inner, frob.target(), frob.components());
  auto pushed = sum_map(ends.second, frob);
  auto cmp = compose(pushed, split);
  auto direct = dependent_sum(corr.right, f1a).system();
  cmp = SystemMap(direct, cmp.target(), cmp.components());
  require(is_equivalence(cmp).has_value(), ErrorKind::InternalAxiomFailure,
          "kernel factorization comparison is not invertible");
  return {ends, h, kernel, cmp};
}

/// h^dagger = <,>_A^{-1} o Dh o <,>_B for h : A -> B.
inline SystemMap transpose(const SystemMap& h, const InnerProduct& ip_a, const InnerProduct& ip_b) {
  require(ip_a.carrier() == h.source() && ip_b.carrier() == h.target(), ErrorKind::CarrierMismatch,
          "inner products are not carried by the source and target");
  return compose(ip_a.inverse(), compose(dual_map(h), ip_b.pairing()));
}

inline InnerProduct pullback_inner_product(const GroupoidFunctor& f, const InnerProduct& ip) {
  auto p = pullback_map(f, ip.pairing());
  return InnerProduct(SystemMap(p.source(), dual(p.source()), p.components()));
}

/// Inner product on f_! f^* A induced by an untwisted class on f: the
/// Wirthmueller equivalence followed by the image of the fiberwise product.
inline InnerProduct induced_inner_product(const FundamentalClass& fc, const InnerProduct& ip) {
  require(fc.is_untwisted(), ErrorKind::TwistedClassUnsupported, "induced inner products need an untwisted class");
  const auto& f = fc.along();
  const auto& a = ip.carrier();
  auto n = class_norm(fc, a);  // f_! f^* A -> f_* f^* A
  auto fa = pullback(f, a);
  auto dm = de_morgan_iso(f, pullback(f, dual(a)));  // prod_f f^* A -> D f_! f^* D A
  dm = SystemMap(n.target(), dm.target(), dm.components());
  auto wirth = compose(dm, SystemMap(n.source(), n.target(), n.components()));
  auto image = dual_map(sum_map(f, pullback_map(f, ip.pairing())));
  auto pairing = compose(image, wirth);
  return InnerProduct(SystemMap(pairing.source(), dual(pairing.source()), pairing.components()));
}

/// Inner product on the global sections sum_X A from a fiberwise one and an
/// untwisted class on X -> point.
inline InnerProduct global_inner_product(const InnerProduct& ip, const FundamentalClass& fc) {
  const auto& a = ip.carrier();
  const auto& x = a.base();
  require(fc.along() == terminal_functor(x), ErrorKind::Mismatch, "class must live on X -> point");
  require(fc.is_untwisted(), ErrorKind::TwistedClassUnsupported, "global inner products need an untwisted class");
  auto t = fc.along();
  // the class differs from the canonical one by an automorphism u of sum_X 1;
  // it transfers to arbitrary coefficients when u scales each component
  QMatrix u = invert(norm_map(t, unit_system(point()))).component(0) * fc.comparison().component(0);
  auto labels = x.component_labels();
  std::vector<ObjectId> roots;
  for (ObjectId o = 0; o < x.object_count(); ++o)
    if (labels[o] == o) roots.push_back(o);
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t j = 0; j < u.cols(); ++j)
      require(i == j || u(i, j) == 0, ErrorKind::TwistedClassUnsupported,
              "class does not act componentwise on global sections");
  std::vector<QMatrix> scale_comps(x.object_count());
  auto da = dual(a);
  for (ObjectId o = 0; o < x.object_count(); ++o) {
    std::size_t c = std::lower_bound(roots.begin(), roots.end(), labels[o]) - roots.begin();
    scale_comps[o] = QMatrix::identity(a.dim(o)) * u(c, c);
  }
  SystemMap scaled(da, da, std::move(scale_comps));
  auto sum_p = sum_map(t, ip.pairing());
  auto wirth = compose(norm_map_on(t, da), sum_map(t, scaled));
  auto dm = de_morgan_iso(t, a);
  auto pairing = compose(dm, compose(wirth, sum_p));
  InnerProduct g(SystemMap(pairing.source(), dual(pairing.source()), pairing.components()));
  require(g.is_symmetric(), ErrorKind::InternalAxiomFailure, "global inner product is not symmetric");
  return g;
}

struct PastingReport {
  QMatrix pasting;
  QMatrix transform;
  bool equal = false;
};

/// Recomputes the transform as the pasting of sum_{X2}[i2] with the adjunct
/// exp = eps o sum_{i1} xi of the kernel, and compares.
inline PastingReport boundary_pasting_check(const PrequantumKernel& k, const FundamentalClass& fc) {
  require(fc.along() == k.corr.right, ErrorKind::Mismatch, "fundamental class must live on the right leg");
  const auto& i1 = k.corr.left;
  const auto& i2 = k.corr.right;
  auto t1 = terminal_functor(k.corr.left_base());
  auto t2 = terminal_functor(k.corr.right_base());
  auto i2a2 = pullback(i2, k.a2);
  auto action = compose(AdjunctionMaps(i1).sum_counit(k.a1), sum_map(i1, k.xi));  // sum_{i1} i2^*A2 -> A1
  auto pull = sum_map(t2, fundamental_class_map(fc, k.a2));
  auto into_apex = invert(sum_composition_iso(t2, i2, i2a2));
  auto out_of_apex = sum_composition_iso(t1, i1, i2a2);
  auto push = sum_map(t1, action);
  auto total = compose(push, compose(out_of_apex, compose(into_apex, pull)));
  PastingReport r;
  r.pasting = total.component(0);
  r.transform = secondary_transform(k, fc);
  r.equal = r.pasting == r.transform;
  return r;
}

/// L_X(f) = sum_f 1_Y.
inline LocalSystem linearize(const GroupoidFunctor& f) { return dependent_sum(f, unit_system(f.domain())).system(); }

/// For u : Y -> Y' over X (f' o u = f), the map L_X(f) -> L_X(f') given by
/// the counit of u after splitting the sum.
inline SystemMap linearize_map(const GroupoidFunctor& u, const GroupoidFunctor& f2) {
  auto one = unit_system(u.domain());
  auto split = sum_composition_iso(f2, u, one);
  auto counit = AdjunctionMaps(u).sum_counit(unit_system(u.codomain()));
  auto inner = dependent_sum(u, one).system();
  counit = SystemMap(inner, counit.target(), counit.components());
  return compose(sum_map(f2, counit), split);
}

struct QuantumOperationReport {
  QMatrix operation;  // (sum eps) o Xi o (sum eps)^dagger
  QMatrix transform;  // secondary_transform with the canonical class
  bool equal = false;
};

/// For a kernel with i1 = i2 = i and A1 = A2 = A carrying the inner product
/// `ip`, computes the dagger form of the transform using canonical classes.
inline QuantumOperationReport quantum_operation(const PrequantumKernel& k, const InnerProduct& ip) {
  require(k.corr.left == k.corr.right && k.a1 == k.a2, ErrorKind::ShapeMismatch,
          "quantum operations need equal legs and coefficients");
  require(ip.carrier() == k.a1, ErrorKind::CarrierMismatch, "inner product not carried by the coefficients");
  const auto& i = k.corr.left;
  auto tx = terminal_functor(i.codomain());
  auto tz = terminal_functor(i.domain());
  auto ia = pullback(i, k.a1);
  auto push = compose(sum_map(tx, AdjunctionMaps(i).sum_counit(k.a1)), sum_composition_iso(tx, i, ia));
  auto ip_x = global_inner_product(ip, canonical_fundamental_class(tx));
  auto ip_z = global_inner_product(pullback_inner_product(i, ip), canonical_fundamental_class(tz));
  auto push_dag = transpose(push, ip_z, ip_x);
  auto xi = sum_map(tz, k.xi);
  QuantumOperationReport r;
  r.operation = compose(push, compose(xi, push_dag)).component(0);
  r.transform = secondary_transform(k, canonical_fundamental_class(i));
  r.equal = r.operation == r.transform;
  return r;
}

}  // namespace lhott
