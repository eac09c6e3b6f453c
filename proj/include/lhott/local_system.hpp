#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lhott/functor.hpp"
#include "lhott/matrix.hpp"

namespace lhott {

/// A functor from a finite groupoid to finite-dimensional rational vector
/// spaces in coordinates: a dimension per object and an invertible
/// dim(target) x dim(source) transport matrix per morphism.
class LocalSystem {
 public:
  LocalSystem() : data_(std::make_shared<Data>()) {}

  /// No axioms are checked; see validate() and checked().
  LocalSystem(FiniteGroupoid base, std::vector<std::size_t> dims, std::vector<QMatrix> transport)
      : data_(std::make_shared<Data>(Data{std::move(base), std::move(dims), std::move(transport)})) {
    require(data_->dims.size() == data_->base.object_count(), ErrorKind::InvalidSystem,
            "one dimension per object required");
    require(data_->transport.size() == data_->base.morphism_count(), ErrorKind::InvalidSystem,
            "one transport matrix per morphism required");
  }

  static LocalSystem checked(FiniteGroupoid base, std::vector<std::size_t> dims, std::vector<QMatrix> transport) {
    LocalSystem a(std::move(base), std::move(dims), std::move(transport));
    a.validate();
    return a;
  }

  const FiniteGroupoid& base() const noexcept { return data_->base; }
  std::size_t dim(ObjectId x) const { return data_->dims.at(x); }
  const std::vector<std::size_t>& dims() const noexcept { return data_->dims; }
  const QMatrix& transport(MorphismId m) const { return data_->transport.at(m); }
  const std::vector<QMatrix>& transports() const noexcept { return data_->transport; }

  std::size_t total_dimension() const {
    std::size_t t = 0;
    for (auto d : data_->dims) t += d;
    return t;
  }

  /// Throws InvalidSystem citing the failing morphism.
  void validate() const {
    const auto& x = base();
    for (MorphismId m = 0; m < x.morphism_count(); ++m) {
      const QMatrix& t = transport(m);
      require(t.rows() == dim(x.target(m)) && t.cols() == dim(x.source(m)), ErrorKind::InvalidSystem,
              "transport of morphism " + std::to_string(m) + " has shape " + t.shape());
    }
    for (ObjectId o = 0; o < x.object_count(); ++o)
      require(transport(x.identity(o)).is_identity(), ErrorKind::InvalidSystem,
              "transport of identity morphism " + std::to_string(x.identity(o)) + " is not the identity");
    for (MorphismId f = 0; f < x.morphism_count(); ++f)
      for (MorphismId g : x.out(x.target(f)))
        require(transport(x.compose(g, f)) == transport(g) * transport(f), ErrorKind::InvalidSystem,
                "transport is not multiplicative at morphism " + std::to_string(x.compose(g, f)) + " = " +
                    std::to_string(g) + " o " + std::to_string(f));
    // invertibility follows from the inverse law of the groupoid
    for (MorphismId m = 0; m < x.morphism_count(); ++m)
      require((transport(x.inverse(m)) * transport(m)).is_identity(), ErrorKind::InvalidSystem,
              "transport of morphism " + std::to_string(m) + " is not invertible");
  }

  friend bool operator==(const LocalSystem& a, const LocalSystem& b) {
    if (a.data_ == b.data_) return true;
    return a.data_->dims == b.data_->dims && a.data_->transport == b.data_->transport &&
           a.data_->base == b.data_->base;
  }

 private:
  struct Data {
    FiniteGroupoid base;
    std::vector<std::size_t> dims;
    std::vector<QMatrix> transport;
  };
  std::shared_ptr<const Data> data_;
};

/// A natural transformation between local systems over the same base.
class SystemMap {
 public:
  SystemMap() = default;
  SystemMap(LocalSystem source, LocalSystem target, std::vector<QMatrix> components)
      : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
    require(source_.base() == target_.base(), ErrorKind::BaseMismatch, "map between systems on different bases");
    require(components_.size() == source_.base().object_count(), ErrorKind::InvalidMap,
            "one component per object required");
    for (ObjectId x = 0; x < components_.size(); ++x)
      require(components_[x].rows() == target_.dim(x) && components_[x].cols() == source_.dim(x),
              ErrorKind::InvalidMap, "component at object " + std::to_string(x) + " has shape " +
                                         components_[x].shape());
  }

  static SystemMap checked(LocalSystem source, LocalSystem target, std::vector<QMatrix> components) {
    SystemMap h(std::move(source), std::move(target), std::move(components));
    if (auto bad = h.naturality_failure())
      fail(ErrorKind::InvalidMap, "naturality fails at morphism " + std::to_string(*bad));
    return h;
  }

  const LocalSystem& source() const noexcept { return source_; }
  const LocalSystem& target() const noexcept { return target_; }
  const FiniteGroupoid& base() const noexcept { return source_.base(); }
  const QMatrix& component(ObjectId x) const { return components_.at(x); }
  const std::vector<QMatrix>& components() const noexcept { return components_; }

  /// First morphism whose naturality square fails, if any.
  std::optional<MorphismId> naturality_failure() const {
    const auto& x = base();
    for (MorphismId m = 0; m < x.morphism_count(); ++m)
      if (component(x.target(m)) * source_.transport(m) != target_.transport(m) * component(x.source(m)))
        return m;
    return std::nullopt;
  }
  bool is_natural() const { return !naturality_failure(); }

  bool is_zero() const {
    for (const auto& c : components_)
      if (!c.is_zero()) return false;
    return true;
  }

  friend bool operator==(const SystemMap& a, const SystemMap& b) {
    return a.components_ == b.components_ && a.source_ == b.source_ && a.target_ == b.target_;
  }

 private:
  LocalSystem source_;
  LocalSystem target_;
  std::vector<QMatrix> components_;
};

inline LocalSystem unit_system(const FiniteGroupoid& x) {
  return LocalSystem(x, std::vector<std::size_t>(x.object_count(), 1),
                     std::vector<QMatrix>(x.morphism_count(), QMatrix::identity(1)));
}

/// The zero system (all fibers 0-dimensional).
inline LocalSystem zero_system(const FiniteGroupoid& x) {
  return LocalSystem(x, std::vector<std::size_t>(x.object_count(), 0),
                     std::vector<QMatrix>(x.morphism_count(), QMatrix(0, 0)));
}

/// Objectwise tensor product; basis index a*dim(B)+b.
inline LocalSystem tensor(const LocalSystem& a, const LocalSystem& b) {
  require(a.base() == b.base(), ErrorKind::BaseMismatch, "tensor of systems on different bases");
  std::vector<std::size_t> dims(a.dims().size());
  std::vector<QMatrix> t(a.transports().size());
  for (std::size_t x = 0; x < dims.size(); ++x) dims[x] = a.dim(x) * b.dim(x);
  for (std::size_t m = 0; m < t.size(); ++m) t[m] = kron(a.transport(m), b.transport(m));
  return LocalSystem(a.base(), std::move(dims), std::move(t));
}

/// Dual system: dual basis, inverse-transpose transports. dual(dual(A)) == A
/// holds on the nose in coordinates.
inline LocalSystem dual(const LocalSystem& a) {
  const auto& x = a.base();
  std::vector<QMatrix> t(x.morphism_count());
  for (MorphismId m = 0; m < t.size(); ++m) t[m] = a.transport(x.inverse(m)).transpose();
  return LocalSystem(x, a.dims(), std::move(t));
}

inline LocalSystem pullback(const GroupoidFunctor& f, const LocalSystem& a) {
  require(a.base() == f.codomain(), ErrorKind::BaseMismatch, "pullback: system does not live on the codomain");
  const auto& x = f.domain();
  std::vector<std::size_t> dims(x.object_count());
  std::vector<QMatrix> t(x.morphism_count());
  for (ObjectId o = 0; o < dims.size(); ++o) dims[o] = a.dim(f(o));
  for (MorphismId m = 0; m < t.size(); ++m) t[m] = a.transport(f.map(m));
  return LocalSystem(x, std::move(dims), std::move(t));
}

inline SystemMap identity_map(const LocalSystem& a) {
  std::vector<QMatrix> c(a.base().object_count());
  for (ObjectId x = 0; x < c.size(); ++x) c[x] = QMatrix::identity(a.dim(x));
  return SystemMap(a, a, std::move(c));
}

inline SystemMap zero_map(const LocalSystem& a, const LocalSystem& b) {
  std::vector<QMatrix> c(a.base().object_count());
  for (ObjectId x = 0; x < c.size(); ++x) c[x] = QMatrix(b.dim(x), a.dim(x));
  return SystemMap(a, b, std::move(c));
}

/// g o f.
inline SystemMap compose(const SystemMap& g, const SystemMap& f) {
  require(f.target() == g.source(), ErrorKind::Composability, "system maps are not composable");
  std::vector<QMatrix> c(f.components().size());
  for (ObjectId x = 0; x < c.size(); ++x) c[x] = g.component(x) * f.component(x);
  return SystemMap(f.source(), g.target(), std::move(c));
}

inline SystemMap operator+(const SystemMap& a, const SystemMap& b) {
  require(a.source() == b.source() && a.target() == b.target(), ErrorKind::Mismatch, "adding non-parallel maps");
  std::vector<QMatrix> c(a.components().size());
  for (ObjectId x = 0; x < c.size(); ++x) c[x] = a.component(x) + b.component(x);
  return SystemMap(a.source(), a.target(), std::move(c));
}

inline SystemMap scale(const Rational& s, const SystemMap& a) {
  std::vector<QMatrix> c(a.components());
  for (auto& m : c) m *= s;
  return SystemMap(a.source(), a.target(), std::move(c));
}

/// The objectwise inverse when every component is invertible.
inline std::optional<SystemMap> is_equivalence(const SystemMap& h) {
  std::vector<QMatrix> c(h.components().size());
  for (ObjectId x = 0; x < c.size(); ++x) {
    auto inv = inverse(h.component(x));
    if (!inv) return std::nullopt;
    c[x] = std::move(*inv);
  }
  return SystemMap(h.target(), h.source(), std::move(c));
}

inline SystemMap invert(const SystemMap& h) {
  auto inv = is_equivalence(h);
  if (!inv) fail(ErrorKind::NotAnEquivalence, "system map has a non-invertible component");
  return *inv;
}

/// Dh : D(target) -> D(source), componentwise transpose.
inline SystemMap dual_map(const SystemMap& h) {
  std::vector<QMatrix> c(h.components().size());
  for (ObjectId x = 0; x < c.size(); ++x) c[x] = h.component(x).transpose();
  return SystemMap(dual(h.target()), dual(h.source()), std::move(c));
}

inline SystemMap tensor_map(const SystemMap& f, const SystemMap& g) {
  std::vector<QMatrix> c(f.components().size());
  for (ObjectId x = 0; x < c.size(); ++x) c[x] = kron(f.component(x), g.component(x));
  return SystemMap(tensor(f.source(), g.source()), tensor(f.target(), g.target()), std::move(c));
}

inline SystemMap pullback_map(const GroupoidFunctor& f, const SystemMap& h) {
  require(h.base() == f.codomain(), ErrorKind::BaseMismatch, "pullback_map: map does not live on the codomain");
  std::vector<QMatrix> c(f.domain().object_count());
  for (ObjectId x = 0; x < c.size(); ++x) c[x] = h.component(f(x));
  return SystemMap(pullback(f, h.source()), pullback(f, h.target()), std::move(c));
}

/// Re-labels a map between systems that are equal as values.
inline SystemMap retype(const SystemMap& h, const LocalSystem& source, const LocalSystem& target) {
  require(h.source() == source && h.target() == target, ErrorKind::Mismatch, "retype: systems differ");
  return SystemMap(source, target, h.components());
}

// Structural isomorphisms of the symmetric monoidal structure, as explicit
// permutation matrices.

inline QMatrix swap_matrix(std::size_t da, std::size_t db) {
  QMatrix p(da * db, da * db);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < db; ++b) p(b * da + a, a * db + b) = 1;
  return p;
}

/// A (x) B -> B (x) A.
inline SystemMap symmetry(const LocalSystem& a, const LocalSystem& b) {
  std::vector<QMatrix> c(a.base().object_count());
  for (ObjectId x = 0; x < c.size(); ++x) c[x] = swap_matrix(a.dim(x), b.dim(x));
  return SystemMap(tensor(a, b), tensor(b, a), std::move(c));
}

/// (A (x) B) (x) C -> A (x) (B (x) C); identity in the lexicographic basis.
inline SystemMap associator(const LocalSystem& a, const LocalSystem& b, const LocalSystem& c) {
  std::vector<QMatrix> comps(a.base().object_count());
  for (ObjectId x = 0; x < comps.size(); ++x) comps[x] = QMatrix::identity(a.dim(x) * b.dim(x) * c.dim(x));
  return SystemMap(tensor(tensor(a, b), c), tensor(a, tensor(b, c)), std::move(comps));
}

/// A (x) 1 -> A.
inline SystemMap right_unitor(const LocalSystem& a) {
  return SystemMap(tensor(a, unit_system(a.base())), a, identity_map(a).components());
}

/// A -> DDA; the identity matrix in dual-basis coordinates.
inline SystemMap double_dual(const LocalSystem& a) {
  return SystemMap(a, dual(dual(a)), identity_map(a).components());
}

/// A fiberwise inner product: an equivalence A -> DA. Symmetric when each
/// component matrix equals its transpose.
class InnerProduct {
 public:
  explicit InnerProduct(SystemMap pairing) : pairing_(std::move(pairing)) {
    require(pairing_.target() == dual(pairing_.source()), ErrorKind::CarrierMismatch,
            "inner product must map a system to its dual");
    if (auto bad = pairing_.naturality_failure())
      fail(ErrorKind::InvalidMap, "inner product is not natural at morphism " + std::to_string(*bad));
    auto inv = is_equivalence(pairing_);
    require(inv.has_value(), ErrorKind::NotAnEquivalence, "inner product is degenerate");
    inverse_ = std::move(*inv);
  }

  const LocalSystem& carrier() const noexcept { return pairing_.source(); }
  const SystemMap& pairing() const noexcept { return pairing_; }
  const SystemMap& inverse() const noexcept { return inverse_; }

  bool is_symmetric() const {
    for (const auto& c : pairing_.components())
      if (c.transpose() != c) return false;
    return true;
  }

 private:
  SystemMap pairing_;
  SystemMap inverse_;
};

/// Identity pairing; only natural when every transport is orthogonal.
inline InnerProduct standard_inner_product(const LocalSystem& a) {
  return InnerProduct(SystemMap(a, dual(a), identity_map(a).components()));
}

/// Invariant inner product obtained by averaging the standard one over the
/// automorphism group of each component root and transporting it out.
inline InnerProduct averaged_inner_product(const LocalSystem& a) {
  const auto& x = a.base();
  auto labels = x.component_labels();
  std::vector<QMatrix> c(x.object_count());
  for (ObjectId r = 0; r < x.object_count(); ++r) {
    if (labels[r] != r) continue;
    QMatrix p(a.dim(r), a.dim(r));
    for (MorphismId g : x.hom(r, r)) p += a.transport(g).transpose() * a.transport(g);
    for (MorphismId m : x.out(r)) {
      ObjectId t = x.target(m);
      if (!c[t].rows() && !c[t].cols() && a.dim(t) != 0) {
        const QMatrix& back = a.transport(x.inverse(m));
        c[t] = back.transpose() * p * back;
      } else if (a.dim(t) == 0) {
        c[t] = QMatrix(0, 0);
      }
    }
  }
  return InnerProduct(SystemMap(a, dual(a), std::move(c)));
}

}  // namespace lhott
