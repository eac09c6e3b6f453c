#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "lhott/groupoid.hpp"

namespace lhott {

/// A functor between finite groupoids, stored as total object and morphism maps.
class GroupoidFunctor {
 public:
  GroupoidFunctor() = default;
  GroupoidFunctor(FiniteGroupoid domain, FiniteGroupoid codomain, std::vector<ObjectId> object_map,
                  std::vector<MorphismId> morphism_map)
      : domain_(std::move(domain)),
        codomain_(std::move(codomain)),
        objects_(std::move(object_map)),
        morphisms_(std::move(morphism_map)) {
    require(objects_.size() == domain_.object_count(), ErrorKind::InvalidFunctor,
            "object map is not total");
    require(morphisms_.size() == domain_.morphism_count(), ErrorKind::InvalidFunctor,
            "morphism map is not total");
  }

  const FiniteGroupoid& domain() const noexcept { return domain_; }
  const FiniteGroupoid& codomain() const noexcept { return codomain_; }
  ObjectId operator()(ObjectId x) const { return objects_.at(x); }
  MorphismId map(MorphismId m) const { return morphisms_.at(m); }
  const std::vector<ObjectId>& object_map() const noexcept { return objects_; }
  const std::vector<MorphismId>& morphism_map() const noexcept { return morphisms_; }

  /// Throws InvalidFunctor unless sources, targets, identities and
  /// composition are preserved.
  void validate() const {
    for (ObjectId y : objects_)
      require(y < codomain_.object_count(), ErrorKind::InvalidFunctor, "object image out of range");
    for (MorphismId m : morphisms_)
      require(m < codomain_.morphism_count(), ErrorKind::InvalidFunctor, "morphism image out of range");
    for (MorphismId m = 0; m < domain_.morphism_count(); ++m) {
      const Arrow& a = domain_.arrow(m);
      require(codomain_.source(map(m)) == objects_[a.source] &&
                  codomain_.target(map(m)) == objects_[a.target],
              ErrorKind::InvalidFunctor, "morphism " + std::to_string(m) + " is sent to a morphism with wrong endpoints");
    }
    for (ObjectId x = 0; x < domain_.object_count(); ++x)
      require(map(domain_.identity(x)) == codomain_.identity(objects_[x]), ErrorKind::InvalidFunctor,
              "identity of object " + std::to_string(x) + " is not preserved");
    for (MorphismId f = 0; f < domain_.morphism_count(); ++f)
      for (MorphismId g : domain_.out(domain_.target(f)))
        require(map(domain_.compose(g, f)) == codomain_.compose(map(g), map(f)), ErrorKind::InvalidFunctor,
                "composite of " + std::to_string(g) + " and " + std::to_string(f) + " is not preserved");
  }

  friend bool operator==(const GroupoidFunctor& a, const GroupoidFunctor& b) {
    return a.objects_ == b.objects_ && a.morphisms_ == b.morphisms_ && a.domain_ == b.domain_ &&
           a.codomain_ == b.codomain_;
  }

 private:
  FiniteGroupoid domain_;
  FiniteGroupoid codomain_;
  std::vector<ObjectId> objects_;
  std::vector<MorphismId> morphisms_;
};

inline GroupoidFunctor identity_functor(const FiniteGroupoid& x) {
  std::vector<ObjectId> objs(x.object_count());
  std::vector<MorphismId> mors(x.morphism_count());
  std::iota(objs.begin(), objs.end(), 0);
  std::iota(mors.begin(), mors.end(), 0);
  return {x, x, std::move(objs), std::move(mors)};
}

/// The unique functor to the point.
inline GroupoidFunctor terminal_functor(const FiniteGroupoid& x) {
  return {x, point(), std::vector<ObjectId>(x.object_count(), 0),
          std::vector<MorphismId>(x.morphism_count(), 0)};
}

/// The functor point -> X picking out an object.
inline GroupoidFunctor object_inclusion(const FiniteGroupoid& x, ObjectId y) {
  require(y < x.object_count(), ErrorKind::UnknownObject, "object " + std::to_string(y));
  return {point(), x, {y}, {x.identity(y)}};
}

/// g o f.
inline GroupoidFunctor compose(const GroupoidFunctor& g, const GroupoidFunctor& f) {
  require(f.codomain() == g.domain(), ErrorKind::Composability, "functors are not composable");
  std::vector<ObjectId> objs(f.domain().object_count());
  std::vector<MorphismId> mors(f.domain().morphism_count());
  for (ObjectId x = 0; x < objs.size(); ++x) objs[x] = g(f(x));
  for (MorphismId m = 0; m < mors.size(); ++m) mors[m] = g.map(f.map(m));
  return {f.domain(), g.codomain(), std::move(objs), std::move(mors)};
}

/// A natural isomorphism between parallel functors; `component(x)` is a
/// morphism source(x) -> target(x) in the common codomain.
class NaturalIso {
 public:
  NaturalIso(GroupoidFunctor source, GroupoidFunctor target, std::vector<MorphismId> components)
      : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {}

  const GroupoidFunctor& source() const noexcept { return source_; }
  const GroupoidFunctor& target() const noexcept { return target_; }
  MorphismId component(ObjectId x) const { return components_.at(x); }
  const std::vector<MorphismId>& components() const noexcept { return components_; }

  void validate() const {
    require(source_.domain() == target_.domain() && source_.codomain() == target_.codomain(),
            ErrorKind::InvalidNaturalIso, "functors are not parallel");
    const auto& dom = source_.domain();
    const auto& cod = source_.codomain();
    require(components_.size() == dom.object_count(), ErrorKind::InvalidNaturalIso, "components not total");
    for (ObjectId x = 0; x < dom.object_count(); ++x) {
      MorphismId c = components_[x];
      require(c < cod.morphism_count() && cod.source(c) == source_(x) && cod.target(c) == target_(x),
              ErrorKind::InvalidNaturalIso, "component at " + std::to_string(x) + " has wrong endpoints");
    }
    for (MorphismId m = 0; m < dom.morphism_count(); ++m) {
      const Arrow& a = dom.arrow(m);
      require(cod.compose(components_[a.target], source_.map(m)) ==
                  cod.compose(target_.map(m), components_[a.source]),
              ErrorKind::InvalidNaturalIso, "naturality fails at morphism " + std::to_string(m));
    }
  }

 private:
  GroupoidFunctor source_;
  GroupoidFunctor target_;
  std::vector<MorphismId> components_;
};

/// True when F is fully faithful and essentially surjective.
inline bool is_equivalence(const GroupoidFunctor& f) {
  const auto& x = f.domain();
  const auto& y = f.codomain();
  for (ObjectId a = 0; a < x.object_count(); ++a)
    for (ObjectId b = 0; b < x.object_count(); ++b) {
      auto src = x.hom(a, b);
      auto dst = y.hom(f(a), f(b));
      if (src.size() != dst.size()) return false;
      std::vector<MorphismId> images;
      for (MorphismId m : src) images.push_back(f.map(m));
      std::sort(images.begin(), images.end());
      if (std::adjacent_find(images.begin(), images.end()) != images.end()) return false;
    }
  std::vector<bool> hit(y.object_count(), false);
  auto labels = y.component_labels();
  for (ObjectId a = 0; a < x.object_count(); ++a) hit[labels[f(a)]] = true;
  for (ObjectId b = 0; b < y.object_count(); ++b)
    if (!hit[labels[b]]) return false;
  return true;
}

}  // namespace lhott
