#pragma once

#include <cstddef>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "lhott/error.hpp"
#include "lhott/group.hpp"

namespace lhott {

using ObjectId = std::size_t;
using MorphismId = std::size_t;

struct Arrow {
  ObjectId source;
  ObjectId target;
  friend bool operator==(const Arrow&, const Arrow&) = default;
};

/// A finite 1-groupoid with dense object and morphism ids and an explicit
/// composition table. Values are immutable and cheap to copy.
class FiniteGroupoid {
 public:
  FiniteGroupoid() : data_(std::make_shared<Data>()) {}

  /// Builds the composition table by calling `compose(g, f)` (meaning g o f)
  /// once per composable pair. No axioms are checked; call validate().
  template <class ComposeFn>
  static FiniteGroupoid build(std::size_t objects, std::vector<Arrow> arrows,
                              std::vector<MorphismId> identity, std::vector<MorphismId> inverse,
                              ComposeFn&& compose) {
    auto d = std::make_shared<Data>();
    d->objects = objects;
    d->arrows = std::move(arrows);
    d->identity = std::move(identity);
    d->inverse = std::move(inverse);
    const std::size_t m = d->arrows.size();
    require(d->identity.size() == objects, ErrorKind::InvalidGroupoid, "identity table has wrong size");
    require(d->inverse.size() == m, ErrorKind::InvalidGroupoid, "inverse table has wrong size");
    d->out.assign(objects, {});
    d->position.assign(m, 0);
    for (MorphismId f = 0; f < m; ++f) {
      const Arrow& a = d->arrows[f];
      require(a.source < objects && a.target < objects, ErrorKind::InvalidGroupoid,
              "morphism " + std::to_string(f) + " has an endpoint out of range");
      d->position[f] = d->out[a.source].size();
      d->out[a.source].push_back(f);
    }
    d->composite.resize(m);
    for (MorphismId f = 0; f < m; ++f) {
      const auto& next = d->out[d->arrows[f].target];
      d->composite[f].reserve(next.size());
      for (MorphismId g : next) {
        MorphismId gf = compose(g, f);
        require(gf < m, ErrorKind::InvalidGroupoid, "composite out of range");
        d->composite[f].push_back(gf);
      }
    }
    FiniteGroupoid x;
    x.data_ = std::move(d);
    return x;
  }

  std::size_t object_count() const noexcept { return data_->objects; }
  std::size_t morphism_count() const noexcept { return data_->arrows.size(); }
  ObjectId source(MorphismId m) const { return data_->arrows.at(m).source; }
  ObjectId target(MorphismId m) const { return data_->arrows.at(m).target; }
  const Arrow& arrow(MorphismId m) const { return data_->arrows.at(m); }
  MorphismId identity(ObjectId x) const { return data_->identity.at(x); }
  MorphismId inverse(MorphismId m) const { return data_->inverse.at(m); }
  bool is_identity(MorphismId m) const { return identity(source(m)) == m; }

  /// g o f; requires target(f) == source(g).
  MorphismId compose(MorphismId g, MorphismId f) const {
    if (target(f) != source(g))
      fail(ErrorKind::Composability, "morphisms " + std::to_string(g) + " and " + std::to_string(f) +
                                         " are not composable");
    return data_->composite[f][data_->position[g]];
  }

  /// Index of `m` within out(source(m)).
  std::size_t out_position(MorphismId m) const { return data_->position.at(m); }

  /// Morphisms with the given source, in id order.
  std::span<const MorphismId> out(ObjectId x) const { return data_->out.at(x); }

  std::vector<MorphismId> hom(ObjectId x, ObjectId y) const {
    std::vector<MorphismId> r;
    for (MorphismId m : out(x))
      if (target(m) == y) r.push_back(m);
    return r;
  }

  /// Connected-component label per object; labels are the least object id
  /// of the component.
  std::vector<ObjectId> component_labels() const {
    std::vector<ObjectId> parent(object_count());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](ObjectId x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const Arrow& a : data_->arrows) {
      ObjectId s = find(a.source), t = find(a.target);
      if (s != t) parent[std::max(s, t)] = std::min(s, t);
    }
    std::vector<ObjectId> label(object_count());
    for (ObjectId x = 0; x < object_count(); ++x) label[x] = find(x);
    return label;
  }

  /// Throws InvalidGroupoid naming the first violated axiom.
  void validate() const {
    const auto& d = *data_;
    auto where = [](const char* what, std::size_t a) { return std::string(what) + " " + std::to_string(a); };
    for (ObjectId x = 0; x < d.objects; ++x) {
      MorphismId i = d.identity[x];
      require(i < morphism_count() && source(i) == x && target(i) == x, ErrorKind::InvalidGroupoid,
              where("identity of object", x) + " is not an endomorphism of it");
    }
    for (MorphismId f = 0; f < morphism_count(); ++f) {
      const Arrow& a = d.arrows[f];
      require(compose(identity(a.target), f) == f && compose(f, identity(a.source)) == f,
              ErrorKind::InvalidGroupoid, where("identity law fails for morphism", f));
      MorphismId g = d.inverse[f];
      require(g < morphism_count() && source(g) == a.target && target(g) == a.source,
              ErrorKind::InvalidGroupoid, where("inverse has wrong endpoints for morphism", f));
      require(compose(g, f) == identity(a.source) && compose(f, g) == identity(a.target),
              ErrorKind::InvalidGroupoid, where("inverse law fails for morphism", f));
      for (MorphismId g2 : out(a.target)) {
        MorphismId gf = compose(g2, f);
        require(source(gf) == a.source && target(gf) == target(g2), ErrorKind::InvalidGroupoid,
                where("composite has wrong endpoints at morphism", f));
        for (MorphismId h : out(target(g2)))
          require(compose(h, gf) == compose(compose(h, g2), f), ErrorKind::InvalidGroupoid,
                  "associativity fails at (" + std::to_string(h) + "," + std::to_string(g2) + "," +
                      std::to_string(f) + ")");
      }
    }
  }

  bool same_as(const FiniteGroupoid& o) const noexcept { return data_ == o.data_; }

  friend bool operator==(const FiniteGroupoid& a, const FiniteGroupoid& b) {
    if (a.data_ == b.data_) return true;
    const Data& x = *a.data_;
    const Data& y = *b.data_;
    return x.objects == y.objects && x.arrows == y.arrows && x.identity == y.identity &&
           x.inverse == y.inverse && x.composite == y.composite;
  }

 private:
  struct Data {
    std::size_t objects = 0;
    std::vector<Arrow> arrows;
    std::vector<MorphismId> identity;
    std::vector<MorphismId> inverse;
    std::vector<std::vector<MorphismId>> out;
    std::vector<std::size_t> position;  // index of a morphism within out(source)
    std::vector<std::vector<MorphismId>> composite;  // composite[f][position[g]] = g o f
  };

  std::shared_ptr<const Data> data_;
};

inline FiniteGroupoid empty_groupoid() {
  return FiniteGroupoid::build(0, {}, {}, {}, [](MorphismId, MorphismId) -> MorphismId { return 0; });
}

/// n objects, identities only.
inline FiniteGroupoid discrete(std::size_t n) {
  std::vector<Arrow> arrows(n);
  std::vector<MorphismId> ids(n);
  for (std::size_t i = 0; i < n; ++i) arrows[i] = {i, i}, ids[i] = i;
  return FiniteGroupoid::build(n, std::move(arrows), ids, ids, [](MorphismId g, MorphismId) { return g; });
}

inline FiniteGroupoid point() { return discrete(1); }

/// BG: one object; morphism ids are group elements and g o f = g*f.
inline FiniteGroupoid delooping(const FiniteGroup& group) {
  const std::size_t n = group.order();
  std::vector<Arrow> arrows(n, Arrow{0, 0});
  std::vector<MorphismId> inv(n);
  for (std::size_t g = 0; g < n; ++g) inv[g] = group.inverse(g);
  return FiniteGroupoid::build(1, std::move(arrows), {group.identity()}, std::move(inv),
                               [&](MorphismId g, MorphismId f) { return group.mul(g, f); });
}

/// Action groupoid X//G for a left action given as action[g][x] = g.x.
/// Morphism (g, x) : x -> g.x has id g * |X| + x.
inline FiniteGroupoid action_groupoid(std::size_t elements, const FiniteGroup& group,
                                      const std::vector<std::vector<std::size_t>>& action) {
  const std::size_t n = elements, order = group.order();
  require(action.size() == order, ErrorKind::NotAnAction, "action needs one row per group element");
  for (std::size_t g = 0; g < order; ++g) {
    require(action[g].size() == n, ErrorKind::NotAnAction,
            "row " + std::to_string(g) + " does not map every element");
    for (std::size_t x : action[g]) require(x < n, ErrorKind::NotAnAction, "image out of range");
  }
  for (std::size_t x = 0; x < n; ++x)
    require(action[group.identity()][x] == x, ErrorKind::NotAnAction,
            "identity moves element " + std::to_string(x));
  for (std::size_t g = 0; g < order; ++g)
    for (std::size_t h = 0; h < order; ++h)
      for (std::size_t x = 0; x < n; ++x)
        require(action[h][action[g][x]] == action[group.mul(h, g)][x], ErrorKind::NotAnAction,
                "compatibility fails for elements " + std::to_string(h) + ", " + std::to_string(g) +
                    " at " + std::to_string(x));
  std::vector<Arrow> arrows(order * n);
  std::vector<MorphismId> ids(n), inv(order * n);
  for (std::size_t g = 0; g < order; ++g)
    for (std::size_t x = 0; x < n; ++x) {
      arrows[g * n + x] = {x, action[g][x]};
      inv[g * n + x] = group.inverse(g) * n + action[g][x];
    }
  for (std::size_t x = 0; x < n; ++x) ids[x] = group.identity() * n + x;
  return FiniteGroupoid::build(n, std::move(arrows), std::move(ids), std::move(inv),
                               [&](MorphismId hm, MorphismId gm) {
                                 return group.mul(hm / n, gm / n) * n + gm % n;
                               });
}

}  // namespace lhott
