#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "lhott/functor.hpp"
#include "lhott/rational.hpp"

namespace lhott {

struct ProductGroupoid {
  FiniteGroupoid groupoid;
  GroupoidFunctor first;
  GroupoidFunctor second;

  ObjectId object(ObjectId x, ObjectId y) const { return x * second.codomain().object_count() + y; }
  MorphismId morphism(MorphismId f, MorphismId g) const { return f * second.codomain().morphism_count() + g; }
};

/// X x Y with object id x*|Y|+y and morphism id f*|Mor Y|+g.
inline ProductGroupoid product(const FiniteGroupoid& x, const FiniteGroupoid& y) {
  const std::size_t ny = y.object_count(), my = y.morphism_count();
  std::vector<Arrow> arrows;
  arrows.reserve(x.morphism_count() * my);
  std::vector<MorphismId> inv;
  for (MorphismId f = 0; f < x.morphism_count(); ++f)
    for (MorphismId g = 0; g < my; ++g) {
      arrows.push_back({x.source(f) * ny + y.source(g), x.target(f) * ny + y.target(g)});
      inv.push_back(x.inverse(f) * my + y.inverse(g));
    }
  std::vector<MorphismId> ids;
  for (ObjectId a = 0; a < x.object_count(); ++a)
    for (ObjectId b = 0; b < ny; ++b) ids.push_back(x.identity(a) * my + y.identity(b));
  auto xy = FiniteGroupoid::build(x.object_count() * ny, std::move(arrows), std::move(ids), std::move(inv),
                                  [&](MorphismId g, MorphismId f) {
                                    return x.compose(g / my, f / my) * my + y.compose(g % my, f % my);
                                  });
  std::vector<ObjectId> o1(xy.object_count()), o2(xy.object_count());
  std::vector<MorphismId> m1(xy.morphism_count()), m2(xy.morphism_count());
  for (ObjectId o = 0; o < o1.size(); ++o) o1[o] = o / ny, o2[o] = o % ny;
  for (MorphismId m = 0; m < m1.size(); ++m) m1[m] = m / my, m2[m] = m % my;
  return {xy, GroupoidFunctor(xy, x, std::move(o1), std::move(m1)),
          GroupoidFunctor(xy, y, std::move(o2), std::move(m2))};
}

/// The functor Z -> X x Y with components f and g.
inline GroupoidFunctor pairing(const ProductGroupoid& xy, const GroupoidFunctor& f, const GroupoidFunctor& g) {
  require(f.domain() == g.domain(), ErrorKind::Mismatch, "pairing: functors have different domains");
  require(f.codomain() == xy.first.codomain() && g.codomain() == xy.second.codomain(), ErrorKind::Mismatch,
          "pairing: codomains do not match the product factors");
  const auto& z = f.domain();
  std::vector<ObjectId> objs(z.object_count());
  std::vector<MorphismId> mors(z.morphism_count());
  for (ObjectId o = 0; o < objs.size(); ++o) objs[o] = xy.object(f(o), g(o));
  for (MorphismId m = 0; m < mors.size(); ++m) mors[m] = xy.morphism(f.map(m), g.map(m));
  return {z, xy.groupoid, std::move(objs), std::move(mors)};
}

struct DisjointUnion {
  FiniteGroupoid groupoid;
  GroupoidFunctor left;
  GroupoidFunctor right;
};

/// X + Y: objects and morphisms of X first, then those of Y shifted.
inline DisjointUnion disjoint_union(const FiniteGroupoid& x, const FiniteGroupoid& y) {
  const std::size_t nx = x.object_count(), mx = x.morphism_count();
  std::vector<Arrow> arrows;
  std::vector<MorphismId> ids, inv;
  for (MorphismId m = 0; m < mx; ++m) arrows.push_back(x.arrow(m)), inv.push_back(x.inverse(m));
  for (MorphismId m = 0; m < y.morphism_count(); ++m)
    arrows.push_back({y.source(m) + nx, y.target(m) + nx}), inv.push_back(y.inverse(m) + mx);
  for (ObjectId o = 0; o < nx; ++o) ids.push_back(x.identity(o));
  for (ObjectId o = 0; o < y.object_count(); ++o) ids.push_back(y.identity(o) + mx);
  auto u = FiniteGroupoid::build(nx + y.object_count(), std::move(arrows), std::move(ids), std::move(inv),
                                 [&](MorphismId g, MorphismId f) {
                                   return f < mx ? x.compose(g, f) : y.compose(g - mx, f - mx) + mx;
                                 });
  std::vector<ObjectId> lo(nx), ro(y.object_count());
  std::vector<MorphismId> lm(mx), rm(y.morphism_count());
  std::iota(lo.begin(), lo.end(), 0);
  std::iota(lm.begin(), lm.end(), 0);
  std::iota(ro.begin(), ro.end(), nx);
  std::iota(rm.begin(), rm.end(), mx);
  return {u, GroupoidFunctor(x, u, std::move(lo), std::move(lm)),
          GroupoidFunctor(y, u, std::move(ro), std::move(rm))};
}

struct Subgroupoid {
  FiniteGroupoid groupoid;
  GroupoidFunctor inclusion;
};

/// Full subgroupoid on the listed objects (in the given order).
inline Subgroupoid full_subgroupoid(const FiniteGroupoid& x, const std::vector<ObjectId>& objects) {
  std::vector<std::size_t> slot(x.object_count(), x.object_count());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    require(objects[i] < x.object_count(), ErrorKind::UnknownObject, "object " + std::to_string(objects[i]));
    slot[objects[i]] = i;
  }
  std::vector<MorphismId> keep, new_id(x.morphism_count(), x.morphism_count());
  for (MorphismId m = 0; m < x.morphism_count(); ++m)
    if (slot[x.source(m)] < objects.size() && slot[x.target(m)] < objects.size()) {
      new_id[m] = keep.size();
      keep.push_back(m);
    }
  std::vector<Arrow> arrows;
  std::vector<MorphismId> inv, ids;
  for (MorphismId m : keep) {
    arrows.push_back({slot[x.source(m)], slot[x.target(m)]});
    inv.push_back(new_id[x.inverse(m)]);
  }
  for (ObjectId o : objects) ids.push_back(new_id[x.identity(o)]);
  auto s = FiniteGroupoid::build(objects.size(), std::move(arrows), std::move(ids), std::move(inv),
                                 [&](MorphismId g, MorphismId f) { return new_id[x.compose(keep[g], keep[f])]; });
  return {s, GroupoidFunctor(s, x, objects, keep)};
}

/// Objects of the comma groupoid f/y, pairs (x, phi : f(x) -> y).
/// Objects with phi the identity come first (by x), then the rest by (x, phi).
/// Every fiber morphism is a pair (fiber object, m in out(x)).
class FiberIndex {
 public:
  struct Object {
    ObjectId x;
    MorphismId phi;
  };
  struct Morphism {
    std::size_t source;
    std::size_t target;
    MorphismId m;  // morphism of the domain
  };

  FiberIndex(const GroupoidFunctor& f, ObjectId y) : y_(y) {
    const auto& dom = f.domain();
    const auto& cod = f.codomain();
    require(y < cod.object_count(), ErrorKind::UnknownObject, "object " + std::to_string(y) + " of codomain");
    const MorphismId id_y = cod.identity(y);
    for (ObjectId x = 0; x < dom.object_count(); ++x)
      if (f(x) == y) add({x, id_y}, cod);
    for (ObjectId x = 0; x < dom.object_count(); ++x)
      for (MorphismId phi : cod.out(f(x)))
        if (cod.target(phi) == y && phi != id_y) add({x, phi}, cod);
    for (std::size_t i = 0; i < objects_.size(); ++i) {
      const auto [x, phi] = objects_[i];
      for (MorphismId m : dom.out(x)) {
        MorphismId phi2 = cod.compose(phi, cod.inverse(f.map(m)));
        morphisms_.push_back({i, index(dom.target(m), phi2, cod), m});
      }
    }
  }

  ObjectId base() const noexcept { return y_; }
  const std::vector<Object>& objects() const noexcept { return objects_; }
  const std::vector<Morphism>& morphisms() const noexcept { return morphisms_; }
  std::size_t size() const noexcept { return objects_.size(); }

  std::size_t index(ObjectId x, MorphismId phi, const FiniteGroupoid& cod) const {
    auto it = lookup_.find(key(x, phi, cod));
    if (it == lookup_.end()) fail(ErrorKind::UnknownObject, "not a fiber object");
    return it->second;
  }

 private:
  static std::uint64_t key(ObjectId x, MorphismId phi, const FiniteGroupoid& cod) {
    return static_cast<std::uint64_t>(x) * cod.morphism_count() + phi;
  }
  void add(Object o, const FiniteGroupoid& cod) {
    lookup_.emplace(key(o.x, o.phi, cod), objects_.size());
    objects_.push_back(o);
  }

  ObjectId y_;
  std::vector<Object> objects_;
  std::vector<Morphism> morphisms_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
};

struct HomotopyFiber {
  FiniteGroupoid groupoid;
  GroupoidFunctor projection;
  std::vector<FiberIndex::Object> labels;
};

/// The comma groupoid f/y realising the homotopy fiber of f over y.
inline HomotopyFiber homotopy_fiber(const GroupoidFunctor& f, ObjectId y) {
  FiberIndex idx(f, y);
  const auto& dom = f.domain();
  std::vector<Arrow> arrows;
  std::vector<std::size_t> base(idx.size() + 1, 0);
  for (std::size_t i = 0; i < idx.size(); ++i) base[i + 1] = base[i] + dom.out(idx.objects()[i].x).size();
  for (const auto& m : idx.morphisms()) arrows.push_back({m.source, m.target});
  auto mor_id = [&](std::size_t i, MorphismId m) { return base[i] + dom.out_position(m); };
  std::vector<MorphismId> ids, inv(arrows.size());
  for (std::size_t i = 0; i < idx.size(); ++i) ids.push_back(mor_id(i, dom.identity(idx.objects()[i].x)));
  for (std::size_t k = 0; k < arrows.size(); ++k) {
    const auto& m = idx.morphisms()[k];
    inv[k] = mor_id(m.target, dom.inverse(m.m));
  }
  const auto& ms = idx.morphisms();
  auto g = FiniteGroupoid::build(idx.size(), std::move(arrows), std::move(ids), std::move(inv),
                                 [&](MorphismId b, MorphismId a) {
                                   return mor_id(ms[a].source, dom.compose(ms[b].m, ms[a].m));
                                 });
  std::vector<ObjectId> po;
  std::vector<MorphismId> pm;
  for (const auto& o : idx.objects()) po.push_back(o.x);
  for (const auto& m : ms) pm.push_back(m.m);
  return {g, GroupoidFunctor(g, dom, std::move(po), std::move(pm)), idx.objects()};
}

/// Homotopy pullback of X -f-> Y <-g- Z as the iso-comma groupoid.
struct IsoComma {
  struct Object {
    ObjectId x;
    ObjectId z;
    MorphismId phi;  // f(x) -> g(z)
  };
  FiniteGroupoid apex;
  GroupoidFunctor left;   // to X
  GroupoidFunctor right;  // to Z
  NaturalIso filler;      // f o left => g o right
  std::vector<Object> labels;
};

inline IsoComma iso_comma(const GroupoidFunctor& f, const GroupoidFunctor& g) {
  require(f.codomain() == g.codomain(), ErrorKind::CodomainMismatch, "iso_comma: functors have different codomains");
  const auto& x = f.domain();
  const auto& z = g.domain();
  const auto& y = f.codomain();
  std::vector<IsoComma::Object> objs;
  std::unordered_map<std::uint64_t, std::size_t> lookup;
  auto key = [&](ObjectId a, ObjectId c, MorphismId phi) {
    return (static_cast<std::uint64_t>(a) * z.object_count() + c) * y.morphism_count() + phi;
  };
  for (ObjectId a = 0; a < x.object_count(); ++a)
    for (ObjectId c = 0; c < z.object_count(); ++c)
      for (MorphismId phi : y.out(f(a)))
        if (y.target(phi) == g(c)) {
          lookup.emplace(key(a, c, phi), objs.size());
          objs.push_back({a, c, phi});
        }
  // morphism (o, m, n) has id base[o] + pos(m) * |out(z)| + pos(n)
  std::vector<std::size_t> base(objs.size() + 1, 0);
  for (std::size_t o = 0; o < objs.size(); ++o)
    base[o + 1] = base[o] + x.out(objs[o].x).size() * z.out(objs[o].z).size();
  auto mor_id = [&](std::size_t o, MorphismId m, MorphismId n) {
    return base[o] + x.out_position(m) * z.out(objs[o].z).size() + z.out_position(n);
  };
  struct Parts {
    std::size_t o;
    MorphismId m, n;
  };
  std::vector<Arrow> arrows(base.back());
  std::vector<Parts> parts(base.back());
  for (std::size_t o = 0; o < objs.size(); ++o) {
    const auto [a, c, phi] = objs[o];
    for (MorphismId m : x.out(a))
      for (MorphismId n : z.out(c)) {
        MorphismId phi2 = y.compose(y.compose(g.map(n), phi), y.inverse(f.map(m)));
        std::size_t t = lookup.at(key(x.target(m), z.target(n), phi2));
        std::size_t id = mor_id(o, m, n);
        arrows[id] = {o, t};
        parts[id] = {o, m, n};
      }
  }
  std::vector<MorphismId> ids, inv(arrows.size());
  for (std::size_t o = 0; o < objs.size(); ++o) ids.push_back(mor_id(o, x.identity(objs[o].x), z.identity(objs[o].z)));
  for (std::size_t k = 0; k < arrows.size(); ++k)
    inv[k] = mor_id(arrows[k].target, x.inverse(parts[k].m), z.inverse(parts[k].n));
  auto apex = FiniteGroupoid::build(objs.size(), std::move(arrows), std::move(ids), std::move(inv),
                                    [&](MorphismId b, MorphismId a) {
                                      return mor_id(parts[a].o, x.compose(parts[b].m, parts[a].m),
                                                    z.compose(parts[b].n, parts[a].n));
                                    });
  std::vector<ObjectId> lo, ro;
  std::vector<MorphismId> lm, rm, comps;
  for (const auto& o : objs) lo.push_back(o.x), ro.push_back(o.z), comps.push_back(o.phi);
  for (const auto& p : parts) lm.push_back(p.m), rm.push_back(p.n);
  GroupoidFunctor left(apex, x, std::move(lo), std::move(lm));
  GroupoidFunctor right(apex, z, std::move(ro), std::move(rm));
  NaturalIso filler(compose(f, left), compose(g, right), std::move(comps));
  return {apex, std::move(left), std::move(right), std::move(filler), std::move(objs)};
}

/// Sum over components of 1/|Aut(x)|.
inline Rational groupoid_cardinality(const FiniteGroupoid& x) {
  auto labels = x.component_labels();
  Rational total = 0;
  for (ObjectId o = 0; o < x.object_count(); ++o) {
    if (labels[o] != o) continue;
    std::size_t aut = x.hom(o, o).size();
    total += Rational(1) / Rational(static_cast<unsigned long>(aut));
  }
  return total;
}

}  // namespace lhott
