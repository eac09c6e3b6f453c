#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace lhott;
using namespace lhott::testing;

namespace {

FiniteGroupoid bz2() { return delooping(FiniteGroup::cyclic(2)); }

LocalSystem sign_system() {
  return LocalSystem::checked(bz2(), {1}, {QMatrix::identity(1), QMatrix::scalar(-1)});
}

LocalSystem regular_z2() {
  return LocalSystem::checked(bz2(), {2}, {QMatrix::identity(2), QMatrix{{0, 1}, {1, 0}}});
}

template <class Fn>
ErrorKind kind_of_failure(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an engine error";
  return ErrorKind::InternalAxiomFailure;
}

}  // namespace

TEST(DependentSum, Examples) {
  Rng rng(1);
  auto s3 = s3_on_three();
  auto a = random_system(s3, rng, 9);
  auto along_id = dependent_sum(identity_functor(s3), a);
  EXPECT_EQ(along_id.system(), a);
  EXPECT_EQ(dependent_product(identity_functor(s3), a).system(), a);

  auto t = terminal_functor(bz2());
  EXPECT_EQ(dependent_sum(t, unit_system(bz2())).system().dim(0), 1u);
  EXPECT_EQ(dependent_sum(t, sign_system()).system().dim(0), 0u);
  EXPECT_EQ(dependent_product(t, sign_system()).system().dim(0), 0u);
  auto reg = dependent_product(t, regular_z2());
  ASSERT_EQ(reg.system().dim(0), 1u);
  // the invariant line is spanned by (1, 1)
  QMatrix inc = reg.fiber(0).from_value;
  EXPECT_EQ(inc(0, 0), inc(1, 0));
  EXPECT_NE(inc(0, 0), 0);

  EXPECT_EQ(kind_of_failure([&] { dependent_sum(t, a); }), ErrorKind::BaseMismatch);
  EXPECT_EQ(kind_of_failure([&] { dependent_product(t, a); }), ErrorKind::BaseMismatch);
}

TEST(DependentSum, EmptyFibersGiveZero) {
  auto incl = disjoint_union(bz2(), point()).left;
  auto one = unit_system(bz2());
  auto s = dependent_sum(incl, one).system();
  auto p = dependent_product(incl, one).system();
  EXPECT_EQ(s.dims(), (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(p.dims(), (std::vector<std::size_t>{1, 0}));
  auto from_empty = dependent_sum(terminal_functor(empty_groupoid()), zero_system(empty_groupoid()));
  EXPECT_EQ(from_empty.system().dim(0), 0u);
}

TEST(DependentSum, DimensionsMatchCharacterOracle) {
  for (const auto& inst : axiom_corpus(90, 101)) {
    auto s = dependent_sum(inst.f, inst.a).system();
    auto p = dependent_product(inst.f, inst.a).system();
    EXPECT_NO_THROW(s.validate()) << inst.label;
    EXPECT_NO_THROW(p.validate()) << inst.label;
    for (ObjectId y = 0; y < inst.f.codomain().object_count(); ++y) {
      Rational expected = fiber_invariant_dimension(inst.f, inst.a, y);
      EXPECT_EQ(Rational(static_cast<unsigned long>(s.dim(y))), expected) << inst.label << " at " << y;
      EXPECT_EQ(s.dim(y), p.dim(y)) << inst.label << " at " << y;
    }
  }
}

TEST(DependentSum, StructureMapsAreCompatibleAndUniversal) {
  std::size_t checked = 0;
  for (const auto& inst : axiom_corpus(90, 103)) {
    auto s = dependent_sum(inst.f, inst.a);
    auto p = dependent_product(inst.f, inst.a);
    EXPECT_TRUE(structure_maps_compatible(s)) << inst.label;
    EXPECT_TRUE(structure_maps_compatible(p)) << inst.label;
    for (ObjectId y = 0; y < inst.f.codomain().object_count(); ++y) {
      FiberIndex idx(inst.f, y);
      auto cocones = kernel(fiber_equations(idx, inst.a, true));
      auto cones = kernel(fiber_equations(idx, inst.a, false));
      EXPECT_EQ(cocones.dimension(), s.system().dim(y)) << inst.label;
      EXPECT_EQ(cones.dimension(), p.system().dim(y)) << inst.label;
      if (cocones.dimension() > 0) {
        EXPECT_TRUE(factors_uniquely_through_sum(s, y, cocones.inclusion.transpose())) << inst.label;
        ++checked;
      }
      if (cones.dimension() > 0) EXPECT_TRUE(factors_uniquely_through_product(p, y, cones.inclusion)) << inst.label;
      for (const auto& c : cocone_basis(s, y)) EXPECT_TRUE(factors_uniquely_through_sum(s, y, c)) << inst.label;
    }
  }
  EXPECT_GT(checked, 50u);
}

TEST(DependentSum, NonCoconeDoesNotFactor) {
  auto t = terminal_functor(bz2());
  auto s = dependent_sum(t, regular_z2());
  EXPECT_FALSE(factors_uniquely_through_sum(s, 0, QMatrix{{1, 0}}));
  auto p = dependent_product(t, regular_z2());
  EXPECT_FALSE(factors_uniquely_through_product(p, 0, QMatrix{{1}, {0}}));
}

TEST(Adjunction, Examples) {
  Rng rng(7);
  auto s3 = s3_on_three();
  auto a = random_system(s3, rng, 9);
  AdjunctionMaps id(identity_functor(s3));
  for (const auto& m : {id.sum_counit(a), id.sum_unit(a), id.product_unit(a), id.product_counit(a)})
    for (const auto& c : m.components()) EXPECT_TRUE(c.is_identity());

  AdjunctionMaps t(terminal_functor(bz2()));
  EXPECT_EQ(t.sum_counit(unit_system(point())).component(0), QMatrix::scalar(1));

  AdjunctionMaps d(terminal_functor(discrete(2)));
  EXPECT_EQ(d.sum_counit(unit_system(point())).component(0), (QMatrix{{1, 1}}));
  EXPECT_EQ(kind_of_failure([&] { d.sum_counit(a); }), ErrorKind::BaseMismatch);
}

TEST(Adjunction, TriangleIdentities) {
  for (const auto& inst : axiom_corpus(90, 107)) {
    auto r = triangle_identities(inst.f, inst.a, inst.b);
    EXPECT_TRUE(r.sum_left) << inst.label;
    EXPECT_TRUE(r.sum_right) << inst.label;
    EXPECT_TRUE(r.product_left) << inst.label;
    EXPECT_TRUE(r.product_right) << inst.label;
  }
}

TEST(Adjunction, UnitsAndCountsAreNatural) {
  Rng rng(109);
  for (const auto& [name, f] : functor_catalogue()) {
    auto a = random_system(f.domain(), rng, 6), a2 = random_system(f.domain(), rng, 6);
    auto b = random_system(f.codomain(), rng, 6), b2 = random_system(f.codomain(), rng, 6);
    auto h = random_natural_map(a, a2, rng);
    auto k = random_natural_map(b, b2, rng);
    AdjunctionMaps adj(f);
    EXPECT_EQ(compose(k, adj.sum_counit(b)), compose(adj.sum_counit(b2), sum_map(f, pullback_map(f, k)))) << name;
    EXPECT_EQ(compose(pullback_map(f, sum_map(f, h)), adj.sum_unit(a)), compose(adj.sum_unit(a2), h)) << name;
    EXPECT_EQ(compose(product_map(f, pullback_map(f, k)), adj.product_unit(b)), compose(adj.product_unit(b2), k))
        << name;
    EXPECT_EQ(compose(h, adj.product_counit(a)), compose(adj.product_counit(a2), pullback_map(f, product_map(f, h))))
        << name;
  }
}

TEST(Functoriality, CompositionIsosAreInvertible) {
  Rng rng(113);
  auto cat = functor_catalogue();
  std::size_t pairs = 0;
  for (const auto& [n1, f] : cat)
    for (const auto& [n2, g] : cat) {
      if (!(f.codomain() == g.domain())) continue;
      if (f.domain().object_count() > 6 || g.codomain().object_count() > 6) continue;
      auto a = random_system(f.domain(), rng, 6);
      auto s = sum_composition_iso(g, f, a);
      auto p = product_composition_iso(g, f, a);
      EXPECT_TRUE(is_equivalence(s).has_value()) << n2 << " after " << n1;
      EXPECT_TRUE(is_equivalence(p).has_value()) << n2 << " after " << n1;
      EXPECT_TRUE(s.is_natural() && p.is_natural()) << n2 << " after " << n1;
      ++pairs;
    }
  EXPECT_GT(pairs, 15u);
  // composing with identities
  Rng r2(5);
  auto s3 = s3_on_three();
  auto a = random_system(s3, r2, 6);
  auto t = terminal_functor(s3);
  auto with_id = sum_composition_iso(t, identity_functor(s3), a);
  for (const auto& c : with_id.components()) EXPECT_TRUE(c.is_identity());
}

TEST(Frobenius, Examples) {
  Rng rng(8);
  auto s3 = s3_on_three();
  auto a = random_system(s3, rng, 9);
  auto t = terminal_functor(s3);
  auto unit_case = frobenius_iso(t, a, unit_system(point()));
  EXPECT_EQ(unit_case.source().dim(0), dependent_sum(t, a).system().dim(0));

  auto reg = frobenius_iso(terminal_functor(bz2()), regular_z2(), unit_system(point()));
  EXPECT_EQ(reg.source().dim(0), 1u);
  EXPECT_EQ(reg.target().dim(0), 1u);
  EXPECT_TRUE(is_equivalence(reg).has_value());

  LocalSystem three(point(), {3}, {QMatrix::identity(3)});
  auto d = frobenius_iso(terminal_functor(discrete(2)), unit_system(discrete(2)), three);
  EXPECT_EQ(d.source().dim(0), 6u);
  EXPECT_EQ(d.target().dim(0), 6u);
  EXPECT_EQ(rank(d.component(0)), 6u);
}

TEST(Frobenius, NaturalInBothArguments) {
  Rng rng(127);
  for (const auto& [name, f] : functor_catalogue()) {
    auto a = random_system(f.domain(), rng, 4), a2 = random_system(f.domain(), rng, 4);
    auto b = random_system(f.codomain(), rng, 3), b2 = random_system(f.codomain(), rng, 3);
    auto h = random_natural_map(a, a2, rng);
    auto k = random_natural_map(b, b2, rng);
    auto in_a = compose(frobenius_iso(f, a2, b), sum_map(f, tensor_map(identity_map(pullback(f, b)), h)));
    auto in_a2 = compose(tensor_map(identity_map(b), sum_map(f, h)), frobenius_iso(f, a, b));
    EXPECT_EQ(in_a, in_a2) << name;
    auto in_b = compose(frobenius_iso(f, a, b2), sum_map(f, tensor_map(pullback_map(f, k), identity_map(a))));
    auto in_b2 = compose(tensor_map(k, identity_map(dependent_sum(f, a).system())), frobenius_iso(f, a, b));
    EXPECT_EQ(in_b, in_b2) << name;
  }
}

TEST(DeMorgan, Examples) {
  Rng rng(9);
  auto s3 = s3_on_three();
  auto a = random_system(s3, rng, 9);
  auto id = de_morgan_iso(identity_functor(s3), a);
  EXPECT_TRUE(is_equivalence(id).has_value());
  auto t = terminal_functor(bz2());
  auto sign = de_morgan_iso(t, sign_system());
  EXPECT_EQ(sign.source().dim(0), 0u);
  EXPECT_EQ(sign.target().dim(0), 0u);
  auto reg = de_morgan_iso(t, regular_z2());
  ASSERT_EQ(reg.component(0).rows(), 1u);
  EXPECT_NE(reg.component(0)(0, 0), 0);
  EXPECT_EQ(kind_of_failure([&] { de_morgan_iso(t, a); }), ErrorKind::BaseMismatch);
}

TEST(DeMorgan, Natural) {
  Rng rng(131);
  for (const auto& [name, f] : functor_catalogue()) {
    auto a = random_system(f.domain(), rng, 6), a2 = random_system(f.domain(), rng, 6);
    auto h = random_natural_map(a, a2, rng);
    auto lhs = compose(de_morgan_iso(f, a), product_map(f, dual_map(h)));
    auto rhs = compose(dual_map(sum_map(f, h)), de_morgan_iso(f, a2));
    EXPECT_EQ(lhs, rhs) << name;
  }
}

TEST(BeckChevalley, Examples) {
  auto pt = point();
  auto idp = identity_functor(pt);
  Square trivial{idp, idp, idp, idp, NaturalIso(idp, idp, {0})};
  auto one = unit_system(pt);
  auto same = beck_chevalley(trivial, one);
  for (const auto& c : same.map.components()) EXPECT_TRUE(c.is_identity());

  auto incl = object_inclusion(bz2(), 0);
  auto c = iso_comma(incl, incl);
  auto bc = beck_chevalley(Square::from_iso_comma(c, incl, incl), one);
  EXPECT_TRUE(bc.is_equivalence);
  EXPECT_EQ(bc.map.source().dim(0), 2u);  // sum over discrete(2)
  EXPECT_EQ(bc.map.target().dim(0), 2u);  // the regular representation at the base point

  // the point in place of discrete(2): commutes strictly but is not a pullback
  Square fake{idp, idp, incl, incl, NaturalIso(incl, incl, {0})};
  auto bad = beck_chevalley(fake, one);
  EXPECT_FALSE(bad.is_equivalence);
  EXPECT_EQ(rank(bad.map.component(0)), 1u);

  Square broken{idp, idp, incl, incl, NaturalIso(incl, incl, {7})};
  EXPECT_EQ(kind_of_failure([&] { beck_chevalley(broken, one); }), ErrorKind::IncoherentSquare);
}

TEST(BeckChevalley, IsoCommaSquaresAreEquivalences) {
  Rng rng(137);
  auto cat = functor_catalogue();
  std::size_t squares = 0;
  for (std::size_t i = 0; i < cat.size(); ++i)
    for (std::size_t j = 0; j < cat.size(); ++j) {
      const auto& k = cat[i].second;
      const auto& g = cat[j].second;
      if (!(k.codomain() == g.codomain())) continue;
      if (k.domain().object_count() * g.domain().object_count() > 12) continue;
      auto c = iso_comma(k, g);
      if (c.apex.object_count() > 12) continue;
      auto a = random_system(k.domain(), rng, 6);
      auto bc = beck_chevalley(Square::from_iso_comma(c, k, g), a);
      EXPECT_TRUE(bc.is_equivalence) << cat[i].first << " / " << cat[j].first;
      EXPECT_TRUE(bc.map.is_natural());
      ++squares;
    }
  EXPECT_GT(squares, 40u);
}
