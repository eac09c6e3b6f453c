#include <gtest/gtest.h>

#include <set>

#include "support/generators.hpp"

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

LocalSystem constant(std::size_t n) { return LocalSystem(point(), {n}, {QMatrix::identity(n)}); }

PrequantumKernel trivial_span(const FiniteGroupoid& z) {
  auto t = terminal_functor(z);
  auto one = unit_system(point());
  return {{t, t}, one, one, identity_map(unit_system(z))};
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

TEST(Norm, Examples) {
  Rng rng(2);
  auto s3 = s3_on_three();
  auto a = random_system(s3, rng, 9);
  auto id = norm_map(identity_functor(s3), a);
  for (const auto& c : id.components()) EXPECT_TRUE(c.is_identity());

  auto two = norm_map(terminal_functor(bz2()), unit_system(point()));
  EXPECT_EQ(two.component(0), QMatrix::scalar(2));

  for (std::size_t n : {1u, 2u, 4u}) {
    auto d = norm_map(terminal_functor(discrete(n)), unit_system(point()));
    EXPECT_TRUE(d.component(0).is_identity());
    EXPECT_EQ(d.component(0).rows(), n);
  }
  EXPECT_EQ(kind_of_failure([&] { norm_map(terminal_functor(bz2()), a); }), ErrorKind::BaseMismatch);
}

TEST(Norm, InvertibleAndNaturalOnCorpus) {
  Rng rng(211);
  for (const auto& inst : axiom_corpus(60, 213)) {
    auto nm = norm_map(inst.f, inst.b);
    EXPECT_TRUE(nm.is_natural()) << inst.label;
    EXPECT_TRUE(is_equivalence(nm).has_value()) << inst.label;
    auto b2 = random_system(inst.f.codomain(), rng, 6);
    auto h = random_natural_map(inst.b, b2, rng);
    auto fh = pullback_map(inst.f, h);
    EXPECT_EQ(compose(norm_map(inst.f, b2), sum_map(inst.f, fh)), compose(product_map(inst.f, fh), nm)) << inst.label;
  }
}

TEST(FundamentalClass, Examples) {
  Rng rng(3);
  auto s3 = s3_on_three();
  auto a = random_system(s3, rng, 9);
  auto id = fundamental_class_map(canonical_fundamental_class(identity_functor(s3)), a);
  for (const auto& c : id.components()) EXPECT_TRUE(c.is_identity());

  auto half = fundamental_class_map(canonical_fundamental_class(terminal_functor(bz2())), unit_system(point()));
  EXPECT_EQ(half.component(0), QMatrix::scalar(Rational(1, 2)));

  auto diag2 = fundamental_class_map(canonical_fundamental_class(terminal_functor(discrete(2))), unit_system(point()));
  EXPECT_EQ(diag2.component(0), (QMatrix{{1}, {1}}));
  auto diag3 = fundamental_class_map(canonical_fundamental_class(terminal_functor(discrete(3))), unit_system(point()));
  EXPECT_EQ(diag3.component(0), (QMatrix{{1}, {1}, {1}}));

  // along pt -> BZ2 with coefficients in the sign rep: a map into the regular rep
  auto incl = object_inclusion(bz2(), 0);
  auto into_regular = fundamental_class_map(canonical_fundamental_class(incl), sign_system());
  EXPECT_EQ(into_regular.target().dim(0), 2u);
  EXPECT_TRUE(into_regular.is_natural());

  // sum over BZ2 -> pt of the sign system is zero on both sides
  auto t = terminal_functor(bz2());
  EXPECT_EQ(dependent_sum(t, sign_system()).system().dim(0), 0u);
}

TEST(FundamentalClass, NaturalInCoefficients) {
  Rng rng(223);
  for (const auto& [name, f] : functor_catalogue()) {
    auto fc = canonical_fundamental_class(f);
    EXPECT_TRUE(fc.is_untwisted());
    auto a = random_system(f.codomain(), rng, 6), a2 = random_system(f.codomain(), rng, 6);
    auto h = random_natural_map(a, a2, rng);
    auto lhs = compose(fundamental_class_map(fc, a2), tensor_map(h, identity_map(fc.twist())));
    auto rhs = compose(sum_map(f, pullback_map(f, h)), fundamental_class_map(fc, a));
    EXPECT_EQ(lhs, rhs) << name;
  }
}

TEST(FundamentalClass, ClassNormAgreesWithNormMap) {
  for (const auto& inst : axiom_corpus(45, 227)) {
    auto fc = canonical_fundamental_class(inst.f);
    EXPECT_EQ(class_norm(fc, inst.b).components(), norm_map(inst.f, inst.b).components()) << inst.label;
  }
}

TEST(FundamentalClass, Twists) {
  auto incl = object_inclusion(bz2(), 0);
  auto sign = sign_system();
  auto nm = norm_map(incl, unit_system(bz2()));
  FundamentalClass twisted(incl, sign, nm);
  EXPECT_FALSE(twisted.is_untwisted());
  auto cls = fundamental_class_map(twisted, unit_system(bz2()));
  EXPECT_EQ(cls.source(), tensor(unit_system(bz2()), sign));
  EXPECT_TRUE(cls.is_natural());
  auto ip = standard_inner_product(unit_system(bz2()));
  EXPECT_EQ(kind_of_failure([&] { induced_inner_product(twisted, ip); }), ErrorKind::TwistedClassUnsupported);

  auto wide = LocalSystem(bz2(), {2}, {QMatrix::identity(2), QMatrix::identity(2)});
  EXPECT_EQ(kind_of_failure([&] { FundamentalClass(incl, wide, nm); }), ErrorKind::InvalidTwist);
  auto singular = scale(Rational(0), nm);
  EXPECT_EQ(kind_of_failure([&] { FundamentalClass(incl, unit_system(bz2()), singular); }), ErrorKind::InvalidTwist);
}

TEST(Measure, IsDualOfGlobalClass) {
  auto m = measure(canonical_fundamental_class(terminal_functor(bz2())), unit_system(point()));
  EXPECT_EQ(m, QMatrix::scalar(Rational(1, 2)));
  auto d = measure(canonical_fundamental_class(terminal_functor(discrete(3))), unit_system(point()));
  EXPECT_EQ(d, (QMatrix{{1, 1, 1}}));
}

TEST(SecondaryTransform, Examples) {
  auto pt = point();
  auto idp = identity_functor(pt);
  auto one = unit_system(pt);
  PrequantumKernel scalar{{idp, idp}, one, one, SystemMap(one, one, {QMatrix::scalar(Rational(-3, 5))})};
  EXPECT_EQ(secondary_transform(scalar, canonical_fundamental_class(idp)), QMatrix::scalar(Rational(-3, 5)));

  auto k = trivial_span(bz2());
  EXPECT_EQ(secondary_transform(k, canonical_fundamental_class(k.corr.right)), QMatrix::scalar(Rational(1, 2)));

  // trivial spans compute groupoid cardinality
  for (const auto& [name, f] : functor_catalogue()) {
    if (f.domain().object_count() > 12) continue;
    auto span = trivial_span(f.domain());
    EXPECT_EQ(secondary_transform(span, canonical_fundamental_class(span.corr.right))(0, 0),
              groupoid_cardinality(f.domain()))
        << name;
  }
  EXPECT_EQ(kind_of_failure([&] { secondary_transform(k, canonical_fundamental_class(idp)); }), ErrorKind::Mismatch);
}

TEST(SecondaryTransform, IdentityKernelIsIdentity) {
  Rng rng(229);
  for (const auto& [name, f] : functor_catalogue()) {
    auto a = random_system(f.domain(), rng, 8);
    auto k = identity_kernel(a);
    auto t = secondary_transform(k, canonical_fundamental_class(k.corr.right));
    EXPECT_TRUE(t.is_identity()) << name;
    EXPECT_EQ(secondary_transform_undual(k, canonical_fundamental_class(k.corr.right)), t.transpose());
  }
}

TEST(Composition, Examples) {
  Rng rng(233);
  auto s3 = s3_on_three();
  auto a = random_system(s3, rng, 6);
  auto t = terminal_functor(s3);
  auto c = constant(2);
  // s3 <- s3 -> pt with an arbitrary natural xi
  auto pa = pullback(t, c);
  PrequantumKernel k{{identity_functor(s3), t}, a, c, random_natural_map(pa, a, rng)};
  auto with_id = compose_correspondences(identity_kernel(c), k);
  EXPECT_TRUE(is_equivalence(with_id.corr.left));
  auto fc = canonical_fundamental_class(k.corr.right);
  auto fc2 = canonical_fundamental_class(with_id.corr.right);
  EXPECT_EQ(secondary_transform(with_id, fc2), secondary_transform(k, fc));
  auto id_first = compose_correspondences(k, identity_kernel(a));
  EXPECT_EQ(secondary_transform(id_first, canonical_fundamental_class(id_first.corr.right)),
            secondary_transform(k, fc));

  EXPECT_EQ(kind_of_failure([&] { compose_correspondences(k, identity_kernel(c)); }), ErrorKind::InterfaceMismatch);
}

TEST(Composition, DiagonalSpansComposeToLoopGroupoid) {
  auto z2 = FiniteGroup::cyclic(2);
  auto bg = bz2();
  auto bg2 = product(bg, bg);
  auto diag = diagonal(bg);
  auto t = terminal_functor(bg);
  auto one = unit_system(point()), one2 = unit_system(bg2.groupoid), onez = unit_system(bg);
  PrequantumKernel create{{t, diag}, one, one2, identity_map(onez)};
  PrequantumKernel close{{diag, t}, one2, one, identity_map(onez)};
  auto loop = compose_correspondences(close, create);
  EXPECT_EQ(groupoid_cardinality(loop.corr.apex()), 1);
  auto labels = loop.corr.apex().component_labels();
  EXPECT_EQ(std::set<ObjectId>(labels.begin(), labels.end()).size(), 2u);  // one per conjugacy class
  auto r = anomaly_defect(close, create);
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.composite, QMatrix::scalar(1));
  EXPECT_TRUE(r.difference().is_zero());
  (void)z2;
}

TEST(Anomaly, IdentityAndRandomSpans) {
  Rng rng(239);
  auto s3 = s3_on_three();
  auto a = random_system(s3, rng, 6);
  EXPECT_TRUE(anomaly_defect(identity_kernel(a), identity_kernel(a)).equal);

  auto pairs = span_pair_corpus(60, 241);
  ASSERT_EQ(pairs.size(), 60u);
  for (const auto& p : pairs) EXPECT_TRUE(anomaly_defect(p.k2, p.k1).equal) << p.label;
}

TEST(Anomaly, NonCanonicalClassesCanBeAnomalous) {
  // rescaling one class by 2 rescales one factor but not the composite
  auto k = trivial_span(bz2());
  auto t = k.corr.right;
  auto canonical = canonical_fundamental_class(t);
  FundamentalClass doubled(t, canonical.twist(), scale(Rational(2), canonical.comparison()));
  auto composite = compose_correspondences(k, k);
  auto c21 = canonical_fundamental_class(composite.corr.right);
  auto r = anomaly_defect(k, k, doubled, canonical, c21);
  EXPECT_FALSE(r.equal);
  EXPECT_EQ(r.product, QMatrix::scalar(Rational(1, 8)));
  EXPECT_EQ(r.composite, QMatrix::scalar(Rational(1, 4)));
}

TEST(BoundaryPasting, AgreesWithTransform) {
  Rng rng(241);
  auto pt_kernel = identity_kernel(unit_system(point()));
  EXPECT_TRUE(boundary_pasting_check(pt_kernel, canonical_fundamental_class(pt_kernel.corr.right)).equal);
  auto k = trivial_span(bz2());
  auto r = boundary_pasting_check(k, canonical_fundamental_class(k.corr.right));
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.pasting, QMatrix::scalar(Rational(1, 2)));

  auto cat = functor_catalogue();
  for (std::size_t i = 0; i < cat.size(); ++i) {
    const auto& left = cat[i].second;
    const auto& right = cat[(i * 7 + 3) % cat.size()].second;
    if (!(left.domain() == right.domain())) continue;
    auto a1 = random_system(left.codomain(), rng, 4);
    auto a2 = random_system(right.codomain(), rng, 4);
    PrequantumKernel kk{{left, right}, a1, a2, random_natural_map(pullback(right, a2), pullback(left, a1), rng)};
    EXPECT_TRUE(boundary_pasting_check(kk, canonical_fundamental_class(right)).equal) << cat[i].first;
  }
}

TEST(PolynomialFunctor, Examples) {
  Rng rng(251);
  auto s3 = s3_on_three();
  auto a = random_system(s3, rng, 9);
  auto id = identity_functor(s3);
  EXPECT_EQ(polynomial_functor(id, id, id, a), a);

  // discrete sets: W = 5 points over V = 3 points over X2 = 2 points, f1 into X1 = 3 points
  auto w = discrete(5), v = discrete(3), x1 = discrete(3), x2 = discrete(2);
  std::vector<ObjectId> f1m{0, 2, 2, 1, 0}, gm{0, 0, 1, 2, 2}, f2m{1, 0, 1};
  GroupoidFunctor f1(w, x1, f1m, f1m), g(w, v, gm, gm), f2(v, x2, f2m, f2m);
  LocalSystem coeff(x1, {2, 0, 3}, {QMatrix::identity(2), QMatrix(0, 0), QMatrix::identity(3)});
  auto p = polynomial_functor(f1, g, f2, coeff);
  std::vector<std::size_t> expected(2, 0);
  for (ObjectId k = 0; k < 5; ++k) expected[f2m[gm[k]]] += coeff.dim(f1m[k]);
  EXPECT_EQ(p.dims(), expected);

  // linear case: g = id, unit coefficients, dims = incidence counts
  auto lin = polynomial_functor(f1, identity_functor(w), GroupoidFunctor(w, x2, {0, 1, 1, 0, 1}, {0, 1, 1, 0, 1}),
                                unit_system(x1));
  EXPECT_EQ(lin.dims(), (std::vector<std::size_t>{2, 3}));
}

TEST(KernelFactorization, Examples) {
  auto x = discrete(2), y = discrete(3);
  auto prod = product(x, y);
  Correspondence direct{prod.first, prod.second};
  auto kd = kernel_factorization(direct, unit_system(x));
  EXPECT_EQ(kd.kernel, unit_system(prod.groupoid));

  // apex with 5 points over X x Y
  auto z = discrete(5);
  std::vector<ObjectId> lm{0, 0, 1, 1, 0}, rm{2, 2, 0, 1, 1};
  Correspondence c{GroupoidFunctor(z, x, lm, lm), GroupoidFunctor(z, y, rm, rm)};
  LocalSystem a(x, {1, 2}, {QMatrix::identity(1), QMatrix::identity(2)});
  auto kf = kernel_factorization(c, a);
  for (ObjectId i = 0; i < 2; ++i)
    for (ObjectId j = 0; j < 3; ++j) {
      std::size_t count = 0;
      for (ObjectId p = 0; p < 5; ++p) count += lm[p] == i && rm[p] == j;
      EXPECT_EQ(kf.kernel.dim(prod.object(i, j)), count);
    }
  EXPECT_TRUE(is_equivalence(kf.comparison).has_value());

  auto t = terminal_functor(bz2());
  auto kb = kernel_factorization({t, t}, unit_system(point()));
  EXPECT_EQ(kb.kernel.dim(0), 1u);
  EXPECT_TRUE(is_equivalence(kb.comparison).has_value());
}

TEST(KernelFactorization, InvertibleOnCatalogueSpans) {
  Rng rng(257);
  auto cat = functor_catalogue();
  for (std::size_t i = 0; i < cat.size(); ++i)
    for (std::size_t j = 0; j < cat.size(); ++j) {
      const auto& l = cat[i].second;
      const auto& r = cat[j].second;
      if (!(l.domain() == r.domain()) || l.codomain().object_count() * r.codomain().object_count() > 12) continue;
      auto a = random_system(l.codomain(), rng, 4);
      auto kf = kernel_factorization({l, r}, a);
      EXPECT_TRUE(is_equivalence(kf.comparison).has_value()) << cat[i].first << " / " << cat[j].first;
      EXPECT_TRUE(kf.comparison.is_natural());
    }
}

TEST(Transpose, Examples) {
  auto pt_a = constant(3);
  auto ip = standard_inner_product(pt_a);
  auto idt = transpose(identity_map(pt_a), ip, ip);
  EXPECT_TRUE(idt.component(0).is_identity());

  Rng rng(263);
  auto b = constant(2);
  auto ipb = standard_inner_product(b);
  SystemMap h(pt_a, b, {random_matrix(rng, 2, 3)});
  EXPECT_EQ(transpose(h, ip, ipb).component(0), h.component(0).transpose());
  EXPECT_EQ(kind_of_failure([&] { transpose(h, ipb, ip); }), ErrorKind::CarrierMismatch);

  // [f] = eps^dagger along discrete(2) -> pt with standard products
  auto t = terminal_functor(discrete(2));
  auto one = unit_system(point());
  auto fc = canonical_fundamental_class(t);
  auto induced = induced_inner_product(fc, standard_inner_product(one));
  EXPECT_TRUE(induced.pairing().component(0).is_identity());
  auto eps = AdjunctionMaps(t).sum_counit(one);
  EXPECT_EQ(eps.component(0), (QMatrix{{1, 1}}));
  EXPECT_EQ(transpose(eps, induced, standard_inner_product(one)).component(0), (QMatrix{{1}, {1}}));
  EXPECT_EQ(transpose(eps, induced, standard_inner_product(one)), fundamental_class_map(fc, one));
}

TEST(Transpose, InvolutiveAndContravariant) {
  Rng rng(269);
  for (const auto& [name, f] : functor_catalogue()) {
    const auto& x = f.domain();
    auto a = random_system(x, rng, 5), b = random_system(x, rng, 5), c = random_system(x, rng, 5);
    auto ia = averaged_inner_product(a), ib = averaged_inner_product(b), ic = averaged_inner_product(c);
    auto h = random_natural_map(a, b, rng), k = random_natural_map(b, c, rng);
    auto hd = transpose(h, ia, ib);
    EXPECT_TRUE(hd.is_natural()) << name;
    EXPECT_EQ(transpose(hd, ib, ia), h) << name;
    EXPECT_EQ(transpose(compose(k, h), ia, ic), compose(hd, transpose(k, ib, ic))) << name;
  }
}

TEST(Transpose, ClassIsDaggerOfCounit) {
  for (const auto& inst : axiom_corpus(90, 271)) {
    auto fc = canonical_fundamental_class(inst.f);
    auto ip = averaged_inner_product(inst.b);
    auto induced = induced_inner_product(fc, ip);
    EXPECT_TRUE(induced.is_symmetric()) << inst.label;
    auto eps = AdjunctionMaps(inst.f).sum_counit(inst.b);
    auto cls = fundamental_class_map(fc, inst.b);
    auto dag = transpose(eps, induced, ip);
    EXPECT_EQ(dag.components(), cls.components()) << inst.label;
  }
}

TEST(GlobalInnerProduct, Examples) {
  auto a = constant(2);
  auto ip = standard_inner_product(a);
  auto at_pt = global_inner_product(ip, canonical_fundamental_class(terminal_functor(point())));
  EXPECT_EQ(at_pt.pairing().component(0), ip.pairing().component(0));

  LocalSystem d(discrete(2), {1, 2}, {QMatrix::identity(1), QMatrix::identity(2)});
  auto gd = global_inner_product(standard_inner_product(d), canonical_fundamental_class(terminal_functor(discrete(2))));
  EXPECT_TRUE(gd.pairing().component(0).is_identity());
  EXPECT_EQ(gd.pairing().component(0).rows(), 3u);

  auto gr = global_inner_product(standard_inner_product(regular_z2()), canonical_fundamental_class(terminal_functor(bz2())));
  ASSERT_EQ(gr.pairing().component(0).rows(), 1u);
  EXPECT_NE(gr.pairing().component(0)(0, 0), 0);
  EXPECT_TRUE(gr.is_symmetric());

  // a class that mixes the two components of discrete(2)
  auto t = terminal_functor(discrete(2));
  auto canonical = canonical_fundamental_class(t);
  auto src = canonical.comparison().source();
  SystemMap mix(src, src, {QMatrix{{1, 1}, {0, 1}}});
  FundamentalClass mixed(t, canonical.twist(), compose(canonical.comparison(), mix));
  EXPECT_EQ(kind_of_failure([&] { global_inner_product(standard_inner_product(d), mixed); }),
            ErrorKind::TwistedClassUnsupported);
}

TEST(Linearize, Examples) {
  auto s3 = s3_on_three();
  EXPECT_EQ(linearize(identity_functor(s3)), unit_system(s3));
  EXPECT_EQ(linearize(terminal_functor(discrete(4))).dim(0), 4u);
  EXPECT_EQ(linearize(terminal_functor(bz2())).dim(0), 1u);
  auto sum = linearize_map(terminal_functor(discrete(3)), identity_functor(point()));
  EXPECT_EQ(sum.component(0), (QMatrix{{1, 1, 1}}));
  // BZ2 -> pt over pt: coinvariants map isomorphically
  auto iso = linearize_map(terminal_functor(bz2()), identity_functor(point()));
  EXPECT_EQ(iso.component(0), QMatrix::scalar(1));
}

TEST(QuantumOperation, Examples) {
  auto one = unit_system(point());
  auto id = quantum_operation(identity_kernel(one), standard_inner_product(one));
  EXPECT_TRUE(id.equal);
  EXPECT_EQ(id.operation, QMatrix::scalar(1));

  Rng rng(277);
  auto a = constant(3);
  auto idp = identity_functor(point());
  QMatrix k = random_matrix(rng, 3, 3);
  PrequantumKernel km{{idp, idp}, a, a, SystemMap(a, a, {k})};
  auto r = quantum_operation(km, standard_inner_product(a));
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.operation, k);

  auto tz = trivial_span(bz2());
  auto half = quantum_operation(tz, standard_inner_product(one));
  EXPECT_TRUE(half.equal);
  EXPECT_EQ(half.operation, QMatrix::scalar(Rational(1, 2)));

  auto s3 = s3_on_three();
  auto t = terminal_functor(s3);
  PrequantumKernel uneven{{identity_functor(s3), t}, unit_system(s3), one, identity_map(unit_system(s3))};
  EXPECT_EQ(kind_of_failure([&] { quantum_operation(uneven, standard_inner_product(one)); }), ErrorKind::ShapeMismatch);
}
