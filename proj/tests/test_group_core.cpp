#include <gtest/gtest.h>

#include "hecke/error.hpp"
#include "hecke/hecke_pair.hpp"
#include "test_support.hpp"

using namespace hecke;
using hecke::testing::Rng;

namespace {

Rational q(const char* text) {
  Rational out;
  if (!try_parse_rational(text, out)) throw std::invalid_argument(text);
  return out;
}

// Independent 2x2 product used as oracle for the matrix and affine laws.
std::array<Rational, 4> mat_mul(const std::array<Rational, 4>& x, const std::array<Rational, 4>& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

}  // namespace

TEST(GroupCore, IdentityIsNeutralOnRandomElements) {
  Rng rng(11);
  for (const auto& label : catalog_labels()) {
    const auto pair = make_pair(label);
    for (int i = 0; i < 20; ++i) {
      const auto g = hecke::testing::random_g(pair, 6, rng);
      EXPECT_EQ(mul(pair.identity(), g), g) << label;
      EXPECT_EQ(mul(g, pair.identity()), g) << label;
    }
  }
}

TEST(GroupCore, SSquaredIsMinusIdentity) {
  const auto s = GroupElement::matrix(0, -1, 1, 0, false);
  const auto s2 = mul(s, s);
  EXPECT_EQ(s2.as_matrix(), (Matrix2Q{-1, 0, 0, -1}));
  const auto ps = GroupElement::matrix(0, -1, 1, 0, true);
  EXPECT_EQ(mul(ps, ps), GroupElement::matrix(1, 0, 0, 1, true));
}

TEST(GroupCore, AffineProductMatchesMatrixOracle) {
  const auto x = GroupElement::affine(0, 2);
  const auto y = GroupElement::affine(1, 1);
  // [[1,0],[0,2]] [[1,1],[0,1]] = [[1,1],[0,2]]
  EXPECT_EQ(mul(x, y), GroupElement::affine(1, 2));
  EXPECT_EQ(mul(y, x), GroupElement::affine(2, 2));

  Rng rng(3);
  const auto pair = make_pair("bc");
  for (int i = 0; i < 50; ++i) {
    const auto g = hecke::testing::random_g(pair, 5, rng);
    const auto h = hecke::testing::random_g(pair, 5, rng);
    const auto& a = g.as_affine();
    const auto& b = h.as_affine();
    const auto m = mat_mul({1, a.b, 0, a.a}, {1, b.b, 0, b.a});
    const auto gh = mul(g, h);
    const auto& p = gh.as_affine();
    EXPECT_EQ(m[0], 1);
    EXPECT_EQ(m[2], 0);
    EXPECT_EQ(p.b, m[1]);
    EXPECT_EQ(p.a, m[3]);
  }
}

TEST(GroupCore, MatrixProductMatchesOracle) {
  Rng rng(5);
  const auto pair = make_pair("sl2z1p:2");
  for (int i = 0; i < 50; ++i) {
    const auto g = hecke::testing::random_g(pair, 6, rng);
    const auto h = hecke::testing::random_g(pair, 6, rng);
    const auto& a = g.as_matrix();
    const auto& b = h.as_matrix();
    const auto m = mat_mul({a.a, a.b, a.c, a.d}, {b.a, b.b, b.c, b.d});
    EXPECT_EQ(mul(g, h).as_matrix(), (Matrix2Q{m[0], m[1], m[2], m[3]}));
  }
}

TEST(GroupCore, MixedKindsRejected) {
  EXPECT_THROW(mul(GroupElement::affine(0, 1), GroupElement::lattice({1})), MixedKinds);
  EXPECT_THROW(eq(GroupElement::affine(0, 1), GroupElement::lattice({1})), MixedKinds);
}

TEST(GroupCore, FactoriesEnforceInvariants) {
  EXPECT_THROW(GroupElement::matrix(1, 1, 1, 1, false), DomainError);
  EXPECT_THROW(GroupElement::affine(0, 0), DomainError);
  EXPECT_THROW(GroupElement::affine(0, -2), DomainError);
  EXPECT_THROW(GroupElement::perm({0, 0, 1}), DomainError);
  EXPECT_THROW(GroupElement::dihedral(0, 2), DomainError);
  const auto m = GroupElement::matrix(-1, 0, -2, -1, true).as_matrix();
  EXPECT_EQ(m, (Matrix2Q{1, 0, 2, 1}));
}

TEST(GroupCore, MembershipExamples) {
  const auto psl = make_pair("psl2z1p:2");
  EXPECT_TRUE(in_H(psl, GroupElement::matrix(1, 1, 0, 1, true)));
  EXPECT_FALSE(in_H(psl, GroupElement::matrix(2, 0, 0, q("1/2"), true)));
  const auto bc = make_pair("bc");
  EXPECT_FALSE(in_H(bc, GroupElement::affine(q("1/2"), 1)));
  EXPECT_TRUE(in_H(bc, GroupElement::affine(-7, 1)));
  EXPECT_FALSE(in_H(bc, GroupElement::affine(0, 2)));
  const auto z = make_pair("z:2");
  EXPECT_TRUE(in_H(z, GroupElement::lattice({0, 0})));
  EXPECT_FALSE(in_H(z, GroupElement::lattice({0, 1})));
  const auto s3 = make_pair("s3-h12");
  EXPECT_TRUE(in_H(s3, GroupElement::perm({1, 0, 2})));
  EXPECT_FALSE(in_H(s3, GroupElement::perm({2, 1, 0})));
}

TEST(GroupCore, ParseExamples) {
  const auto psl = make_pair("psl2z1p:2");
  EXPECT_EQ(parse_element(psl, "mat 0 -1 1 0"), psl.g_generators[0]);
  EXPECT_THROW(parse_element(psl, "mat 1 1/3 0 1"), DomainError);
  EXPECT_NO_THROW(parse_element(psl, "mat 1 1/4 0 1"));
  EXPECT_THROW(parse_element(psl, "mat 2 0 0 2"), DomainError);

  const auto bc = make_pair("bc");
  const auto g = parse_element(bc, "aff 3/4 2");
  EXPECT_EQ(g.as_affine(), (AffineQ{q("3/4"), 2}));
  EXPECT_EQ(render_element(g), "aff 3/4 2");
  EXPECT_THROW(parse_element(bc, "aff 1 0"), DomainError);
  EXPECT_THROW(parse_element(make_pair("bcp:2"), "aff 0 3"), DomainError);
}

TEST(GroupCore, ParseErrorsCarryPosition) {
  try {
    parse_element(GroupKind::Affine, "aff 3/x 2");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
  EXPECT_THROW(parse_element(GroupKind::Affine, "mat 1 0 0 1"), ParseError);
  EXPECT_THROW(parse_element(GroupKind::Lattice, "zvec"), ParseError);
  EXPECT_THROW(parse_element(GroupKind::Permutation, "perm 0 1 x"), ParseError);
  EXPECT_THROW(parse_element(GroupKind::Affine, "aff 1 2 3"), ParseError);
}

TEST(GroupCore, RenderParseRoundTrip) {
  Rng rng(17);
  for (const auto& label : catalog_labels()) {
    const auto pair = make_pair(label);
    for (int i = 0; i < 20; ++i) {
      const auto g = hecke::testing::random_g(pair, 6, rng);
      EXPECT_EQ(parse_element(pair, render_element(g)), g) << label << " " << render_element(g);
    }
  }
}

TEST(GroupCoreProperty, GroupAxiomsOnRandomTriples) {
  Rng rng(23);
  for (const auto& label : catalog_labels()) {
    const auto pair = make_pair(label);
    for (int i = 0; i < 40; ++i) {
      const auto x = hecke::testing::random_g(pair, 5, rng);
      const auto y = hecke::testing::random_g(pair, 5, rng);
      const auto z = hecke::testing::random_g(pair, 5, rng);
      EXPECT_EQ(mul(mul(x, y), z), mul(x, mul(y, z))) << label;
      EXPECT_EQ(mul(x, inv(x)), pair.identity()) << label;
      EXPECT_EQ(mul(inv(x), x), pair.identity()) << label;
      EXPECT_EQ(inv(inv(x)), x) << label;
    }
  }
}

TEST(GroupCoreProperty, SignCanonicalizationRespectsLaw) {
  Rng rng(29);
  const auto sl = make_pair("sl2z1p:2");
  for (int i = 0; i < 60; ++i) {
    const auto x = hecke::testing::random_g(sl, 6, rng).as_matrix();
    const auto y = hecke::testing::random_g(sl, 6, rng).as_matrix();
    const auto px = GroupElement::matrix(x.a, x.b, x.c, x.d, true);
    const auto py = GroupElement::matrix(y.a, y.b, y.c, y.d, true);
    const auto xy = mul(GroupElement::matrix(x.a, x.b, x.c, x.d, false),
                        GroupElement::matrix(y.a, y.b, y.c, y.d, false))
                        .as_matrix();
    EXPECT_EQ(mul(px, py).as_matrix(), sign_canonical(xy));
    EXPECT_EQ(sign_canonical(sign_canonical(xy)), sign_canonical(xy));
  }
}

TEST(GroupCoreProperty, MembershipIsSubgroupPredicate) {
  Rng rng(31);
  for (const auto& label : catalog_labels()) {
    const auto pair = make_pair(label);
    for (const auto& h : pair.h_generators) EXPECT_TRUE(in_H(pair, h)) << label;
    for (int i = 0; i < 30; ++i) {
      const auto a = hecke::testing::random_h(pair, 8, rng);
      const auto b = hecke::testing::random_h(pair, 8, rng);
      EXPECT_TRUE(in_H(pair, a)) << label;
      EXPECT_TRUE(in_H(pair, mul(a, b))) << label;
      EXPECT_TRUE(in_H(pair, inv(a))) << label;
    }
  }
}

TEST(GroupCoreProperty, SymmetricGeneratorsClosedUnderInverse) {
  for (const auto& label : catalog_labels()) {
    const auto pair = make_pair(label);
    const auto s = pair.symmetric_generators();
    for (const auto& g : s) {
      EXPECT_NE(g, pair.identity());
      EXPECT_NE(std::find(s.begin(), s.end(), inv(g)), s.end()) << label;
    }
  }
}

TEST(GroupCore, CatalogRejectsBadLabels) {
  EXPECT_THROW(make_pair("sl2z1p:4"), DomainError);
  EXPECT_THROW(make_pair("bcp:1"), DomainError);
  EXPECT_THROW(make_pair("nope"), DomainError);
  EXPECT_THROW(make_pair("z:0"), DomainError);
}

TEST(GroupCore, ReductionKernelIsIdempotent) {
  const auto pair = make_pair("psl2z1p:2");
  ASSERT_TRUE(pair.reduction_kernel.has_value());
  Rng rng(37);
  for (int i = 0; i < 20; ++i) {
    const auto g = hecke::testing::random_g(pair, 6, rng);
    const auto c = pair.reduction_kernel->canonicalize(g);
    EXPECT_EQ(pair.reduction_kernel->canonicalize(c), c);
  }
}
