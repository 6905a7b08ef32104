#include <gtest/gtest.h>

#include <map>
#include <set>

#include "hecke/coset_store.hpp"
#include "hecke/error.hpp"
#include "perm_oracle.hpp"
#include "test_support.hpp"

using namespace hecke;
using hecke::testing::Rng;
using hecke::testing::shared_pair;

namespace {

Rational q(const char* text) {
  Rational out;
  try_parse_rational(text, out);
  return out;
}

GroupElement g2() { return GroupElement::matrix(2, 0, 0, q("1/2"), true); }

}  // namespace

TEST(CosetEngine, InternIdentityAndHGiveSameId) {
  auto pair = shared_pair("psl2z1p:2");
  CosetStore store(pair, Caps{});
  const auto e = store.intern_right_coset(pair->identity());
  EXPECT_EQ(e, CosetStore::base_coset());
  for (const auto& h : pair->h_generators) EXPECT_EQ(store.intern_right_coset(h), e);
  const auto a = store.intern_right_coset(g2());
  const auto t = pair->g_generators[1];
  EXPECT_EQ(store.intern_right_coset(mul(t, g2())), a);
  EXPECT_NE(a, e);
}

TEST(CosetEngine, InternIsIdempotentOnZ) {
  auto pair = shared_pair("z:1");
  CosetStore store(pair, Caps{});
  const auto before = store.coset_count();
  const auto a = store.intern_right_coset(GroupElement::lattice({5}));
  const auto size = store.coset_count();
  EXPECT_EQ(size, before + 1);
  EXPECT_EQ(store.intern_right_coset(GroupElement::lattice({5})), a);
  EXPECT_EQ(store.coset_count(), size);
}

TEST(CosetEngine, SealedStoreRejectsInterning) {
  auto store = enumerate_ball(shared_pair("z:1"), 2, Caps{});
  EXPECT_TRUE(store.sealed());
  EXPECT_THROW(store.intern_right_coset(GroupElement::lattice({9})), StoreSealed);
}

TEST(CosetEngine, ZBallOfRadiusFive) {
  const auto store = enumerate_ball(shared_pair("z:1"), 5, Caps{});
  ASSERT_EQ(store.coset_count(), 11u);
  std::set<std::int64_t> values;
  for (std::uint32_t i = 0; i < store.coset_count(); ++i) {
    const auto n = store.rep(CosetId{i}).as_zvec().coords[0];
    values.insert(n);
    EXPECT_EQ(store.coset(CosetId{i}).depth, static_cast<std::uint32_t>(std::abs(n)));
  }
  EXPECT_EQ(values.size(), 11u);
  EXPECT_EQ(*values.begin(), -5);
  EXPECT_EQ(*values.rbegin(), 5);
  EXPECT_EQ(store.radius_complete(), 5u);
}

TEST(CosetEngine, S3HasThreeRightCosets) {
  for (std::uint32_t r : {2u, 3u, 6u}) {
    const auto store = enumerate_ball(shared_pair("s3-h12"), r, Caps{});
    EXPECT_EQ(store.coset_count(), 3u);
    EXPECT_EQ(store.class_count(), 2u);
  }
}

TEST(CosetEngine, PslBallRadiusOneContainsGeneratorCosets) {
  const auto store = enumerate_ball(shared_pair("psl2z1p:2"), 1, Caps{});
  EXPECT_TRUE(store.find(g2()).has_value());
  EXPECT_TRUE(store.find(inv(g2())).has_value());
  // S and T fix He; g2 and g2^-1 move it to two distinct neighbours.
  EXPECT_EQ(store.schreier_ball(1).size(), 3u);
}

TEST(CosetEngine, RightOrbitExamples) {
  auto s3 = shared_pair("s3-h12");
  auto store = enumerate_ball(s3, 3, Caps{});
  const auto d = store.find_class(GroupElement::perm({2, 1, 0}));
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(store.double_coset(*d).R, 2u);
  EXPECT_EQ(store.double_coset(CosetStore::identity_class()).R, 1u);
  EXPECT_EQ(store.double_coset(CosetStore::identity_class()).members.size(), 1u);

  const auto bc = make_pair("bcp:2");
  const auto orbit = right_orbit(bc, GroupElement::affine(0, 2), 100);
  ASSERT_EQ(orbit.size(), 2u);
  EXPECT_TRUE(in_H(bc, mul(orbit[1], inv(GroupElement::affine(1, 2)))));
}

TEST(CosetEngine, LeftCountsAndModular) {
  const auto bc = make_pair("bcp:2");
  EXPECT_EQ(left_L_count(bc, bc.identity(), 100), 1u);
  EXPECT_EQ(left_L_count(bc, GroupElement::affine(0, 2), 100), 1u);
  EXPECT_EQ(relative_modular(bc, GroupElement::affine(0, 2), 100), q("1/2"));
  EXPECT_EQ(relative_modular(bc, GroupElement::affine(0, q("1/2")), 100), 2);
  EXPECT_EQ(relative_modular(bc, GroupElement::affine(5, 1), 100), 1);

  const auto s3 = make_pair("s3-h12");
  EXPECT_EQ(left_L_count(s3, GroupElement::perm({2, 1, 0}), 100), 2u);

  const auto psl = make_pair("psl2z1p:2");
  EXPECT_EQ(relative_modular(psl, g2(), 1000), 1);
  // g2^-1 = S g2 S^-1, so the class of g2 is symmetric.
  const auto s = psl.g_generators[0];
  EXPECT_EQ(mul(mul(s, g2()), inv(s)), inv(g2()));
}

TEST(CosetEngine, UnimodularityVerdicts) {
  for (unsigned p : {2u, 3u, 5u}) {
    const auto pair = make_pair("bcp:" + std::to_string(p));
    const auto report = unimodularity_check(pair, 1000);
    EXPECT_FALSE(report.verdict);
    ASSERT_EQ(report.witnesses.size(), 1u);
    EXPECT_EQ(report.witnesses[0].first, GroupElement::affine(0, p));
    EXPECT_EQ(report.witnesses[0].second, Rational(1, p));
  }
  const auto bc = unimodularity_check(make_pair("bc"), 1000);
  EXPECT_FALSE(bc.verdict);
  EXPECT_TRUE(bc.decisive);
  for (const char* label : {"z:1", "z:2", "dinf", "psl2z1p:2", "sl2z1p:2", "s3-h12"}) {
    const auto r = unimodularity_check(make_pair(label), 10000);
    EXPECT_TRUE(r.verdict) << label;
    EXPECT_TRUE(r.witnesses.empty()) << label;
  }
}

TEST(CosetEngine, InverseClasses) {
  auto store = enumerate_ball(shared_pair("z:1"), 4, Caps{});
  EXPECT_EQ(store.invert_double_coset(CosetStore::identity_class()), CosetStore::identity_class());
  const auto d = *store.find_class(GroupElement::lattice({3}));
  const auto di = store.invert_double_coset(d);
  EXPECT_EQ(store.double_coset(di).rep, GroupElement::lattice({-3}));
  EXPECT_EQ(store.invert_double_coset(di), d);

  auto s3 = enumerate_ball(shared_pair("s3-h12"), 3, Caps{});
  const auto c = *s3.find_class(GroupElement::perm({2, 1, 0}));
  EXPECT_EQ(s3.invert_double_coset(c), c);
}

TEST(CosetEngine, VerifyHecke) {
  const auto z = verify_hecke(shared_pair("z:1"), 10, Caps{});
  EXPECT_EQ(z.verdict, HeckeReport::Verdict::Hecke);
  EXPECT_EQ(z.max_L, 1u);
  EXPECT_EQ(z.max_R, 1u);
  const auto d = verify_hecke(shared_pair("dinf"), 8, Caps{});
  EXPECT_EQ(d.verdict, HeckeReport::Verdict::Hecke);
  EXPECT_LE(d.max_L, 2u);
  EXPECT_LE(d.max_R, 2u);
  const auto capped = verify_hecke(shared_pair("psl2z1p:2"), 2, Caps{2'000'000, 3});
  EXPECT_EQ(capped.verdict, HeckeReport::Verdict::Inconclusive);
  const auto bc = verify_hecke(shared_pair("bc"), 2, Caps{});
  EXPECT_EQ(bc.verdict, HeckeReport::Verdict::Inconclusive);
}

TEST(CosetEngine, FullBcRefusesBallEnumeration) {
  EXPECT_THROW(enumerate_ball(shared_pair("bc"), 1, Caps{}), NotFinitelyGenerated);
}

TEST(CosetEngine, CosetCapLeavesStoreUnchanged) {
  EXPECT_THROW(enumerate_ball(shared_pair("z:2"), 10, Caps{50, 100}), CapExceeded);
  auto store = enumerate_ball(shared_pair("psl2z1p:2"), 1, Caps{});
  const auto cosets = store.coset_count();
  const auto classes = store.class_count();
  store.set_caps(Caps{cosets + 2, 100'000});
  const auto far = mul(mul(g2(), g2()), g2());
  EXPECT_THROW(store.class_of(far), CapExceeded);
  EXPECT_EQ(store.coset_count(), cosets);
  EXPECT_EQ(store.class_count(), classes);
  EXPECT_FALSE(store.find(far).has_value());
}

TEST(CosetEngine, PslTreeClassSizes) {
  auto store = enumerate_ball(shared_pair("psl2z1p:2"), 3, Caps{});
  const auto d1 = store.class_of(g2());
  const auto d2 = store.class_of(mul(g2(), g2()));
  EXPECT_EQ(store.double_coset(d1).R, 6u);
  EXPECT_EQ(store.double_coset(d2).R, 24u);
  for (auto d : {d1, d2}) {
    const auto& rec = store.double_coset(d);
    EXPECT_EQ(rec.delta, 1);
    EXPECT_EQ(rec.R, store.double_coset(store.invert_double_coset(d)).L);
  }
}

TEST(CosetEngine, FiniteOracleAgreement) {
  using hecke::testing::P;
  struct Case {
    std::string label;
  };
  for (const char* label : {"s3-h12", "s4-h12", "s4-h12-34"}) {
    auto pair = shared_pair(label);
    std::vector<P> gg, hg;
    for (const auto& g : pair->g_generators) gg.push_back(g.as_perm().images);
    for (const auto& h : pair->h_generators) hg.push_back(h.as_perm().images);
    const auto oracle = hecke::testing::perm_oracle(gg, hg);
    const auto store = enumerate_ball(pair, 10, Caps{});
    ASSERT_EQ(store.class_count(), oracle.classes.size()) << label;
    ASSERT_EQ(store.coset_count(), oracle.G.size() / oracle.H.size()) << label;
    for (std::uint32_t i = 0; i < store.class_count(); ++i) {
      const auto& rec = store.double_coset(DoubleCosetId{i});
      const auto k = oracle.class_of(rec.rep.as_perm().images);
      ASSERT_LT(k, oracle.classes.size());
      EXPECT_EQ(rec.R, oracle.classes[k].right_cosets.size()) << label;
      EXPECT_EQ(rec.L, oracle.classes[k].left_cosets.size()) << label;
      for (auto m : rec.members) EXPECT_EQ(oracle.class_of(store.rep(m).as_perm().images), k);
    }
  }
}

TEST(CosetEngineProperty, StoreInvariants) {
  for (const auto& label : hecke::testing::fg_labels()) {
    const std::uint32_t r = label.rfind("psl", 0) == 0 || label.rfind("sl", 0) == 0 ? 3 : 6;
    auto pair = shared_pair(label);
    auto store = enumerate_ball(pair, r, Caps{});
    // Interning soundness.
    if (store.coset_count() <= 2000) {
      for (std::uint32_t i = 0; i < store.coset_count(); ++i)
        for (std::uint32_t j = i + 1; j < store.coset_count(); ++j)
          EXPECT_FALSE(in_H(*pair, mul(store.rep(CosetId{i}), inv(store.rep(CosetId{j}))))) << label;
    }
    // Partition and R(d) = L(inv d).
    std::vector<int> owner(store.coset_count(), 0);
    for (std::uint32_t d = 0; d < store.class_count(); ++d) {
      const auto& rec = store.double_coset(DoubleCosetId{d});
      EXPECT_EQ(rec.members.size(), rec.R);
      for (auto m : rec.members) {
        ++owner[m.value];
        EXPECT_EQ(store.coset(m).dc, DoubleCosetId{d});
      }
      const auto& irec = store.double_coset(*rec.inverse);
      EXPECT_EQ(rec.R, irec.L) << label;
      EXPECT_EQ(rec.delta * irec.delta, 1) << label;
    }
    for (auto o : owner) EXPECT_EQ(o, 1) << label;
    // Depth is a BFS distance along every stored edge.
    for (std::uint32_t i = 0; i < store.coset_count(); ++i) {
      const auto& nb = store.neighbors(CosetId{i});
      for (auto n : nb) {
        const auto a = *store.coset(CosetId{i}).depth;
        const auto b = store.coset(n).depth;
        ASSERT_TRUE(b.has_value());
        EXPECT_LE(a > *b ? a - *b : *b - a, 1u) << label;
      }
    }
  }
}

TEST(CosetEngineProperty, ModularIsMultiplicative) {
  Rng rng(41);
  for (const char* label : {"bcp:2", "bcp:3", "psl2z1p:2", "dinf", "s4-h12"}) {
    const auto pair = make_pair(label);
    for (int i = 0; i < 25; ++i) {
      const auto x = hecke::testing::random_g(pair, 4, rng);
      const auto y = hecke::testing::random_g(pair, 4, rng);
      EXPECT_EQ(relative_modular(pair, mul(x, y), 100000),
                relative_modular(pair, x, 100000) * relative_modular(pair, y, 100000))
          << label;
    }
  }
}

TEST(CosetEngine, SnapshotIsDeterministic) {
  const auto a = enumerate_ball(shared_pair("dinf"), 3, Caps{}).snapshot().dump();
  const auto b = enumerate_ball(shared_pair("dinf"), 3, Caps{}).snapshot().dump();
  EXPECT_EQ(a, b);
  const auto j = nlohmann::json::parse(a);
  EXPECT_EQ(j["cosets"][0]["wl"], 0);
  EXPECT_EQ(j["double_cosets"][0]["R"], 1);
}
