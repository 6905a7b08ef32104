#include <gtest/gtest.h>

#include <cmath>

#include "hecke/error.hpp"
#include "hecke/hecke_algebra.hpp"
#include "perm_oracle.hpp"
#include "test_support.hpp"

using namespace hecke;
using hecke::testing::Rng;
using hecke::testing::shared_pair;

namespace {

// Central coefficient of (x^-1 + 1 + x)^(2n), by repeated polynomial product.
Rational central_trinomial(unsigned n) {
  std::vector<mpz_class> poly{1};
  for (unsigned k = 0; k < 2 * n; ++k) {
    std::vector<mpz_class> next(poly.size() + 2, 0);
    for (std::size_t i = 0; i < poly.size(); ++i)
      for (std::size_t j = 0; j < 3; ++j) next[i + j] += poly[i];
    poly = std::move(next);
  }
  return Rational(poly[poly.size() / 2]);
}

DoubleCosetId class_at(CosetStore& store, std::int64_t n) { return store.class_of(GroupElement::lattice({n})); }

HeckeElement z_three_point(CosetStore& store) {
  HeckeElement f(store);
  for (std::int64_t n : {-1, 0, 1}) f.add(class_at(store, n), 1);
  return f;
}

}  // namespace

TEST(HeckeAlgebra, IdentityIsUnit) {
  auto store = enumerate_ball(shared_pair("dinf"), 4, Caps{});
  HeckeAlgebra alg(store);
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const auto f = hecke::testing::random_element(store, 4, rng);
    EXPECT_EQ(alg.convolve(alg.identity(), f), f);
    EXPECT_EQ(alg.convolve(f, alg.identity()), f);
  }
}

TEST(HeckeAlgebra, S3Products) {
  auto store = enumerate_ball(shared_pair("s3-h12"), 3, Caps{});
  HeckeAlgebra alg(store);
  ASSERT_EQ(store.class_count(), 2u);
  const DoubleCosetId d{1};
  auto expected = alg.identity() * 2 + alg.basis(d);
  EXPECT_EQ(alg.convolve(alg.basis(d), alg.basis(d)), expected);
  EXPECT_EQ(norms(alg.basis(d)).l2_sq, 2);
  EXPECT_EQ(store.class_count(), 2u);
}

TEST(HeckeAlgebra, ZGroupCase) {
  auto store = enumerate_ball(shared_pair("z:1"), 3, Caps{});
  HeckeAlgebra alg(store);
  const auto p = alg.basis(class_at(store, 1));
  const auto m = alg.basis(class_at(store, -1));
  EXPECT_EQ(alg.convolve(p, m), alg.identity());
  EXPECT_EQ(alg.convolve(p, p), alg.basis(class_at(store, 2)));
}

TEST(HeckeAlgebra, BasisNormIsR) {
  auto store = enumerate_ball(shared_pair("psl2z1p:2"), 2, Caps{});
  HeckeAlgebra alg(store);
  for (auto d : store.class_ball(2)) {
    const auto n = norms(alg.basis(d));
    EXPECT_EQ(n.l2_sq, static_cast<unsigned long>(store.double_coset(d).R));
    EXPECT_EQ(n.l1, static_cast<unsigned long>(store.double_coset(d).R));
  }
}

TEST(HeckeAlgebra, Involution) {
  auto store = enumerate_ball(shared_pair("bcp:2"), 3, Caps{});
  HeckeAlgebra alg(store);
  EXPECT_EQ(alg.involution(alg.identity()), alg.identity());
  const auto d = *store.find_class(GroupElement::affine(0, 2));
  const auto di = *store.find_class(GroupElement::affine(0, Rational(1, 2)));
  EXPECT_EQ(store.double_coset(d).delta, Rational(1, 2));
  EXPECT_EQ(alg.involution(alg.basis(d)), alg.basis(di) * Rational(1, 2));
  EXPECT_EQ(alg.involution(alg.involution(alg.basis(d))), alg.basis(d));
}

TEST(HeckeAlgebra, Norms) {
  auto store = enumerate_ball(shared_pair("z:1"), 3, Caps{});
  HeckeAlgebra alg(store);
  const auto id = norms(alg.identity(), nullptr, std::nullopt);
  EXPECT_EQ(id.l1, 1);
  EXPECT_EQ(id.l2_sq, 1);
  const auto wl = word_length(store);
  EXPECT_DOUBLE_EQ(*norms(alg.identity(), &wl, 1.5).weighted, 1.0);
  const auto f = z_three_point(store);
  const auto n = norms(f, &wl, 0.0);
  EXPECT_EQ(n.l1, 3);
  EXPECT_EQ(n.l2_sq, 3);
  EXPECT_DOUBLE_EQ(n.l2_value, std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(*n.weighted, n.l2_value);
  HeckeElement far(store);
  far.add(store.class_of(GroupElement::lattice({40})), 1);
  EXPECT_THROW(norms(far, &wl, 1.0), LengthUndefinedOnSupport);
}

TEST(HeckeAlgebra, MomentsOnZ) {
  auto store = enumerate_ball(shared_pair("z:1"), 3, Caps{});
  HeckeAlgebra alg(store);
  EXPECT_EQ(alg.convolution_power_moment(alg.identity(), 5), 1);
  const auto f = z_three_point(store);
  EXPECT_EQ(alg.convolution_power_moment(f, 1), 3);
  EXPECT_EQ(alg.convolution_power_moment(f, 2), 19);
  const auto m = alg.moments(f, 12);
  ASSERT_TRUE(m.complete);
  for (unsigned n = 1; n <= 12; ++n) EXPECT_EQ(m.a[n - 1], central_trinomial(n)) << n;
}

TEST(HeckeAlgebra, MomentsRejectNonSelfAdjoint) {
  auto store = enumerate_ball(shared_pair("z:1"), 3, Caps{});
  HeckeAlgebra alg(store);
  EXPECT_THROW(alg.moments(alg.basis(class_at(store, 1)), 3), NotSelfAdjoint);
}

TEST(HeckeAlgebra, MomentsStopAtCap) {
  auto store = enumerate_ball(shared_pair("z:1"), 3, Caps{});
  HeckeAlgebra alg(store);
  const auto f = z_three_point(store);
  ScopedCaps caps(store, Caps{store.coset_count() + 4, 100});
  const auto m = alg.moments(f, 10);
  EXPECT_FALSE(m.complete);
  EXPECT_FALSE(m.warning.empty());
  ASSERT_FALSE(m.a.empty());
  EXPECT_EQ(m.a[0], 3);
}

TEST(HeckeAlgebra, StoreMismatch) {
  auto a = enumerate_ball(shared_pair("z:1"), 2, Caps{});
  auto b = enumerate_ball(shared_pair("z:1"), 2, Caps{});
  HeckeAlgebra alg(a);
  HeckeElement f(b);
  f.add(DoubleCosetId{0}, 1);
  EXPECT_THROW(alg.convolve(alg.identity(), f), StoreMismatch);
}

TEST(HeckeAlgebra, TextAndJsonRoundTrip) {
  auto store = enumerate_ball(shared_pair("dinf"), 3, Caps{});
  Rng rng(8);
  for (int i = 0; i < 10; ++i) {
    const auto f = hecke::testing::random_element(store, 3, rng);
    EXPECT_EQ(element_from_text(store, to_text(f)), f);
    EXPECT_EQ(element_from_json(store, nlohmann::json::parse(to_json(f).dump())), f);
  }
  EXPECT_THROW(element_from_text(store, "dc=1 coef=2\n"), ParseError);
  EXPECT_THROW(element_from_text(store, "dc=x coeff=2\n"), ParseError);
  EXPECT_THROW(element_from_text(store, "dc=999 coeff=2\n"), DomainError);
  const auto g = element_from_text(store, "# comment\n\ndc=0 coeff=-3/6\n");
  EXPECT_EQ(g.coeff(DoubleCosetId{0}), Rational(-1, 2));
}

TEST(FiniteOracle, S3) {
  const std::vector<Perm> gens{Perm{{1, 0, 2}}, Perm{{0, 2, 1}}};
  const auto o = finite_group_oracle(gens, {Perm{{0, 1, 2}}, Perm{{1, 0, 2}}});
  ASSERT_EQ(o.classes.size(), 2u);
  EXPECT_EQ(o.R, (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(o.L, (std::vector<std::uint64_t>{1, 2}));
  for (const auto& d : o.delta) EXPECT_EQ(d, 1);
  EXPECT_EQ(o.classes[1].size(), 4u);
  EXPECT_EQ(o.structure[1][1][0], 2u);
  EXPECT_EQ(o.structure[1][1][1], 1u);
}

TEST(FiniteOracle, ExtremeSubgroups) {
  const std::vector<Perm> gens{Perm{{1, 0, 2, 3}}, Perm{{1, 2, 3, 0}}};
  const auto trivial = finite_group_oracle(gens, {Perm{{0, 1, 2, 3}}});
  ASSERT_EQ(trivial.classes.size(), 24u);
  for (std::size_t a = 0; a < 24; ++a) {
    for (std::size_t b = 0; b < 24; ++b) {
      const auto& x = trivial.elements[trivial.classes[a][0]];
      const auto& y = trivial.elements[trivial.classes[b][0]];
      Perm xy{hecke::testing::pmul(x.images, y.images)};
      for (std::size_t c = 0; c < 24; ++c) {
        const bool is_product = trivial.elements[trivial.classes[c][0]] == xy;
        EXPECT_EQ(trivial.structure[a][b][c], is_product ? 1u : 0u);
      }
    }
  }
  std::vector<Perm> all;
  for (const auto& p : hecke::testing::closure({gens[0].images, gens[1].images}, 4)) all.push_back(Perm{p});
  const auto whole = finite_group_oracle(gens, all);
  ASSERT_EQ(whole.classes.size(), 1u);
  EXPECT_EQ(whole.structure[0][0][0], 1u);
  EXPECT_THROW(finite_group_oracle(gens, {Perm{{0, 1, 2, 3}}, Perm{{1, 2, 3, 0}}}), SubsetNotSubgroup);
}

// Structure constants of the engine agree with both oracles.
TEST(FiniteOracle, EngineAgreement) {
  for (const char* label : {"s3-h12", "s4-h12", "s4-h12-34"}) {
    auto pair = shared_pair(label);
    std::vector<Perm> gg, hs;
    std::vector<hecke::testing::P> gp, hp;
    for (const auto& g : pair->g_generators) {
      gg.push_back(g.as_perm());
      gp.push_back(g.as_perm().images);
    }
    for (const auto& h : pair->h_generators) hp.push_back(h.as_perm().images);
    const auto brute = hecke::testing::perm_oracle(gp, hp);
    for (const auto& h : brute.H) hs.push_back(Perm{h});
    const auto o = finite_group_oracle(gg, hs);

    auto store = enumerate_ball(pair, 10, Caps{});
    HeckeAlgebra alg(store);
    const auto k = store.class_count();
    ASSERT_EQ(o.classes.size(), k);
    ASSERT_EQ(brute.classes.size(), k);
    // Engine class -> oracle class via representatives.
    std::vector<std::size_t> to_oracle(k), to_brute(k);
    std::map<std::vector<std::uint16_t>, std::uint32_t> index;
    for (std::uint32_t i = 0; i < o.elements.size(); ++i) index[o.elements[i].images] = i;
    for (std::uint32_t d = 0; d < k; ++d) {
      const auto& rep = store.double_coset(DoubleCosetId{d}).rep.as_perm().images;
      to_oracle[d] = o.class_of[index.at(rep)];
      to_brute[d] = brute.class_of(rep);
      EXPECT_EQ(store.double_coset(DoubleCosetId{d}).R, o.R[to_oracle[d]]);
      EXPECT_EQ(store.double_coset(DoubleCosetId{d}).L, o.L[to_oracle[d]]);
      EXPECT_EQ(store.double_coset(DoubleCosetId{d}).delta, o.delta[to_oracle[d]]);
    }
    for (std::uint32_t a = 0; a < k; ++a) {
      for (std::uint32_t b = 0; b < k; ++b) {
        const auto prod = alg.convolve(alg.basis(DoubleCosetId{a}), alg.basis(DoubleCosetId{b}));
        for (std::uint32_t c = 0; c < k; ++c) {
          const auto engine = prod.coeff(DoubleCosetId{c});
          EXPECT_EQ(engine, static_cast<unsigned long>(o.structure[to_oracle[a]][to_oracle[b]][to_oracle[c]]))
              << label;
          EXPECT_EQ(engine, brute.structure_constant(to_brute[a], to_brute[b], to_brute[c])) << label;
        }
      }
    }
  }
}

TEST(HeckeAlgebraProperty, Laws) {
  Rng rng(99);
  for (const auto& label : hecke::testing::fg_labels()) {
    auto store = enumerate_ball(shared_pair(label), 3, Caps{});
    HeckeAlgebra alg(store);
    for (int i = 0; i < 40; ++i) {
      const auto r = hecke::testing::triple_radii(store.pair(), rng);
      const auto f = hecke::testing::random_element(store, r[0], rng, 2);
      const auto g = hecke::testing::random_element(store, r[1], rng, 2);
      const auto h = hecke::testing::random_element(store, r[2], rng, 2);
      EXPECT_EQ(alg.convolve(alg.convolve(f, g), h), alg.convolve(f, alg.convolve(g, h))) << label;
      EXPECT_EQ(alg.involution(alg.convolve(f, g)), alg.convolve(alg.involution(g), alg.involution(f))) << label;
      EXPECT_EQ(alg.involution(alg.involution(f)), f) << label;
      EXPECT_EQ(alg.convolve(alg.identity(), f), f) << label;
      EXPECT_EQ(alg.convolve(f, alg.identity()), f) << label;
    }
  }
}

TEST(HeckeAlgebraProperty, RhoIsNonDecreasing) {
  Rng rng(5);
  for (const char* label : {"z:1", "z:2", "dinf", "psl2z1p:2", "s4-h12"}) {
    auto store = enumerate_ball(shared_pair(label), 2, Caps{});
    HeckeAlgebra alg(store);
    for (int i = 0; i < 3; ++i) {
      auto f = hecke::testing::random_element(store, 1, rng, 2);
      HeckeElement pos(store);
      for (const auto& [d, c] : f.coeffs()) pos.add(d, abs(c));
      const auto sa = (pos + alg.involution(pos)) * Rational(1, 2);
      const auto m = alg.moments(sa, 5);
      double prev = 0;
      for (std::size_t n = 0; n < m.a.size(); ++n) {
        ASSERT_GE(m.a[n], 0);
        const double rho = std::pow(m.a[n].get_d(), 1.0 / (2.0 * (n + 1)));
        EXPECT_GE(rho, prev - 1e-12) << label;
        prev = rho;
      }
    }
  }
}
