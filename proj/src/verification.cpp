#include "hecke/verification.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "hecke/error.hpp"
#include "hecke/growth.hpp"
#include "hecke/length.hpp"
#include "hecke/length_checks.hpp"

namespace hecke {

namespace {

std::shared_ptr<const HeckePair> shared(const std::string& label) {
  return std::make_shared<const HeckePair>(make_pair(label));
}

bool is_tree(const HeckePair& pair) {
  return pair.kind() == GroupKind::SpecialLinear || pair.kind() == GroupKind::ProjectiveSpecialLinear;
}

GroupElement random_word(const std::vector<GroupElement>& alphabet, const GroupElement& e, std::size_t len,
                         std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  GroupElement g = e;
  for (std::size_t i = 0; i < len; ++i) g = mul(g, alphabet[pick(rng)]);
  return g;
}

}  // namespace

HeckeElement random_element(const CosetStore& store, const std::vector<DoubleCosetId>& classes, std::mt19937_64& rng,
                            std::size_t max_terms) {
  std::uniform_int_distribution<std::size_t> pick(0, classes.size() - 1), terms(1, max_terms);
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  HeckeElement f(store);
  const auto n = terms(rng);
  for (std::size_t i = 0; i < n; ++i) {
    Rational c(num(rng), den(rng));
    c.canonicalize();
    f.add(classes[pick(rng)], c);
  }
  return f;
}

SuiteReport finite_oracle_suite() {
  SuiteReport rep{"finite-oracle", 0, {}};
  for (const std::string label : {"s3-h12", "s4-h12", "s4-h12-34"}) {
    auto pair = shared(label);
    std::vector<Perm> gens, hs;
    for (const auto& g : pair->g_generators) gens.push_back(g.as_perm());
    for (const auto& h : pair->group->finite_subgroup()) hs.push_back(h.as_perm());
    const auto o = finite_group_oracle(gens, hs);

    auto store = enumerate_ball(pair, 12, Caps{});
    HeckeAlgebra alg(store);
    const auto k = store.class_count();
    rep.expect(o.classes.size() == k, label + ": class count " + std::to_string(k) + " vs oracle " +
                                          std::to_string(o.classes.size()));
    if (o.classes.size() != k) continue;
    std::map<std::vector<std::uint16_t>, std::uint32_t> index;
    for (std::uint32_t i = 0; i < o.elements.size(); ++i) index[o.elements[i].images] = i;
    std::vector<std::size_t> to_oracle(k);
    std::vector<bool> seen(k, false);
    for (std::uint32_t d = 0; d < k; ++d) {
      const auto& rec = store.double_coset(DoubleCosetId{d});
      to_oracle[d] = o.class_of[index.at(rec.rep.as_perm().images)];
      seen[to_oracle[d]] = true;
      const auto tag = label + " class " + std::to_string(d);
      rep.expect(rec.R == o.R[to_oracle[d]], tag + ": R");
      rep.expect(rec.L == o.L[to_oracle[d]], tag + ": L");
      rep.expect(rec.delta == o.delta[to_oracle[d]], tag + ": delta");
      rep.expect(rec.members.size() * o.classes[0].size() == o.classes[to_oracle[d]].size(), tag + ": size");
    }
    for (std::uint32_t c = 0; c < k; ++c) rep.expect(seen[c], label + ": oracle class " + std::to_string(c) + " missed");
    for (std::uint32_t a = 0; a < k; ++a)
      for (std::uint32_t b = 0; b < k; ++b) {
        const auto prod = alg.convolve(alg.basis(DoubleCosetId{a}), alg.basis(DoubleCosetId{b}));
        for (std::uint32_t c = 0; c < k; ++c)
          rep.expect(prod.coeff(DoubleCosetId{c}) == o.structure[to_oracle[a]][to_oracle[b]][to_oracle[c]],
                     label + ": coefficient of T_" + std::to_string(c) + " in T_" + std::to_string(a) + " * T_" +
                         std::to_string(b));
      }
    if (label == "s3-h12" && k == 2) {
      const DoubleCosetId d{1};
      rep.expect(alg.convolve(alg.basis(d), alg.basis(d)) == alg.identity() * 2 + alg.basis(d),
                 "s3-h12: T_d * T_d = 2 T_e + T_d");
    }
  }
  return rep;
}

SuiteReport algebra_law_suite(std::size_t cases, std::uint64_t seed) {
  SuiteReport rep{"algebra-laws", 0, {}};
  std::mt19937_64 rng(seed);
  for (const auto& label : catalog_labels()) {
    auto pair = shared(label);
    std::vector<std::vector<DoubleCosetId>> by_radius(4);
    auto store = pair->finitely_generated ? enumerate_ball(pair, 3, Caps{}) : pointwise_store(pair, Caps{});
    if (pair->finitely_generated) {
      for (std::uint32_t r = 0; r <= 3; ++r) by_radius[r] = store.class_ball(r);
    } else {
      // Classes of probe words of length <= r stand in for the radius-r ball.
      auto alphabet = pair->probes;
      for (const auto& p : pair->probes) alphabet.push_back(inv(p));
      for (std::uint32_t r = 0; r <= 3; ++r) {
        std::vector<DoubleCosetId> classes{CosetStore::identity_class()};
        for (int i = 0; i < 12 && r > 0; ++i) classes.push_back(store.class_of(random_word(alphabet, pair->identity(), r, rng)));
        std::sort(classes.begin(), classes.end());
        classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
        by_radius[r] = classes;
      }
    }
    HeckeAlgebra alg(store);
    for (std::size_t i = 0; i < cases; ++i) {
      // Tree pairs keep the total radius at 6 so products stay small.
      std::array<std::uint32_t, 3> r{3, 3, 3};
      if (is_tree(*pair)) {
        r = {3, 2, 1};
        std::shuffle(r.begin(), r.end(), rng);
      }
      const auto f = random_element(store, by_radius[r[0]], rng, 2);
      const auto g = random_element(store, by_radius[r[1]], rng, 2);
      const auto h = random_element(store, by_radius[r[2]], rng, 2);
      const auto tag = label + " case " + std::to_string(i);
      rep.expect(alg.convolve(alg.convolve(f, g), h) == alg.convolve(f, alg.convolve(g, h)), tag + ": associativity");
      rep.expect(alg.involution(alg.convolve(f, g)) == alg.convolve(alg.involution(g), alg.involution(f)),
                 tag + ": (fg)* = g* f*");
      rep.expect(alg.involution(alg.involution(f)) == f, tag + ": (f*)* = f");
      rep.expect(alg.convolve(alg.identity(), f) == f && alg.convolve(f, alg.identity()) == f, tag + ": unit");
    }
  }
  return rep;
}

SuiteReport length_axiom_suite() {
  SuiteReport rep{"length-axioms", 0, {}};
  for (const auto& label : catalog_labels()) {
    auto pair = shared(label);
    if (!pair->finitely_generated) continue;
    const std::uint32_t half = is_tree(*pair) ? 2 : 3;
    auto store = enumerate_ball(pair, 2 * half, Caps{});
    HeckeAlgebra alg(store);
    std::vector<LengthFunction> lengths{word_length(store), indicator_length(store)};
    lengths.push_back(unimodularity_check(*pair, store.caps().max_orbit).verdict ? characteristic_length(store)
                                                                                  : characteristic_length(store, true));
    if (!pair->group->finite_subgroup().empty()) {
      CayleyWordLength cl(*pair, 4 * half + 4);
      lengths.push_back(averaged_class_length(store, averaged_length(*pair, cl)));
    }
    for (const auto& l : lengths) {
      const auto r = check_length_axioms(alg, l, half);
      const auto tag = label + " " + std::string(length_kind_name(l.kind()));
      rep.expect(r.ok(), tag + (r.failures.empty() ? "" : ": " + r.failures.front()));
      rep.expect(r.products > 0, tag + ": no products checked");
    }
  }
  const auto dinf = make_pair("dinf");
  CayleyWordLength cl(dinf, 8);
  const auto avg = averaged_length(dinf, cl);
  for (const auto& g : cl.ball()) rep.expect(avg.bound_holds(g), "dinf averaged bound at " + render_element(g));
  return rep;
}

std::uint32_t golden_radius(const std::string& label) {
  if (label == "z:1") return 5;
  if (label == "dinf") return 4;
  if (label.rfind("sl2", 0) == 0 || label.rfind("psl2", 0) == 0) return 2;
  return 3;
}

std::string golden_file_name(const std::string& label) {
  std::string s = label;
  std::replace(s.begin(), s.end(), ':', '_');
  return s + ".json";
}

nlohmann::json golden_document(const std::string& label) {
  auto pair = shared(label);
  nlohmann::json doc;
  doc["pair"] = label;
  doc["generators"] = pair->generator_note;
  const auto uni = unimodularity_check(*pair, Caps{}.max_orbit);
  nlohmann::json values = nlohmann::json::array();
  for (const auto& [g, d] : uni.values) values.push_back({{"element", render_element(g)}, {"delta", to_string(d)}});
  doc["unimodular"] = uni.verdict;
  doc["modular_values"] = values;
  if (!pair->finitely_generated) {
    auto store = pointwise_store(pair, Caps{});
    for (const auto& p : pair->probes) {
      store.class_of(p);
      store.class_of(inv(p));
    }
    doc["radius"] = nullptr;
    doc["snapshot"] = store.snapshot();
    return doc;
  }
  const auto r = golden_radius(label);
  auto store = enumerate_ball(pair, r, Caps{});
  doc["radius"] = r;
  doc["snapshot"] = store.snapshot();
  const auto series = growth_series(store, word_length(store), r);
  doc["growth"] = series.ball;
  HeckeAlgebra alg(store);
  doc["structure"] = structure_constants_csv(alg, store.class_ball(1));
  return doc;
}

SuiteReport golden_suite(const std::string& dir) {
  SuiteReport rep{"golden", 0, {}};
  for (const auto& label : catalog_labels()) {
    const auto path = dir + "/" + golden_file_name(label);
    std::ifstream in(path);
    if (!in) {
      rep.expect(false, label + ": missing " + path);
      continue;
    }
    nlohmann::json stored;
    try {
      stored = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
      rep.expect(false, label + ": unreadable " + path + ": " + e.what());
      continue;
    }
    const auto fresh = golden_document(label);
    if (stored == fresh) {
      rep.expect(true, label);
      continue;
    }
    std::string diff;
    for (auto it = fresh.begin(); it != fresh.end(); ++it)
      if (!stored.contains(it.key()) || stored[it.key()] != it.value()) diff += " " + it.key();
    rep.expect(false, label + ": snapshot differs in" + (diff.empty() ? std::string(" extra keys") : diff));
  }
  return rep;
}

}  // namespace hecke
