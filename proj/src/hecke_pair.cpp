#include "hecke/hecke_pair.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <set>

#include "hecke/error.hpp"

namespace hecke {

namespace {

void require_kind(GroupKind expected, const GroupElement& g) {
  if (g.kind() != expected)
    throw DomainError("element of kind " + std::string(kind_name(g.kind())) + " given to a " +
                      std::string(kind_name(expected)) + " instance");
}

// SL2(Z[1/p]) (or PSL2) with H = SL2(Z) (resp. PSL2(Z)).
class ModularInstance final : public GroupInstance {
 public:
  ModularInstance(unsigned long p, bool projective) : p_(p), projective_(projective) {}

  GroupKind kind() const override {
    return projective_ ? GroupKind::ProjectiveSpecialLinear : GroupKind::SpecialLinear;
  }
  GroupElement identity() const override { return GroupElement::matrix(1, 0, 0, 1, projective_); }

  bool in_subgroup(const GroupElement& g) const override {
    const auto& m = g.as_matrix();
    return is_integer(m.a) && is_integer(m.b) && is_integer(m.c) && is_integer(m.d);
  }

  void validate(const GroupElement& g) const override {
    require_kind(kind(), g);
    const auto& m = g.as_matrix();
    for (const Rational* q : {&m.a, &m.b, &m.c, &m.d})
      if (!in_z_localized(*q, p_))
        throw DomainError("entry " + to_string(*q) + " is not in Z[1/" + std::to_string(p_) + "]");
  }

  // Hx = Hy iff the row lattices Z^2 x and Z^2 y agree (|det| = 1 forces the
  // change of basis into SL2(Z) up to sign). Key: Hermite normal form
  // [[alpha, beta], [0, delta]], alpha, delta > 0, 0 <= beta < delta.
  std::string right_coset_key(const GroupElement& g) const override {
    const auto& m = g.as_matrix();
    Rational r1[2] = {m.a, m.b};
    Rational r2[2] = {m.c, m.d};
    while (r2[0] != 0) {
      const Rational q(floor_of(Rational(r1[0] / r2[0])));
      r1[0] -= q * r2[0];
      r1[1] -= q * r2[1];
      std::swap(r1[0], r2[0]);
      std::swap(r1[1], r2[1]);
    }
    if (r1[0] < 0) {
      r1[0] = -r1[0];
      r1[1] = -r1[1];
    }
    if (r2[1] < 0) r2[1] = -r2[1];
    const Rational beta = mod_positive(r1[1], r2[1]);
    return r1[0].get_str() + "|" + beta.get_str();
  }

  std::string describe() const override {
    const std::string ring = "Z[1/" + std::to_string(p_) + "]";
    return projective_ ? "PSL2(" + ring + ") with H = PSL2(Z)" : "SL2(" + ring + ") with H = SL2(Z)";
  }

 private:
  unsigned long p_;
  bool projective_;
};

// Affine group {[[1,b],[0,a]]} with H = {[[1,n],[0,1]] : n in Z}.
// p = 0: a in Q+, b in Q (the full Bost-Connes pair); p > 0: a in p^Z, b in Z[1/p].
class AffineInstance final : public GroupInstance {
 public:
  explicit AffineInstance(unsigned long p) : p_(p) {}

  GroupKind kind() const override { return GroupKind::Affine; }
  GroupElement identity() const override { return GroupElement::affine(0, 1); }

  bool in_subgroup(const GroupElement& g) const override {
    const auto& x = g.as_affine();
    return x.a == 1 && is_integer(x.b);
  }

  void validate(const GroupElement& g) const override {
    require_kind(GroupKind::Affine, g);
    if (p_ == 0) return;
    const auto& x = g.as_affine();
    if (!is_power_of_rational(x.a, p_))
      throw DomainError("a = " + to_string(x.a) + " is not a power of " + std::to_string(p_));
    if (!in_z_localized(x.b, p_))
      throw DomainError("b = " + to_string(x.b) + " is not in Z[1/" + std::to_string(p_) + "]");
  }

  // H (b, a) = {(b + n a, a)}: key (a, b mod a).
  std::string right_coset_key(const GroupElement& g) const override {
    const auto& x = g.as_affine();
    return x.a.get_str() + "|" + mod_positive(x.b, x.a).get_str();
  }

  std::string describe() const override {
    if (p_ == 0) return "Bost-Connes: Q x| Q+ with H = Z";
    const auto p = std::to_string(p_);
    return "Z[1/" + p + "] x| " + p + "^Z with H = Z";
  }

 private:
  unsigned long p_;
};

// Any kind with a finite H given by its element list.
class FiniteSubgroupInstance final : public GroupInstance {
 public:
  FiniteSubgroupInstance(GroupElement identity, std::vector<GroupElement> h_elements, std::string description,
                         std::size_t shape)
      : identity_(std::move(identity)),
        h_(std::move(h_elements)),
        description_(std::move(description)),
        shape_(shape) {}

  GroupKind kind() const override { return identity_.kind(); }
  GroupElement identity() const override { return identity_; }

  bool in_subgroup(const GroupElement& g) const override {
    return std::any_of(h_.begin(), h_.end(), [&](const GroupElement& h) { return h == g; });
  }

  void validate(const GroupElement& g) const override {
    require_kind(kind(), g);
    if (kind() == GroupKind::Permutation && g.as_perm().images.size() != shape_)
      throw DomainError("permutation degree " + std::to_string(g.as_perm().images.size()) + " != " +
                        std::to_string(shape_));
    if (kind() == GroupKind::Lattice && g.as_zvec().coords.size() != shape_)
      throw DomainError("lattice dimension " + std::to_string(g.as_zvec().coords.size()) + " != " +
                        std::to_string(shape_));
  }

  // Hx is finite: its payload-least member is canonical.
  std::string right_coset_key(const GroupElement& g) const override {
    std::optional<GroupElement> least;
    for (const auto& h : h_) {
      auto candidate = mul(h, g);
      if (!least || payload_less(candidate, *least)) least = std::move(candidate);
    }
    return render_element(*least);
  }

  std::vector<GroupElement> finite_subgroup() const override { return h_; }
  std::string describe() const override { return description_; }

 private:
  GroupElement identity_;
  std::vector<GroupElement> h_;
  std::string description_;
  std::size_t shape_;
};

std::vector<GroupElement> subgroup_closure(const GroupElement& identity, const std::vector<GroupElement>& gens) {
  std::vector<GroupElement> elements{identity};
  std::set<std::string> seen{render_element(identity)};
  std::deque<GroupElement> queue{identity};
  while (!queue.empty()) {
    auto x = queue.front();
    queue.pop_front();
    for (const auto& s : gens) {
      auto y = mul(x, s);
      if (seen.insert(render_element(y)).second) {
        elements.push_back(y);
        queue.push_back(std::move(y));
      }
    }
  }
  return elements;
}

unsigned long parse_parameter(std::string_view label, std::string_view value) {
  unsigned long v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || v == 0)
    throw DomainError("bad parameter in pair label '" + std::string(label) + "'");
  return v;
}

bool is_prime(unsigned long p) {
  if (p < 2) return false;
  for (unsigned long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

GroupElement perm_from_cycle_swaps(std::size_t degree, std::initializer_list<std::pair<int, int>> swaps) {
  std::vector<std::uint16_t> images(degree);
  for (std::size_t i = 0; i < degree; ++i) images[i] = static_cast<std::uint16_t>(i);
  for (auto [i, j] : swaps) std::swap(images[i], images[j]);
  return GroupElement::perm(std::move(images));
}

HeckePair modular_pair(std::string label, unsigned long p, bool projective) {
  HeckePair pair;
  pair.label = std::move(label);
  pair.group = std::make_shared<ModularInstance>(p, projective);
  const auto S = GroupElement::matrix(0, -1, 1, 0, projective);
  const auto T = GroupElement::matrix(1, 1, 0, 1, projective);
  const auto gp = GroupElement::matrix(Rational(p), 0, 0, Rational(1, p), projective);
  pair.g_generators = {S, T, gp};
  pair.h_generators = {S, T};
  pair.generator_note =
      "S=[[0,-1],[1,0]], T=[[1,1],[0,1]], g_p=diag(p,1/p); H generated by S,T; "
      "g_p^-k T g_p^k = E12(p^-2k) and its conjugates by S give the remaining elementary matrices";
  if (projective)
    pair.reduction_kernel = ReductionKernel{"{+I, -I}", [](const GroupElement& g) {
                                              const auto& m = g.as_matrix();
                                              return GroupElement::matrix(m.a, m.b, m.c, m.d, true);
                                            }};
  return pair;
}

HeckePair affine_pair(std::string label, unsigned long p) {
  HeckePair pair;
  pair.label = std::move(label);
  pair.group = std::make_shared<AffineInstance>(p);
  const auto t = GroupElement::affine(1, 1);
  pair.h_generators = {t};
  if (p == 0) {
    pair.finitely_generated = false;
    pair.probes = {t};
    for (unsigned long q : {2UL, 3UL, 5UL, 7UL}) pair.probes.push_back(GroupElement::affine(0, Rational(q)));
    pair.generator_note = "infinitely generated; probes (1,1) and (0,q) for q in {2,3,5,7}";
  } else {
    pair.g_generators = {t, GroupElement::affine(0, Rational(p))};
    pair.generator_note = "S = {(b=1,a=1), (b=0,a=p)}; H generated by (1,1)";
  }
  return pair;
}

HeckePair lattice_pair(std::string label, std::size_t dim) {
  HeckePair pair;
  pair.label = std::move(label);
  const auto zero = GroupElement::lattice(std::vector<std::int64_t>(dim, 0));
  pair.group = std::make_shared<FiniteSubgroupInstance>(zero, std::vector<GroupElement>{zero},
                                                        "Z^" + std::to_string(dim) + " with H = {0}", dim);
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<std::int64_t> e(dim, 0);
    e[i] = 1;
    pair.g_generators.push_back(GroupElement::lattice(std::move(e)));
  }
  pair.generator_note = "standard unit vectors";
  return pair;
}

HeckePair dihedral_pair() {
  HeckePair pair;
  pair.label = "dinf";
  const auto e = GroupElement::dihedral(0, 0);
  const auto s = GroupElement::dihedral(0, 1);
  pair.group = std::make_shared<FiniteSubgroupInstance>(e, std::vector<GroupElement>{e, s},
                                                        "D_inf = Z x| Z/2 with H = {e, s}", 2);
  pair.g_generators = {GroupElement::dihedral(1, 0), s};
  pair.h_generators = {s};
  pair.generator_note = "t = (1, 0) translation, s = (0, 1) reflection";
  return pair;
}

}  // namespace

std::vector<GroupElement> HeckePair::symmetric_generators() const {
  std::vector<GroupElement> out;
  const auto e = identity();
  auto push = [&](const GroupElement& g) {
    if (g == e) return;
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  };
  for (const auto& s : g_generators) {
    push(s);
    push(inv(s));
  }
  return out;
}

std::vector<GroupElement> HeckePair::symmetric_h_generators() const {
  std::vector<GroupElement> out;
  const auto e = identity();
  auto push = [&](const GroupElement& g) {
    if (g == e) return;
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  };
  for (const auto& h : h_generators) {
    push(h);
    push(inv(h));
  }
  return out;
}

bool in_H(const HeckePair& pair, const GroupElement& g) { return pair.group->in_subgroup(g); }

GroupElement parse_element(const HeckePair& pair, std::string_view text) {
  auto g = parse_element(pair.kind(), text);
  pair.group->validate(g);
  return g;
}

HeckePair make_permutation_pair(std::string label, std::vector<GroupElement> g_generators,
                                std::vector<GroupElement> h_generators) {
  if (g_generators.empty()) throw DomainError("permutation pair needs generators");
  const auto degree = g_generators.front().as_perm().images.size();
  for (const auto& g : g_generators)
    if (g.kind() != GroupKind::Permutation || g.as_perm().images.size() != degree)
      throw DomainError("permutation generators must share one degree");
  for (const auto& h : h_generators)
    if (h.kind() != GroupKind::Permutation || h.as_perm().images.size() != degree)
      throw DomainError("H generators must be permutations of the same degree");
  const auto e = identity_like(g_generators.front());
  HeckePair pair;
  pair.label = std::move(label);
  auto h_elements = subgroup_closure(e, h_generators);
  pair.group = std::make_shared<FiniteSubgroupInstance>(
      e, std::move(h_elements), "permutation group of degree " + std::to_string(degree), degree);
  pair.g_generators = std::move(g_generators);
  pair.h_generators = std::move(h_generators);
  pair.generator_note = "explicit permutation generators";
  return pair;
}

HeckePair make_pair(std::string_view label) {
  const auto colon = label.find(':');
  const auto head = label.substr(0, colon);
  const auto param = colon == std::string_view::npos ? std::string_view{} : label.substr(colon + 1);
  auto need_prime = [&]() {
    const auto p = parse_parameter(label, param);
    if (!is_prime(p)) throw DomainError("pair '" + std::string(label) + "' needs a prime");
    return p;
  };
  if (head == "sl2z1p" && !param.empty()) return modular_pair(std::string(label), need_prime(), false);
  if (head == "psl2z1p" && !param.empty()) return modular_pair(std::string(label), need_prime(), true);
  if (label == "bc") return affine_pair("bc", 0);
  if (head == "bcp" && !param.empty()) return affine_pair(std::string(label), need_prime());
  if (head == "z" && !param.empty()) return lattice_pair(std::string(label), parse_parameter(label, param));
  if (label == "dinf") return dihedral_pair();
  if (label == "s3-h12") {
    auto pair = make_permutation_pair("s3-h12", {perm_from_cycle_swaps(3, {{0, 1}}), perm_from_cycle_swaps(3, {{1, 2}})},
                                      {perm_from_cycle_swaps(3, {{0, 1}})});
    pair.generator_note = "S = {(12), (23)}; H = <(12)>";
    return pair;
  }
  if (label == "s4-h12" || label == "s4-h12-34") {
    std::vector<GroupElement> gens = {perm_from_cycle_swaps(4, {{0, 1}}), perm_from_cycle_swaps(4, {{1, 2}}),
                                      perm_from_cycle_swaps(4, {{2, 3}})};
    std::vector<GroupElement> hs = {perm_from_cycle_swaps(4, {{0, 1}})};
    if (label == "s4-h12-34") hs.push_back(perm_from_cycle_swaps(4, {{2, 3}}));
    auto pair = make_permutation_pair(std::string(label), std::move(gens), std::move(hs));
    pair.generator_note = label == "s4-h12" ? "S = {(12), (23), (34)}; H = <(12)>"
                                            : "S = {(12), (23), (34)}; H = <(12), (34)>";
    return pair;
  }
  throw DomainError("unknown pair label '" + std::string(label) + "'");
}

std::vector<std::string> catalog_labels() {
  return {"sl2z1p:2", "psl2z1p:2", "bc", "bcp:2", "z:1", "z:2", "dinf", "s3-h12", "s4-h12", "s4-h12-34"};
}

}  // namespace hecke
