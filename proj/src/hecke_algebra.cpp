#include "hecke/hecke_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "hecke/error.hpp"

namespace hecke {

Rational HeckeElement::coeff(DoubleCosetId d) const {
  auto it = coeffs_.find(d);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

void HeckeElement::set(DoubleCosetId d, const Rational& c) {
  if (c == 0)
    coeffs_.erase(d);
  else
    coeffs_[d] = c;
}

void HeckeElement::add(DoubleCosetId d, const Rational& c) {
  if (c == 0) return;
  auto [it, fresh] = coeffs_.try_emplace(d, c);
  if (fresh) return;
  it->second += c;
  if (it->second == 0) coeffs_.erase(it);
}

std::vector<DoubleCosetId> HeckeElement::support() const {
  std::vector<DoubleCosetId> out;
  out.reserve(coeffs_.size());
  for (const auto& [d, c] : coeffs_) out.push_back(d);
  return out;
}

HeckeElement& HeckeElement::operator+=(const HeckeElement& other) {
  if (other.store_ != store_) throw StoreMismatch("adding elements of different stores");
  for (const auto& [d, c] : other.coeffs_) add(d, c);
  return *this;
}

HeckeElement& HeckeElement::operator*=(const Rational& c) {
  if (c == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [d, v] : coeffs_) v *= c;
  return *this;
}

// ---------------------------------------------------------------------------

void HeckeAlgebra::check_store(const HeckeElement& f) const {
  if (&f.store() != store_) throw StoreMismatch("element belongs to a different store");
}

HeckeElement HeckeAlgebra::basis(DoubleCosetId d) const {
  if (d.value >= store_->class_count()) throw DomainError("unknown double coset " + std::to_string(d.value));
  HeckeElement e(*store_);
  e.set(d, 1);
  return e;
}

const BasisProduct& HeckeAlgebra::basis_product(DoubleCosetId d1, DoubleCosetId d2) {
  const auto key = std::make_pair(d1.value, d2.value);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  // Copies: interning below may reallocate the class table.
  const auto a = store_->double_coset(d1).rep;
  const auto d1_members = store_->double_coset(d1).members;
  const auto left_reps = store_->double_coset(d2).left_reps;
  const auto d2_members = store_->double_coset(d2).members;
  const std::uint64_t R1 = d1_members.size();
  const std::uint64_t R2 = d2_members.size();
  const auto label = "product T" + std::to_string(d1.value) + "*T" + std::to_string(d2.value);

  // H a H c H = union over the left cosets c_k H of HcH of H a c_k H.
  std::set<DoubleCosetId> candidates;
  for (const auto& c : left_reps) candidates.insert(store_->class_of(mul(a, c)));

  BasisProduct product;
  if (R1 * R2 <= verify_budget_) {
    // (T1 * T2)(Hx) = #{(i, j) : H a_i b_j = Hx}; every right coset of the
    // product is counted, so constancy on classes is checked in full.
    std::unordered_map<std::uint32_t, std::uint64_t> hist;
    for (auto m1 : d1_members) {
      const auto& ai = store_->rep(m1);
      for (auto m2 : d2_members) {
        auto c = store_->find(mul(ai, store_->rep(m2)));
        if (!c || !store_->coset(*c).dc || !candidates.count(*store_->coset(*c).dc))
          throw NonBiInvariantResult(label + " leaves the candidate classes");
        ++hist[c->value];
      }
    }
    for (auto d : candidates) {
      const auto& rec = store_->double_coset(d);
      const auto n = hist[rec.members.front().value];
      for (auto m : rec.members)
        if (hist[m.value] != n) throw NonBiInvariantResult(label + " is not constant on class " + std::to_string(d.value));
      if (n == 0) throw NonBiInvariantResult(label + " vanishes on candidate class " + std::to_string(d.value));
      product.emplace_back(d, n);
    }
  } else {
    // n(d) = #{j : x b_j^-1 in d1} at the representative x of d, re-checked
    // on a fixed sample of other members.
    std::vector<GroupElement> b_inv;
    b_inv.reserve(R2);
    for (auto m : d2_members) b_inv.push_back(inv(store_->rep(m)));
    auto count_at = [&](const GroupElement& x) {
      std::uint64_t n = 0;
      for (const auto& bi : b_inv) {
        auto dc = store_->find_class(mul(x, bi));
        if (dc && *dc == d1) ++n;
      }
      return n;
    };
    constexpr std::size_t kSample = 4;
    std::uint64_t mass = 0;
    for (auto d : candidates) {
      const auto& rec = store_->double_coset(d);
      const auto n = count_at(rec.rep);
      if (n == 0) throw NonBiInvariantResult(label + " vanishes on candidate class " + std::to_string(d.value));
      const auto step = std::max<std::size_t>(1, rec.members.size() / (kSample + 1));
      for (std::size_t i = step; i < rec.members.size(); i += step)
        if (count_at(store_->rep(rec.members[i])) != n)
          throw NonBiInvariantResult(label + " is not constant on class " + std::to_string(d.value));
      product.emplace_back(d, n);
      mass += n * rec.R;
    }
    // sum over Hx of (T1 * T2)(Hx) = R(d1) R(d2)
    if (mass != R1 * R2)
      throw NonBiInvariantResult(label + " has mass " + std::to_string(mass) + ", expected " + std::to_string(R1 * R2));
  }
  return cache_.emplace(key, std::move(product)).first->second;
}

HeckeElement HeckeAlgebra::convolve(const HeckeElement& f, const HeckeElement& g) {
  check_store(f);
  check_store(g);
  HeckeElement out(*store_);
  for (const auto& [d1, c1] : f.coeffs()) {
    for (const auto& [d2, c2] : g.coeffs()) {
      const Rational c = c1 * c2;
      for (const auto& [d, n] : basis_product(d1, d2)) out.add(d, c * static_cast<unsigned long>(n));
    }
  }
  return out;
}

HeckeElement HeckeAlgebra::involution(const HeckeElement& f) {
  check_store(f);
  HeckeElement out(*store_);
  for (const auto& [d, c] : f.coeffs()) {
    const auto di = store_->invert_double_coset(d);
    out.add(di, store_->double_coset(d).delta * c);
  }
  return out;
}

bool HeckeAlgebra::is_self_adjoint(const HeckeElement& f) { return involution(f) == f; }

Rational HeckeAlgebra::value_at_identity(const HeckeElement& f, const HeckeElement& g) {
  check_store(f);
  check_store(g);
  Rational sum = 0;
  for (const auto& [d, c] : g.coeffs()) {
    const auto fi = f.coeff(store_->invert_double_coset(d));
    if (fi != 0) sum += fi * c * static_cast<unsigned long>(store_->double_coset(d).R);
  }
  return sum;
}

Rational HeckeAlgebra::convolution_power_moment(const HeckeElement& f, std::uint32_t n) {
  if (n == 0) throw DomainError("moment order must be positive");
  auto m = moments(f, n);
  if (!m.complete) throw CapExceeded(m.warning);
  return m.a.back();
}

HeckeAlgebra::Moments HeckeAlgebra::moments(const HeckeElement& f, std::uint32_t N) {
  check_store(f);
  if (!is_self_adjoint(f)) throw NotSelfAdjoint("moments need f* = f");
  Moments out;
  HeckeElement power = f;
  for (std::uint32_t n = 1; n <= N; ++n) {
    try {
      if (n > 1) power = convolve(power, f);
      // a_n = (f^n * f^n)(HeH)
      out.a.push_back(value_at_identity(power, power));
    } catch (const CapExceeded& e) {
      out.complete = false;
      out.warning = "moments stopped at n=" + std::to_string(n) + ": " + e.what();
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

NormReport norms(const HeckeElement& f, const LengthFunction* l, std::optional<double> s) {
  NormReport r;
  r.l1 = 0;
  r.l2_sq = 0;
  double weighted_sq = 0;
  for (const auto& [d, c] : f.coeffs()) {
    const auto R = static_cast<unsigned long>(f.store().double_coset(d).R);
    r.l1 += abs(c) * R;
    r.l2_sq += c * c * R;
    if (s) {
      if (!l) throw DomainError("weighted norm needs a length function");
      const double w = std::pow(1.0 + l->at(d), 2.0 * *s);
      weighted_sq += Rational(c * c).get_d() * w * static_cast<double>(R);
    }
  }
  r.l1_value = r.l1.get_d();
  r.l2_value = std::sqrt(r.l2_sq.get_d());
  if (s) {
    r.s = s;
    r.weighted = std::sqrt(weighted_sq);
  }
  return r;
}

std::string to_text(const HeckeElement& f) {
  std::string out;
  for (const auto& [d, c] : f.coeffs()) out += "dc=" + std::to_string(d.value) + " coeff=" + to_string(c) + "\n";
  return out;
}

HeckeElement element_from_text(const CosetStore& store, std::string_view text) {
  HeckeElement f(store);
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    const auto line_start = pos;
    pos = end + 1;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    line = line.substr(first);
    const auto at = line_start + first;
    if (line.substr(0, 3) != "dc=") throw ParseError("expected 'dc=<id>'", at);
    const auto space = line.find(' ');
    if (space == std::string_view::npos) throw ParseError("expected ' coeff=<rational>'", at + line.size());
    const auto id_text = std::string(line.substr(3, space - 3));
    std::uint32_t id = 0;
    try {
      std::size_t used = 0;
      const auto v = std::stoul(id_text, &used);
      if (used != id_text.size()) throw std::invalid_argument(id_text);
      id = static_cast<std::uint32_t>(v);
    } catch (const std::exception&) {
      throw ParseError("bad double coset id '" + id_text + "'", at + 3);
    }
    auto rest = line.substr(space + 1);
    const auto rest_at = at + space + 1;
    if (rest.substr(0, 6) != "coeff=") throw ParseError("expected 'coeff=<rational>'", rest_at);
    auto value = rest.substr(6);
    while (!value.empty() && (value.back() == ' ' || value.back() == '\r' || value.back() == '\t'))
      value.remove_suffix(1);
    Rational c;
    if (!try_parse_rational(value, c)) throw ParseError("bad rational '" + std::string(value) + "'", rest_at + 6);
    if (id >= store.class_count()) throw DomainError("unknown double coset " + std::to_string(id));
    f.add(DoubleCosetId{id}, c);
  }
  return f;
}

nlohmann::json to_json(const HeckeElement& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [d, c] : f.coeffs()) terms.push_back({{"dc", d.value}, {"coeff", to_string(c)}});
  return {{"terms", std::move(terms)}};
}

HeckeElement element_from_json(const CosetStore& store, const nlohmann::json& j) {
  HeckeElement f(store);
  for (const auto& t : j.at("terms")) {
    const auto id = t.at("dc").get<std::uint32_t>();
    if (id >= store.class_count()) throw DomainError("unknown double coset " + std::to_string(id));
    Rational c;
    if (!try_parse_rational(t.at("coeff").get<std::string>(), c))
      throw DomainError("bad rational " + t.at("coeff").dump());
    f.add(DoubleCosetId{id}, c);
  }
  return f;
}

std::string structure_constants_csv(HeckeAlgebra& algebra, const std::vector<DoubleCosetId>& classes) {
  std::string out = "d1,d2,d,coeff\n";
  for (auto d1 : classes) {
    for (auto d2 : classes) {
      auto product = algebra.basis_product(d1, d2);
      std::sort(product.begin(), product.end());
      for (const auto& [d, n] : product)
        out += std::to_string(d1.value) + "," + std::to_string(d2.value) + "," + std::to_string(d.value) + "," +
               std::to_string(n) + "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Perm perm_mul(const Perm& x, const Perm& y) {
  Perm out;
  out.images.resize(x.images.size());
  for (std::size_t i = 0; i < x.images.size(); ++i) out.images[i] = x.images[y.images[i]];
  return out;
}

Perm perm_inv(const Perm& x) {
  Perm out;
  out.images.resize(x.images.size());
  for (std::size_t i = 0; i < x.images.size(); ++i) out.images[x.images[i]] = static_cast<std::uint16_t>(i);
  return out;
}

}  // namespace

FiniteOracle finite_group_oracle(const std::vector<Perm>& g_generators, const std::vector<Perm>& h_subset) {
  constexpr std::size_t kMaxOrder = 10'000;
  if (g_generators.empty()) throw DomainError("oracle needs generators");
  const auto n = g_generators.front().images.size();
  Perm e;
  for (std::size_t i = 0; i < n; ++i) e.images.push_back(static_cast<std::uint16_t>(i));

  std::set<std::vector<std::uint16_t>> seen{e.images};
  std::vector<Perm> todo{e};
  while (!todo.empty()) {
    auto x = std::move(todo.back());
    todo.pop_back();
    for (const auto& g : g_generators) {
      if (g.images.size() != n) throw DomainError("generators of different degree");
      auto y = perm_mul(x, g);
      if (seen.insert(y.images).second) {
        if (seen.size() > kMaxOrder) throw DomainError("oracle limited to |G| <= 10^4");
        todo.push_back(std::move(y));
      }
    }
  }

  FiniteOracle o;
  std::map<std::vector<std::uint16_t>, std::uint32_t> index;
  for (const auto& images : seen) {
    index.emplace(images, static_cast<std::uint32_t>(o.elements.size()));
    o.elements.push_back(Perm{images});
  }
  const auto order = o.elements.size();
  auto idx = [&](const Perm& p) {
    auto it = index.find(p.images);
    if (it == index.end()) throw SubsetNotSubgroup("element outside G");
    return it->second;
  };

  std::set<std::uint32_t> H;
  for (const auto& h : h_subset) H.insert(idx(h));
  if (!H.count(idx(e))) throw SubsetNotSubgroup("H does not contain the identity");
  for (auto a : H)
    for (auto b : H)
      if (!H.count(idx(perm_mul(o.elements[a], o.elements[b])))) throw SubsetNotSubgroup("H is not closed");

  // Double cosets, H first (the identity is the least permutation).
  o.class_of.assign(order, UINT32_MAX);
  for (std::uint32_t x = 0; x < order; ++x) {
    if (o.class_of[x] != UINT32_MAX) continue;
    const auto k = static_cast<std::uint32_t>(o.classes.size());
    std::set<std::uint32_t> members;
    for (auto a : H)
      for (auto b : H) members.insert(idx(perm_mul(perm_mul(o.elements[a], o.elements[x]), o.elements[b])));
    for (auto m : members) o.class_of[m] = k;
    o.classes.emplace_back(members.begin(), members.end());
  }

  for (const auto& cls : o.classes) {
    std::set<std::uint32_t> right, left;  // least element of Hy and yH
    for (auto y : cls) {
      std::uint32_t r = UINT32_MAX, l = UINT32_MAX;
      for (auto h : H) {
        r = std::min(r, idx(perm_mul(o.elements[h], o.elements[y])));
        l = std::min(l, idx(perm_mul(o.elements[y], o.elements[h])));
      }
      right.insert(r);
      left.insert(l);
    }
    o.R.push_back(right.size());
    o.L.push_back(left.size());
    Rational d(static_cast<unsigned long>(left.size()), static_cast<unsigned long>(right.size()));
    d.canonicalize();
    o.delta.push_back(d);
  }

  // (1_a * 1_b)(x) = sum_y 1_a(x y^-1) 1_b(y) = |H| (T_a * T_b)(Hx).
  const auto k = o.classes.size();
  o.structure.assign(k, std::vector<std::vector<std::uint64_t>>(k, std::vector<std::uint64_t>(k, 0)));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      for (std::size_t c = 0; c < k; ++c) {
        const auto& x = o.elements[o.classes[c].front()];
        std::uint64_t sum = 0;
        for (auto y : o.classes[b])
          if (o.class_of[idx(perm_mul(x, perm_inv(o.elements[y])))] == a) ++sum;
        if (sum % H.size() != 0) throw Error("oracle: group-algebra product not divisible by |H|");
        o.structure[a][b][c] = sum / H.size();
      }
    }
  }
  return o;
}

}  // namespace hecke
