#include "hecke/group_element.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "hecke/error.hpp"

namespace hecke {

std::string_view kind_name(GroupKind kind) {
  switch (kind) {
    case GroupKind::SpecialLinear: return "sl2";
    case GroupKind::ProjectiveSpecialLinear: return "psl2";
    case GroupKind::Affine: return "affine";
    case GroupKind::Permutation: return "perm";
    case GroupKind::Lattice: return "zvec";
    case GroupKind::Dihedral: return "dihedral";
  }
  return "?";
}

Matrix2Q sign_canonical(Matrix2Q m) {
  int s = 0;
  for (const Rational* q : {&m.a, &m.b, &m.c, &m.d}) {
    s = sgn(*q);
    if (s != 0) break;
  }
  if (s < 0) {
    m.a = -m.a;
    m.b = -m.b;
    m.c = -m.c;
    m.d = -m.d;
  }
  return m;
}

GroupElement GroupElement::matrix(Rational a, Rational b, Rational c, Rational d, bool projective) {
  for (Rational* q : {&a, &b, &c, &d}) q->canonicalize();
  if (a * d - b * c != 1) throw DomainError("matrix determinant is not 1");
  Matrix2Q m{std::move(a), std::move(b), std::move(c), std::move(d)};
  if (projective) return {GroupKind::ProjectiveSpecialLinear, sign_canonical(std::move(m))};
  return {GroupKind::SpecialLinear, std::move(m)};
}

GroupElement GroupElement::affine(Rational b, Rational a) {
  b.canonicalize();
  a.canonicalize();
  if (a <= 0) throw DomainError("affine element needs a > 0");
  return {GroupKind::Affine, AffineQ{std::move(b), std::move(a)}};
}

GroupElement GroupElement::perm(std::vector<std::uint16_t> images) {
  std::vector<bool> seen(images.size(), false);
  for (auto i : images) {
    if (i >= images.size() || seen[i]) throw DomainError("permutation images are not a bijection");
    seen[i] = true;
  }
  return {GroupKind::Permutation, Perm{std::move(images)}};
}

GroupElement GroupElement::lattice(std::vector<std::int64_t> coords) {
  return {GroupKind::Lattice, ZVec{std::move(coords)}};
}

GroupElement GroupElement::dihedral(std::int64_t translation, int reflection) {
  if (reflection != 0 && reflection != 1) throw DomainError("dihedral reflection bit must be 0 or 1");
  return {GroupKind::Dihedral, ZVec{{translation, reflection}}};
}

namespace {

void require_same_kind(const GroupElement& x, const GroupElement& y) {
  if (x.kind() != y.kind())
    throw MixedKinds(std::string("cannot combine ") + std::string(kind_name(x.kind())) + " with " +
                     std::string(kind_name(y.kind())));
}

Matrix2Q matmul(const Matrix2Q& x, const Matrix2Q& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}

}  // namespace

GroupElement mul(const GroupElement& x, const GroupElement& y) {
  require_same_kind(x, y);
  switch (x.kind()) {
    case GroupKind::SpecialLinear:
      return {x.kind(), matmul(x.as_matrix(), y.as_matrix())};
    case GroupKind::ProjectiveSpecialLinear:
      return {x.kind(), sign_canonical(matmul(x.as_matrix(), y.as_matrix()))};
    case GroupKind::Affine: {
      // [[1,b],[0,a]] [[1,b'],[0,a']] = [[1, b' + b a'], [0, a a']]
      const auto& p = x.as_affine();
      const auto& q = y.as_affine();
      return {x.kind(), AffineQ{q.b + p.b * q.a, p.a * q.a}};
    }
    case GroupKind::Permutation: {
      const auto& p = x.as_perm().images;
      const auto& q = y.as_perm().images;
      if (p.size() != q.size()) throw MixedKinds("permutation degrees differ");
      // (x y)(i) = x(y(i))
      Perm r{std::vector<std::uint16_t>(p.size())};
      for (std::size_t i = 0; i < p.size(); ++i) r.images[i] = p[q[i]];
      return {x.kind(), std::move(r)};
    }
    case GroupKind::Lattice: {
      const auto& p = x.as_zvec().coords;
      const auto& q = y.as_zvec().coords;
      if (p.size() != q.size()) throw MixedKinds("lattice dimensions differ");
      ZVec r{p};
      for (std::size_t i = 0; i < p.size(); ++i) r.coords[i] += q[i];
      return {x.kind(), std::move(r)};
    }
    case GroupKind::Dihedral: {
      // (n, e)(m, f) = (n + (-1)^e m, e + f mod 2)
      const auto& p = x.as_zvec().coords;
      const auto& q = y.as_zvec().coords;
      return {x.kind(), ZVec{{p[0] + (p[1] ? -q[0] : q[0]), (p[1] + q[1]) % 2}}};
    }
  }
  throw Error("unknown group kind");
}

GroupElement inv(const GroupElement& x) {
  switch (x.kind()) {
    case GroupKind::SpecialLinear: {
      const auto& m = x.as_matrix();
      return {x.kind(), Matrix2Q{m.d, -m.b, -m.c, m.a}};
    }
    case GroupKind::ProjectiveSpecialLinear: {
      const auto& m = x.as_matrix();
      return {x.kind(), sign_canonical(Matrix2Q{m.d, -m.b, -m.c, m.a})};
    }
    case GroupKind::Affine: {
      const auto& p = x.as_affine();
      Rational a = 1 / p.a;
      Rational b = -p.b * a;
      return {x.kind(), AffineQ{std::move(b), std::move(a)}};
    }
    case GroupKind::Permutation: {
      const auto& p = x.as_perm().images;
      Perm r{std::vector<std::uint16_t>(p.size())};
      for (std::size_t i = 0; i < p.size(); ++i) r.images[p[i]] = static_cast<std::uint16_t>(i);
      return {x.kind(), std::move(r)};
    }
    case GroupKind::Lattice: {
      ZVec r{x.as_zvec().coords};
      for (auto& c : r.coords) c = -c;
      return {x.kind(), std::move(r)};
    }
    case GroupKind::Dihedral: {
      const auto& p = x.as_zvec().coords;
      return {x.kind(), ZVec{{p[1] ? p[0] : -p[0], p[1]}}};
    }
  }
  throw Error("unknown group kind");
}

GroupElement identity_like(const GroupElement& x) {
  switch (x.kind()) {
    case GroupKind::SpecialLinear:
    case GroupKind::ProjectiveSpecialLinear:
      return {x.kind(), Matrix2Q{1, 0, 0, 1}};
    case GroupKind::Affine:
      return {x.kind(), AffineQ{0, 1}};
    case GroupKind::Permutation: {
      Perm r{std::vector<std::uint16_t>(x.as_perm().images.size())};
      for (std::size_t i = 0; i < r.images.size(); ++i) r.images[i] = static_cast<std::uint16_t>(i);
      return {x.kind(), std::move(r)};
    }
    case GroupKind::Lattice:
      return {x.kind(), ZVec{std::vector<std::int64_t>(x.as_zvec().coords.size(), 0)}};
    case GroupKind::Dihedral:
      return {x.kind(), ZVec{{0, 0}}};
  }
  throw Error("unknown group kind");
}

bool eq(const GroupElement& x, const GroupElement& y) {
  require_same_kind(x, y);
  return x == y;
}

bool payload_less(const GroupElement& x, const GroupElement& y) {
  require_same_kind(x, y);
  return std::visit(
      [&](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        const auto& q = std::get<T>(y.payload());
        if constexpr (std::is_same_v<T, Matrix2Q>) {
          if (p.a != q.a) return p.a < q.a;
          if (p.b != q.b) return p.b < q.b;
          if (p.c != q.c) return p.c < q.c;
          return p.d < q.d;
        } else if constexpr (std::is_same_v<T, AffineQ>) {
          if (p.a != q.a) return p.a < q.a;
          return p.b < q.b;
        } else if constexpr (std::is_same_v<T, Perm>) {
          return p.images < q.images;
        } else {
          return p.coords < q.coords;
        }
      },
      x.payload());
}

namespace {

struct Token {
  std::string_view text;
  std::size_t offset;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    out.push_back({s.substr(i, j - i), i});
    i = j;
  }
  return out;
}

Rational rational_token(const Token& t) {
  Rational q;
  if (!try_parse_rational(t.text, q)) throw ParseError("expected rational, got '" + std::string(t.text) + "'", t.offset);
  return q;
}

std::int64_t integer_token(const Token& t) {
  std::int64_t v = 0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last)
    throw ParseError("expected integer, got '" + std::string(t.text) + "'", t.offset);
  return v;
}

void expect_count(const std::vector<Token>& toks, std::size_t n, std::string_view text) {
  if (toks.size() != n)
    throw ParseError("expected " + std::to_string(n - 1) + " values after '" + std::string(toks[0].text) + "'",
                     toks.size() < n ? text.size() : toks[n].offset);
}

}  // namespace

GroupElement parse_element(GroupKind kind, std::string_view text) {
  const auto toks = tokenize(text);
  if (toks.empty()) throw ParseError("empty element", 0);
  const auto tag = toks[0].text;
  auto wrong_tag = [&]() {
    return ParseError("tag '" + std::string(tag) + "' does not fit kind " + std::string(kind_name(kind)),
                      toks[0].offset);
  };
  switch (kind) {
    case GroupKind::SpecialLinear:
    case GroupKind::ProjectiveSpecialLinear: {
      if (tag != "mat") throw wrong_tag();
      expect_count(toks, 5, text);
      return GroupElement::matrix(rational_token(toks[1]), rational_token(toks[2]), rational_token(toks[3]),
                                  rational_token(toks[4]), kind == GroupKind::ProjectiveSpecialLinear);
    }
    case GroupKind::Affine: {
      if (tag != "aff") throw wrong_tag();
      expect_count(toks, 3, text);
      return GroupElement::affine(rational_token(toks[1]), rational_token(toks[2]));
    }
    case GroupKind::Permutation: {
      if (tag != "perm") throw wrong_tag();
      if (toks.size() < 2) throw ParseError("permutation needs at least one image", text.size());
      std::vector<std::uint16_t> images;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        const auto v = integer_token(toks[i]);
        if (v < 0 || v > 65535) throw DomainError("permutation image out of range");
        images.push_back(static_cast<std::uint16_t>(v));
      }
      return GroupElement::perm(std::move(images));
    }
    case GroupKind::Lattice: {
      if (tag != "zvec") throw wrong_tag();
      if (toks.size() < 2) throw ParseError("zvec needs at least one coordinate", text.size());
      std::vector<std::int64_t> coords;
      for (std::size_t i = 1; i < toks.size(); ++i) coords.push_back(integer_token(toks[i]));
      return GroupElement::lattice(std::move(coords));
    }
    case GroupKind::Dihedral: {
      if (tag != "zvec") throw wrong_tag();
      expect_count(toks, 3, text);
      const auto e = integer_token(toks[2]);
      if (e != 0 && e != 1) throw DomainError("dihedral reflection bit must be 0 or 1");
      return GroupElement::dihedral(integer_token(toks[1]), static_cast<int>(e));
    }
  }
  throw Error("unknown group kind");
}

std::string render_element(const GroupElement& g) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Matrix2Q>) {
          return "mat " + to_string(p.a) + " " + to_string(p.b) + " " + to_string(p.c) + " " + to_string(p.d);
        } else if constexpr (std::is_same_v<T, AffineQ>) {
          return "aff " + to_string(p.b) + " " + to_string(p.a);
        } else if constexpr (std::is_same_v<T, Perm>) {
          std::string s = "perm";
          for (auto i : p.images) s += " " + std::to_string(i);
          return s;
        } else {
          std::string s = "zvec";
          for (auto c : p.coords) s += " " + std::to_string(c);
          return s;
        }
      },
      g.payload());
}

}  // namespace hecke
