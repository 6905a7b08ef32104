#include "hecke/rational.hpp"

#include <cctype>

namespace hecke {

namespace {

bool valid_integer_text(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

bool try_parse_rational(std::string_view text, Rational& out) {
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!valid_integer_text(num, true) || !valid_integer_text(den, false)) return false;
  std::string n(num);
  if (n[0] == '+') n.erase(0, 1);
  mpz_class zn(n, 10), zd(std::string(den), 10);
  if (zd == 0) return false;
  out = Rational(zn, zd);
  out.canonicalize();
  return true;
}

std::string to_string(const Rational& q) { return q.get_str(); }

mpz_class floor_of(const Rational& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational mod_positive(const Rational& q, const Rational& m) {
  Rational ratio = q / m;
  Rational r = q - Rational(floor_of(ratio)) * m;
  r.canonicalize();
  return r;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

bool is_power_of(const mpz_class& n, unsigned long p) {
  if (n <= 0) return false;
  if (p < 2) return n == 1;
  mpz_class m = n;
  while (m != 1) {
    if (mpz_divisible_ui_p(m.get_mpz_t(), p) == 0) return false;
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
  }
  return true;
}

bool in_z_localized(const Rational& q, unsigned long p) { return is_power_of(q.get_den(), p); }

bool is_power_of_rational(const Rational& q, unsigned long p) {
  if (q <= 0) return false;
  return (q.get_num() == 1 && is_power_of(q.get_den(), p)) ||
         (q.get_den() == 1 && is_power_of(q.get_num(), p));
}

}  // namespace hecke
