#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace hecke {

using Rational = mpq_class;

/// Parses "n" or "n/d" (optional sign on n) into a canonical rational.
/// Returns false on malformed text or a zero denominator.
bool try_parse_rational(std::string_view text, Rational& out);

std::string to_string(const Rational& q);

/// floor(q) as an integer.
mpz_class floor_of(const Rational& q);

/// q - floor(q / m) * m, the representative of q modulo m in [0, m). m > 0.
Rational mod_positive(const Rational& q, const Rational& m);

bool is_integer(const Rational& q);

/// True when n > 0 is p^k for some k >= 0.
bool is_power_of(const mpz_class& n, unsigned long p);

/// True when the reduced denominator of q is a power of p (q in Z[1/p]).
bool in_z_localized(const Rational& q, unsigned long p);

/// True when q = p^k for some integer k (possibly negative).
bool is_power_of_rational(const Rational& q, unsigned long p);

}  // namespace hecke
