#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace lgs {

// Exact rational arithmetic. All coefficients, constants and model values in
// the library are mpq_class; nothing is ever rounded to floating point.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long n) { return Rat(n); }
inline Rat rat(long n, long d) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int rat_floor(const Rat& r) {
  return floor_div(Int(r.get_num()), Int(r.get_den()));
}

inline Int rat_ceil(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

inline Int int_gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int int_lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

// Euclidean remainder in [0, |b|).
inline Int int_mod(const Int& a, const Int& b) {
  Int m;
  Int ab = abs(b);
  mpz_fdiv_r(m.get_mpz_t(), a.get_mpz_t(), ab.get_mpz_t());
  return m;
}

inline Int rat_num(const Rat& r) { return Int(r.get_num()); }
inline Int rat_den(const Rat& r) { return Int(r.get_den()); }
inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Parses "7", "-3", "1.25", "1.9999999999999999999" or "p/q" exactly.
std::optional<Rat> parse_rational(const std::string& text);

// Prints as integer when the denominator is 1, else "p/q".
std::string rat_to_string(const Rat& r);

}  // namespace lgs
