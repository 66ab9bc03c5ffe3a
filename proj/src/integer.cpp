#include "totalk/integer.hpp"

#include <mutex>
#include <stdexcept>

namespace totalk {

unsigned long two_adic_valuation(const Integer& n) {
  if (n == 0) throw std::invalid_argument("two_adic_valuation of zero");
  return mpz_scan1(n.get_mpz_t(), 0);
}

Integer odd_part(const Integer& n) {
  if (n <= 0) throw std::invalid_argument("odd_part needs a positive integer");
  Integer r;
  mpz_tdiv_q_2exp(r.get_mpz_t(), n.get_mpz_t(), two_adic_valuation(n));
  return r;
}

long odd_part(long n) {
  if (n <= 0) throw std::invalid_argument("odd_part needs a positive integer");
  while (n % 2 == 0) n /= 2;
  return n;
}

const Integer& odd_part_factorial(long j) {
  static std::mutex lock;
  static std::vector<Integer> cache{Integer(1)};
  if (j < 0) throw std::invalid_argument("odd_part_factorial of a negative number");
  std::lock_guard guard(lock);
  while (static_cast<long>(cache.size()) <= j) {
    long i = static_cast<long>(cache.size());
    cache.push_back(cache.back() * odd_part(i));
  }
  return cache[j];
}

Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer mod_inverse(const Integer& a, const Integer& m) {
  if (m == 1) return 0;
  Integer r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::domain_error("no inverse of " + to_string(a) + " mod " + to_string(m));
  return r;
}

bool is_dyadic(const Rational& q) {
  const Integer& d = q.get_den();
  return mpz_popcount(d.get_mpz_t()) == 1;
}

Integer dyadic_mod(const Rational& q, const Integer& m) {
  if (!is_dyadic(q)) throw std::domain_error("not a dyadic rational: " + to_string(q));
  return mod_floor(q.get_num() * mod_inverse(q.get_den(), m), m);
}

std::string to_string(const Integer& n) { return n.get_str(); }

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& text) {
  auto valid = [](const std::string& s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto slash = text.find('/');
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (!valid(num, true) || !valid(den, false)) throw std::invalid_argument("not a rational: " + text);
  if (num[0] == '+') num = num.substr(1);
  Integer d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: " + text);
  Rational q(Integer(num), d);
  q.canonicalize();
  return q;
}

}  // namespace totalk
