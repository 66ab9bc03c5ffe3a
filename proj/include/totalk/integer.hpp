#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace totalk {

using Integer = mpz_class;
using Rational = mpq_class;

// 2-adic valuation of a nonzero integer.
unsigned long two_adic_valuation(const Integer& n);

// Odd part of a positive integer: l_n in the sense n = 2^v * l_n.
Integer odd_part(const Integer& n);
long odd_part(long n);

// Odd part of j!, computed as a product of odd parts.
const Integer& odd_part_factorial(long j);

// Canonical residue in [0, m) for m > 0.
Integer mod_floor(const Integer& a, const Integer& m);

// Inverse of a modulo m (gcd(a, m) must be 1, m > 0).
Integer mod_inverse(const Integer& a, const Integer& m);

bool is_dyadic(const Rational& q);

// Image of a dyadic rational in Z_m for odd m.
Integer dyadic_mod(const Rational& q, const Integer& m);

std::string to_string(const Integer& n);
std::string to_string(const Rational& q);

// Parses "a", "-a" or "a/b"; throws std::invalid_argument.
Rational parse_rational(const std::string& text);

}  // namespace totalk
