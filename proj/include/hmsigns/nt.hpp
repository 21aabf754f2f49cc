#pragma once

// Word-size modular arithmetic and integer factorization helpers shared by
// the field, character and point-counting code.

#include <cstdint>
#include <utility>
#include <vector>

#include "hmsigns/rational.hpp"

namespace hmsigns::nt {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Deterministic for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// All primes <= limit, ascending.
std::vector<std::int64_t> primes_up_to(std::int64_t limit);

/// Reduces an arbitrary integer into [0, m).
std::int64_t mod(const Integer& a, std::int64_t m);
inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

/// Legendre symbol (a/p) for odd prime p via Euler's criterion.
int legendre(std::int64_t a, std::int64_t p);

/// Some x with x^2 = a (mod p), for odd prime p and a a nonzero residue.
std::int64_t sqrt_mod(std::int64_t a, std::int64_t p);

/// p-adic valuation of a nonzero integer.
int valuation(const Integer& n, std::int64_t p);

/// Prime factorization of |n| (n != 0), ascending primes.
std::vector<std::pair<Integer, int>> factor(const Integer& n);

}  // namespace hmsigns::nt
