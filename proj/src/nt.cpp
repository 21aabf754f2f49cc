#include "hmsigns/nt.hpp"

#include <algorithm>
#include <map>

#include "hmsigns/errors.hpp"

namespace hmsigns::nt {

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These witnesses are sufficient below 2^64.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::int64_t> primes_up_to(std::int64_t limit) {
  std::vector<std::int64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= limit; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  return out;
}

std::int64_t mod(const Integer& a, std::int64_t m) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(m));
  return static_cast<std::int64_t>(r.get_ui());
}

int legendre(std::int64_t a, std::int64_t p) {
  const auto r = static_cast<std::uint64_t>(mod(a, p));
  if (r == 0) return 0;
  const auto e = powmod(r, static_cast<std::uint64_t>(p - 1) / 2, static_cast<std::uint64_t>(p));
  return e == 1 ? 1 : -1;
}

std::int64_t sqrt_mod(std::int64_t a, std::int64_t p) {
  const auto P = static_cast<std::uint64_t>(p);
  const auto n = static_cast<std::uint64_t>(mod(a, p));
  if (n == 0) return 0;
  if (legendre(static_cast<std::int64_t>(n), p) != 1) {
    throw Error(ErrorCode::InvalidArgument, "sqrt_mod of a non-residue");
  }
  if (p % 4 == 3) return static_cast<std::int64_t>(powmod(n, (P + 1) / 4, P));

  // Tonelli-Shanks
  std::uint64_t q = P - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  std::uint64_t z = 2;
  while (legendre(static_cast<std::int64_t>(z), p) != -1) ++z;
  std::uint64_t c = powmod(z, q, P);
  std::uint64_t x = powmod(n, (q + 1) / 2, P);
  std::uint64_t t = powmod(n, q, P);
  int m = s;
  while (t != 1) {
    int i = 1;
    std::uint64_t t2 = mulmod(t, t, P);
    while (t2 != 1) {
      t2 = mulmod(t2, t2, P);
      ++i;
    }
    std::uint64_t b = c;
    for (int j = 0; j < m - i - 1; ++j) b = mulmod(b, b, P);
    x = mulmod(x, b, P);
    c = mulmod(b, b, P);
    t = mulmod(t, c, P);
    m = i;
  }
  return static_cast<std::int64_t>(x);
}

int valuation(const Integer& n, std::int64_t p) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "valuation of zero");
  Integer m = n;
  int v = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

namespace {

// Pollard-Brent on a composite with no small factors.
Integer find_factor(const Integer& n) {
  for (unsigned long c = 1;; ++c) {
    Integer y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1;
    const unsigned long m = 128;
    auto f = [&](const Integer& v) {
      Integer out = v * v + c;
      out %= n;
      return out;
    };
    while (g == 1) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      while (k < r && g == 1) {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = (q * abs(x - y)) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      }
      r *= 2;
    }
    if (g == n) {
      do {
        ys = f(ys);
        Integer diff = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(Integer n, std::map<Integer, int>& out) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 40) > 0) {
    ++out[n];
    return;
  }
  Integer d = find_factor(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

std::vector<std::pair<Integer, int>> factor(const Integer& n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "factor of zero");
  Integer m = abs(n);
  std::map<Integer, int> found;
  for (unsigned long p = 2; p < 100000 && m > 1; ++p) {
    if (Integer(p) * p > m) break;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      ++found[Integer(p)];
    }
  }
  factor_into(m, found);
  return {found.begin(), found.end()};
}

}  // namespace hmsigns::nt
