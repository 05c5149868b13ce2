#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "heckeraise/errors.hpp"

namespace heckeraise {

bool is_prime(uint64_t n);
std::vector<long> primes_up_to(long bound);
std::vector<long> prime_factors(long n);
std::vector<long> divisors(long n);

// Extended gcd: returns g = gcd(a,b) and x,y with a*x + b*y = g.
long xgcd(long a, long b, long& x, long& y);
long gcd_ll(long a, long b);

// Euler phi.
long euler_phi(long n);

// Kronecker-style shortcuts used by the genus formula.
int legendre_minus_one(long p); // (-1/p) for odd prime p
int legendre_minus_three(long p); // (-3/p) via p mod 3, valid for p != 3

// Arithmetic in Z/ell^n.  modulus must fit in a signed 64-bit word so
// products are safe in __uint128_t.
struct ResidueRing {
    uint64_t ell;
    int n;
    uint64_t modulus; // ell^n

    ResidueRing(uint64_t ell_, int n_);

    uint64_t reduce(long x) const {
        long m = (long)modulus;
        long r = x % m;
        if (r < 0) r += m;
        return (uint64_t)r;
    }
    uint64_t add(uint64_t a, uint64_t b) const {
        uint64_t s = a + b;
        return s >= modulus ? s - modulus : s;
    }
    uint64_t sub(uint64_t a, uint64_t b) const {
        return a >= b ? a - b : a + modulus - b;
    }
    uint64_t neg(uint64_t a) const { return a == 0 ? 0 : modulus - a; }
    uint64_t mul(uint64_t a, uint64_t b) const {
        return (uint64_t)((__uint128_t)a * b % modulus);
    }
    // Writes x = ell^v * u with u a unit (v = n, u = 1 for x = 0).
    std::pair<int, uint64_t> val_unit(uint64_t x) const;
    bool is_unit(uint64_t x) const { return x % ell != 0; }
    uint64_t inv(uint64_t x) const; // requires unit
    uint64_t pow_ell(int v) const;  // ell^v for 0 <= v <= n
};

// P^1(Z/M) with lex-least representatives.  index() is the hot path in
// Hecke application, so for moderate M a full M*M lookup table is built.
class P1Table {
public:
    explicit P1Table(long M);

    long M() const { return M_; }
    long size() const { return (long)reps_.size(); }
    const std::pair<long, long>& rep(long i) const { return reps_[i]; }

    // Index of the class of (c:d); requires gcd(c,d,M)=1 after reduction.
    long index(long c, long d) const;
    // Like index() but returns -1 off P^1 (the Hecke skip rule).
    long try_index(long c, long d) const;
    // Lex-least representative of the class of (c:d).
    std::pair<long, long> normalize(long c, long d) const;

private:
    long M_;
    std::vector<std::pair<long, long>> reps_;
    std::vector<int32_t> table_; // full M*M table when small enough
    std::unordered_map<uint64_t, int32_t> map_; // fallback
    bool use_table_;
};

} // namespace heckeraise
