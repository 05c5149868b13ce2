#include "heckeraise/arith.hpp"

#include <algorithm>
#include <numeric>

namespace heckeraise {

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return (uint64_t)((__uint128_t)a * b % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                       23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    // Deterministic Miller-Rabin for 64-bit inputs with the first twelve
    // prime bases (Sorenson-Webster).
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                       23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<long> primes_up_to(long bound) {
    std::vector<long> out;
    if (bound < 2) return out;
    std::vector<bool> sieve(bound + 1, true);
    for (long i = 2; i <= bound; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (long j = i * i; j <= bound; j += i) sieve[j] = false;
    }
    return out;
}

std::vector<long> prime_factors(long n) {
    std::vector<long> out;
    if (n < 0) n = -n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

std::vector<long> divisors(long n) {
    std::vector<long> out;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            if (d != n / d) out.push_back(n / d);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

long xgcd(long a, long b, long& x, long& y) {
    long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        long q = a / b;
        long t = a - q * b; a = b; b = t;
        t = x0 - q * x1; x0 = x1; x1 = t;
        t = y0 - q * y1; y0 = y1; y1 = t;
    }
    if (a < 0) { a = -a; x0 = -x0; y0 = -y0; }
    x = x0; y = y0;
    return a;
}

long gcd_ll(long a, long b) { return std::gcd(a, b); }

long euler_phi(long n) {
    long r = n;
    for (long p : prime_factors(n)) r = r / p * (p - 1);
    return r;
}

int legendre_minus_one(long p) { return p % 4 == 1 ? 1 : -1; }

int legendre_minus_three(long p) { return p % 3 == 1 ? 1 : -1; }

ResidueRing::ResidueRing(uint64_t ell_, int n_) : ell(ell_), n(n_) {
    if (!is_prime(ell)) throw error(errc::not_prime, "ell = " + std::to_string(ell));
    if (n < 1) throw error(errc::bad_exponent, "n = " + std::to_string(n));
    __uint128_t m = 1;
    for (int i = 0; i < n; ++i) {
        m *= ell;
        if (m >= ((__uint128_t)1 << 63))
            throw error(errc::bad_exponent, "ell^n does not fit in 63 bits");
    }
    modulus = (uint64_t)m;
}

std::pair<int, uint64_t> ResidueRing::val_unit(uint64_t x) const {
    x %= modulus;
    if (x == 0) return {n, 1};
    int v = 0;
    while (x % ell == 0) { x /= ell; ++v; }
    return {v, x};
}

uint64_t ResidueRing::inv(uint64_t x) const {
    x %= modulus;
    long ix, iy;
    long g = xgcd((long)x, (long)modulus, ix, iy);
    if (g != 1) throw error(errc::internal, "inv of non-unit " + std::to_string(x));
    return reduce(ix);
}

uint64_t ResidueRing::pow_ell(int v) const {
    uint64_t r = 1;
    for (int i = 0; i < v; ++i) r *= ell;
    return r;
}

P1Table::P1Table(long M) : M_(M) {
    if (M < 1) throw error(errc::bad_level, "M = " + std::to_string(M));
    if (M == 1) {
        reps_ = {{0, 0}};
        use_table_ = true;
        table_ = {0};
        return;
    }
    // Representatives in lex order: (0,1), then (g,d) for divisors g of M
    // with the self-normalized pairs picked out.
    reps_.emplace_back(0, 1);
    for (long g : divisors(M)) {
        if (g == M) continue;
        for (long d = 0; d < M; ++d) {
            if (std::gcd(g, d) != 1) continue;
            if (normalize(g, d) == std::make_pair(g, d)) reps_.emplace_back(g, d);
        }
    }

    use_table_ = M <= 4096;
    if (use_table_) {
        table_.assign(M * M, -1);
        // Fill via the unit orbit of each representative; entry count is
        // exactly the number of coprime pairs.
        std::vector<long> units;
        for (long u = 1; u < M; ++u)
            if (std::gcd(u, M) == 1) units.push_back(u);
        for (long i = 0; i < (long)reps_.size(); ++i) {
            auto [c, d] = reps_[i];
            for (long u : units)
                table_[(u * c % M) * M + (u * d % M)] = (int32_t)i;
        }
    } else {
        map_.reserve(reps_.size() * 2);
        for (long i = 0; i < (long)reps_.size(); ++i)
            map_[(uint64_t)reps_[i].first * M + reps_[i].second] = (int32_t)i;
    }
}

std::pair<long, long> P1Table::normalize(long c, long d) const {
    long M = M_;
    if (M == 1) return {0, 0};
    c %= M; if (c < 0) c += M;
    d %= M; if (d < 0) d += M;
    if (std::gcd(std::gcd(c, M), d) != 1)
        throw error(errc::not_on_p1, "(" + std::to_string(c) + ":" + std::to_string(d) +
                                         ") mod " + std::to_string(M));
    if (c == 0) return {0, 1};
    long g = std::gcd(c, M);
    long Mg = M / g;
    long x, y;
    xgcd((c / g) % Mg, Mg, x, y);
    long u0 = x % Mg; if (u0 < 0) u0 += Mg;
    // Scalars sending c to g are u0 + j*Mg; take the unit ones and minimize
    // the second coordinate.
    long best = -1;
    for (long j = 0; j < g; ++j) {
        long lam = (u0 + j * Mg) % M;
        if (std::gcd(lam, M) != 1) continue;
        long dd = lam * d % M;
        if (best < 0 || dd < best) best = dd;
    }
    return {g, best};
}

long P1Table::try_index(long c, long d) const {
    long M = M_;
    if (M == 1) return 0;
    c %= M; if (c < 0) c += M;
    d %= M; if (d < 0) d += M;
    if (use_table_) return table_[c * M + d];
    if (std::gcd(std::gcd(c, M), d) != 1) return -1;
    auto nm = normalize(c, d);
    auto it = map_.find((uint64_t)nm.first * M + nm.second);
    return it == map_.end() ? -1 : it->second;
}

long P1Table::index(long c, long d) const {
    long M = M_;
    if (M == 1) return 0;
    c %= M; if (c < 0) c += M;
    d %= M; if (d < 0) d += M;
    if (use_table_) {
        int32_t i = table_[c * M + d];
        if (i < 0)
            throw error(errc::not_on_p1, "(" + std::to_string(c) + ":" +
                                             std::to_string(d) + ") mod " + std::to_string(M));
        return i;
    }
    auto nm = normalize(c, d);
    auto it = map_.find((uint64_t)nm.first * M + nm.second);
    if (it == map_.end()) throw error(errc::internal, "normalize missed rep table");
    return it->second;
}

} // namespace heckeraise
