#include "doctest.h"

#include <numeric>
#include <vector>

#include "heckeraise/modsym.hpp"

using namespace heckeraise;

namespace {

// row i of M, as integers
std::vector<bigint> row_of(const MatrixZ& M, long i) {
    std::vector<bigint> r(M.ncols());
    for (long j = 0; j < M.ncols(); ++j) r[j] = M.at(i, j);
    return r;
}

std::vector<bigint> add_rows(std::vector<bigint> a, const std::vector<bigint>& b) {
    for (size_t j = 0; j < a.size(); ++j) a[j] += b[j];
    return a;
}

bool all_zero(const std::vector<bigint>& a) {
    for (const bigint& x : a)
        if (x != 0) return false;
    return true;
}

} // namespace

TEST_CASE("genus data spot values") {
    // classical table for X_0(M) (Cremona, table 2 flavor)
    struct Row {
        long M, psi, nu2, nu3, nu_inf, genus;
    };
    const Row table[] = {
        {1, 1, 1, 1, 1, 0},    {2, 3, 1, 0, 2, 0},   {6, 12, 0, 0, 4, 0},
        {11, 12, 0, 0, 2, 1},  {12, 24, 0, 0, 6, 0}, {15, 24, 0, 0, 4, 1},
        {23, 24, 0, 0, 2, 2},  {37, 38, 2, 2, 2, 2}, {49, 56, 0, 2, 8, 1},
        {50, 90, 2, 0, 12, 2}, {77, 96, 0, 0, 4, 7}, {97, 98, 2, 2, 2, 7},
        {121, 132, 0, 0, 12, 6},
    };
    for (const Row& r : table) {
        GenusData g = genus_data(r.M);
        CHECK(g.level == r.M);
        CHECK(g.psi == r.psi);
        CHECK(g.nu2 == r.nu2);
        CHECK(g.nu3 == r.nu3);
        CHECK(g.nu_inf == r.nu_inf);
        CHECK(g.genus == r.genus);
    }
}

TEST_CASE("genus formula consistency across levels") {
    for (long M = 1; M <= 200; ++M) {
        GenusData g = genus_data(M);
        // 12g = 12 + psi - 3 nu2 - 4 nu3 - 6 nu_inf
        CHECK(12 * g.genus == 12 + g.psi - 3 * g.nu2 - 4 * g.nu3 - 6 * g.nu_inf);
        CHECK(g.nu_inf >= 1);
        if (M > 3) CHECK(g.nu_inf >= 2);
    }
}

TEST_CASE("space dimensions track the genus") {
    for (long M : {1L, 2L, 6L, 11L, 12L, 15L, 23L, 30L, 37L, 49L, 50L}) {
        GenusData g = genus_data(M);
        ModSymSpace s0(M, Sign::zero);
        CHECK(s0.dim() == 2 * g.genus + g.nu_inf - 1);
        CHECK(s0.cuspidal_dim() == 2 * g.genus);
        CHECK(s0.cusp_class_count() == g.nu_inf);
        CHECK(s0.projection().nrows() == s0.p1().size());
        CHECK(s0.projection().ncols() == s0.dim());

        ModSymSpace sp(M, Sign::plus);
        CHECK(sp.cuspidal_dim() == g.genus);
        CHECK(sp.dim() >= g.genus);
        CHECK(sp.dim() <= s0.dim());
    }
}

TEST_CASE("manin relations hold in public coordinates") {
    for (auto sign : {Sign::zero, Sign::plus}) {
        ModSymSpace s(30, sign);
        const P1Table& p1 = s.p1();
        const MatrixZ& pr = s.projection();
        for (long x = 0; x < p1.size(); ++x) {
            auto [c, d] = p1.rep(x);
            long xs = p1.index(d, -c);
            long xt = p1.index(d, -c - d);
            long xt2 = p1.index(-c - d, c);
            // x + xS = 0
            CHECK(all_zero(add_rows(row_of(pr, x), row_of(pr, xs))));
            // x + xT + xT^2 = 0
            CHECK(all_zero(add_rows(add_rows(row_of(pr, x), row_of(pr, xt)),
                                    row_of(pr, xt2))));
            if (sign == Sign::plus) {
                long xi = p1.index(-c, d);
                CHECK(row_of(pr, xi) == row_of(pr, x));
            }
        }
    }
}

TEST_CASE("basis lattice is the full integer span of generator images") {
    ModSymSpace s(34, Sign::zero);
    // W/k rows express the surviving generators; projection must be the
    // integer coordinates of every generator, so stacking recovers Z^dim
    HnfBuilder h(s.dim(), false);
    const MatrixZ& pr = s.projection();
    for (long x = 0; x < pr.nrows(); ++x) h.insert(row_of(pr, x));
    CHECK(h.result() == MatrixZ::identity(s.dim()));
    CHECK((long)s.surviving().size() >= s.dim());
    CHECK(s.basis_w().nrows() == s.dim());
    CHECK(s.basis_den() >= 1);
}

TEST_CASE("cuspidal lattice is the saturated kernel of the boundary") {
    for (auto [M, sign] : std::vector<std::pair<long, Sign>>{
             {30, Sign::zero}, {11, Sign::zero}, {77, Sign::plus}}) {
        ModSymSpace s(M, sign);
        const MatrixZ& C = s.cuspidal();
        CHECK(C.ncols() == s.dim());
        CHECK(C.to_rational().mul(s.boundary()).is_zero());
        CHECK(s.boundary().nrows() == s.dim());
        CHECK(s.boundary().ncols() == s.cusp_class_count());
        // boundary image = degree-zero divisors, so rank is classes - 1
        CHECK(rank_q(s.boundary()) == s.cusp_class_count() - 1);
        CHECK(C.nrows() == s.dim() - rank_q(s.boundary()));
        for (const bigint& d : elementary_divisors(C)) CHECK(d == 1);
        CHECK(hnf(C) == C);
    }
}

TEST_CASE("cusp equivalence partitions reduced fractions into nu_inf classes") {
    for (long M : {4L, 11L, 12L, 30L, 49L}) {
        // every cusp class has a representative here (c | M suffices)
        std::vector<Cusp> cusps{{1, 0}};
        for (long c = 1; c <= M; ++c)
            for (long a = 0; a < c; ++a)
                if (std::gcd(a, c) == 1) cusps.push_back({a, c});
        std::vector<int> cls((long)cusps.size(), -1);
        int k = 0;
        for (size_t i = 0; i < cusps.size(); ++i) {
            if (cls[i] >= 0) continue;
            cls[i] = k;
            for (size_t j = i + 1; j < cusps.size(); ++j)
                if (cls[j] < 0 && cusps_equivalent(M, cusps[i], cusps[j]))
                    cls[j] = k;
            ++k;
        }
        CHECK(k == genus_data(M).nu_inf);
        // symmetry spot check
        CHECK(cusps_equivalent(M, cusps[0], cusps[0]));
    }
    CHECK(cusps_equivalent(1, Cusp{1, 0}, Cusp{0, 1}));
    CHECK(!cusps_equivalent(11, Cusp{1, 0}, Cusp{0, 1}));
    CHECK(cusps_equivalent(4, Cusp{1, 2}, Cusp{3, 2}));
}

TEST_CASE("lift lands in SL2(Z) over the requested class") {
    for (long M : {1L, 13L, 30L}) {
        ModSymSpace s(M, Sign::zero);
        const P1Table& p1 = s.p1();
        for (long i = 0; i < p1.size(); ++i) {
            Mat22 L = s.lift(i);
            CHECK(L.a * L.d - L.b * L.c == 1);
            CHECK(p1.index(L.c, L.d) == i);
        }
    }
}

TEST_CASE("serialize round trip is byte identical") {
    for (auto [M, sign] : std::vector<std::pair<long, Sign>>{
             {30, Sign::zero}, {77, Sign::plus}, {1, Sign::zero}}) {
        ModSymSpace s(M, sign);
        std::string blob = s.serialize();
        ModSymSpace t = ModSymSpace::deserialize(blob);
        CHECK(t.serialize() == blob);
        CHECK(t.level() == s.level());
        CHECK(t.sign() == s.sign());
        CHECK(t.dim() == s.dim());
        CHECK(t.fingerprint() == s.fingerprint());
        CHECK(t.projection() == s.projection());
        CHECK(t.cuspidal() == s.cuspidal());
        CHECK(t.basis_den() == s.basis_den());
    }
    CHECK_THROWS_AS(ModSymSpace::deserialize("modsym nonsense"), error);
}

TEST_CASE("fingerprints pin the presentation") {
    // frozen so accidental changes to basis selection or the serialization
    // format are loud; bump versions deliberately if these move
    ModSymSpace a(11, Sign::zero);
    CHECK(a.fingerprint() ==
          "4f1b9893451a8f6c3038eef6fa06757a4d2b07ada3f0bed3e7aa30b86af0c9f8");
    ModSymSpace b(77, Sign::plus);
    CHECK(b.fingerprint() ==
          "492f800be7602a71ea8be28bab3363923bf99db1dc88f89ce55eba3562ed20f7");
    CHECK(ModSymSpace(11, Sign::zero).fingerprint() == a.fingerprint());
}
