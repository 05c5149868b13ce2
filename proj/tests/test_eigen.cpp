#include "doctest.h"

#include <functional>
#include <memory>

#include "heckeraise/cli.hpp"
#include "heckeraise/eigensys.hpp"

using namespace heckeraise;

namespace {

long ap_by_counting(const long e[5], long q) {
    long count = 1;
    for (long x = 0; x < q; ++x)
        for (long y = 0; y < q; ++y) {
            long lhs = (y * y + e[0] * x * y + e[2] * y) % q;
            long rhs = (((x + e[1]) * x + e[3]) * x + e[4]) % q;
            if ((lhs - rhs) % q == 0) ++count;
        }
    return q + 1 - count;
}

const long e11a[5] = {0, -1, 1, -10, -20};
const long e37a[5] = {0, 0, 1, -1, 0};
const long e37b[5] = {0, 1, 1, -23, -50};

errc thrown_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const error& e) {
        return e.code();
    }
    return errc::internal;
}

} // namespace

TEST_CASE("sturm bound") {
    CHECK(sturm_bound(1) == 1);
    CHECK(sturm_bound(2) == 1);
    CHECK(sturm_bound(11) == 2);
    CHECK(sturm_bound(14) == 4);
    CHECK(sturm_bound(77) == 16);
}

TEST_CASE("level 11 has one rational system matching 11a") {
    auto S = std::make_shared<ModSymSpace>(11, Sign::zero);
    std::vector<long> skipped;
    auto systems = rational_eigensystems(S, &skipped);
    REQUIRE(systems.size() == 1);
    CHECK(skipped.empty());
    EigenSystem& e = systems[0];
    CHECK(e.level == 11);
    CHECK(e.bound == sturm_bound(11));
    CHECK(e.a.at(2) == -2);
    CHECK(e.source == "computed");

    e.ensure_through(13);
    CHECK(e.a.at(3) == -1);
    CHECK(e.a.at(5) == 1);
    CHECK(e.a.at(7) == -2);
    CHECK(e.a.at(11) == 1); // split multiplicative
    CHECK(e.a.at(13) == 4);
    for (long q : {2L, 3L, 5L, 7L, 13L}) CHECK(e.a.at(q) == ap_by_counting(e11a, q));

    // on-demand extension against the counting oracle
    CHECK(e.a_at(53) == -6);
    CHECK(e.a_at(97) == -7);
    CHECK(ap_by_counting(e11a, 53) == -6);
    CHECK(ap_by_counting(e11a, 97) == -7);

    // Hasse bound on everything the eigenvector produces
    for (long q : primes_up_to(100)) {
        bigint a = e.a_at(q);
        if (q != 11) CHECK(a * a <= 4 * q);
    }
}

TEST_CASE("level 37 splits into the two rational newforms") {
    auto S = std::make_shared<ModSymSpace>(37, Sign::zero);
    auto systems = rational_eigensystems(S);
    REQUIRE(systems.size() == 2);
    for (auto& e : systems) e.ensure_through(31);
    // sorted by a_2: 37a (rank 1 curve) first
    for (long q : primes_up_to(31)) {
        CHECK(systems[0].a.at(q) == ap_by_counting(e37a, q));
        CHECK(systems[1].a.at(q) == ap_by_counting(e37b, q));
    }
}

TEST_CASE("levels without rational cuspidal systems") {
    auto S1 = std::make_shared<ModSymSpace>(1, Sign::zero);
    CHECK(rational_eigensystems(S1).empty());

    // X_0(22) has genus 2 but no newforms; the old 11a block is 4-dim with
    // non-scalar U_2, so nothing splits off rationally
    auto S22 = std::make_shared<ModSymSpace>(22, Sign::zero);
    std::vector<long> skipped;
    CHECK(rational_eigensystems(S22, &skipped).empty());
    CHECK(skipped == std::vector<long>{4});
}

TEST_CASE("reduce_system wraps values into the ring") {
    auto S = std::make_shared<ModSymSpace>(11, Sign::zero);
    auto systems = rational_eigensystems(S);
    EigenSystem& e = systems[0];
    e.ensure_through(7);

    ModSystem m9 = reduce_system(e, ResidueRing(3, 2), 7);
    CHECK(m9.level == 11);
    CHECK(m9.bound == 7);
    CHECK(m9.a_mod.at(2) == 7);
    CHECK(m9.a_mod.at(3) == 8);
    CHECK(m9.a_mod.at(5) == 1);
    CHECK(m9.a_mod.at(7) == 7);

    ModSystem m3 = reduce_system(e, ResidueRing(3, 1), 7);
    for (auto [q, a] : m9.a_mod) CHECK(m3.a_mod.at(q) == a % 3);

    CHECK(thrown_code([&] { reduce_system(e, ResidueRing(3, 1), e.bound + 10); }) ==
          errc::bound_too_large);
}

TEST_CASE("eisenstein detection mod 5 on 11a") {
    auto S = std::make_shared<ModSymSpace>(11, Sign::zero);
    auto systems = rational_eigensystems(S);
    EigenSystem& e = systems[0];
    e.ensure_through(20);

    // 11a has a rational 5-torsion point: a_q = q + 1 mod 5 for all q
    ModSystem m5 = reduce_system(e, ResidueRing(5, 1), 20);
    CHECK(is_eisenstein(m5, {5, 11}, 20));
    CHECK(!residually_irreducible_screen(m5, {5, 11}, 20));

    ModSystem m3 = reduce_system(e, ResidueRing(3, 1), 20);
    CHECK(!is_eisenstein(m3, {3, 11}, 20));
    CHECK(residually_irreducible_screen(m3, {3, 11}, 20));

    // vacuously eisenstein when every prime is avoided
    CHECK(is_eisenstein(m3, {2, 3, 5, 7, 11, 13, 17, 19}, 20));
}

TEST_CASE("system files round trip") {
    auto S = std::make_shared<ModSymSpace>(11, Sign::zero);
    auto systems = rational_eigensystems(S);
    EigenSystem& e = systems[0];
    e.ensure_through(13);

    std::string text = save_system(e);
    EigenSystem u = load_system(text);
    CHECK(u.level == e.level);
    CHECK(u.bound == e.bound);
    CHECK(u.a == e.a);
    CHECK(u.source == "user");
    CHECK(u.space == nullptr);
    CHECK(save_system(u) == text);

    // user systems cannot be extended past their file bound
    CHECK(thrown_code([&] { u.ensure_through(50); }) == errc::insufficient_eigenvalues);
    // but asking within the bound is fine
    CHECK(u.a_at(13) == 4);
}

TEST_CASE("system file validation") {
    CHECK(thrown_code([] { load_system("not json"); }) == errc::parse_error);
    // q = 4 is not prime
    CHECK(thrown_code([] {
              load_system(R"({"bound":"4","level":"11","pairs":[["2","-2"],["3","-1"],["4","0"]]})");
          }) == errc::parse_error);
    // missing a_3 below the declared bound
    CHECK(thrown_code([] {
              load_system(R"({"bound":"4","level":"11","pairs":[["2","-2"]]})");
          }) == errc::coverage_gap);
}
