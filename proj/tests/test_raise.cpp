#include "doctest.h"

#include <algorithm>
#include <memory>
#include <set>

#include "json.hpp"

#include "heckeraise/heckeop.hpp"
#include "heckeraise/raise.hpp"

using namespace heckeraise;

namespace {

EigenSystem system_11a() {
    auto S = std::make_shared<ModSymSpace>(11, Sign::zero);
    auto systems = rational_eigensystems(S);
    REQUIRE(systems.size() == 1);
    return std::move(systems[0]);
}

bool report_has(const VerifyReport& r, const std::string& name, bool pass) {
    for (const auto& c : r.checks)
        if (c.name == name) return c.pass == pass;
    return false;
}

} // namespace

TEST_CASE("raising primes for 11a mod 3") {
    EigenSystem e = system_11a();
    auto ps = raising_primes(e, ResidueRing(3, 1), 200, false);
    auto has = [&](long p, int s) {
        return std::find(ps.begin(), ps.end(), std::make_pair(p, s)) != ps.end();
    };
    CHECK(has(7, -1));
    CHECK(has(13, -1));
    CHECK(has(29, 1));
    CHECK(has(29, -1)); // a_29 = 0, both signs qualify mod 3
    CHECK(has(31, -1));
    CHECK(!has(7, 1));
    std::set<long> distinct;
    for (auto [p, s] : ps) {
        distinct.insert(p);
        CHECK(p % 3 != 0);
        CHECK(p != 11);
    }
    CHECK(distinct.size() >= 5);
    // sorted by p, + before - at equal p
    for (size_t i = 1; i < ps.size(); ++i)
        CHECK((ps[i - 1].first < ps[i].first ||
               (ps[i - 1].first == ps[i].first && ps[i - 1].second > ps[i].second)));

    // ell itself only on request
    auto with_ell = raising_primes(e, ResidueRing(3, 1), 10, true);
    CHECK(std::find(with_ell.begin(), with_ell.end(), std::make_pair(3L, -1)) !=
          with_ell.end());
    CHECK(std::find(ps.begin(), ps.end(), std::make_pair(3L, -1)) == ps.end());
}

TEST_CASE("certify and verify the first raising instance of 11a") {
    EigenSystem e = system_11a();
    RaiseCertificate cert = certify(e, 7, ResidueRing(3, 1), -1, Sign::plus);

    CHECK(cert.level == 11);
    CHECK(cert.p == 7);
    CHECK(cert.ell == 3);
    CHECK(cert.n == 1);
    CHECK(cert.sign == -1);
    CHECK(cert.space_sign == Sign::plus);
    CHECK(cert.bound == 16); // sturm bound at 77
    CHECK(cert.ap_mod == 1); // a_7 = -2
    CHECK(cert.up_eigenvalue == 2);
    CHECK(cert.screen == "passed");
    REQUIRE(!cert.eigenvalues.empty());
    CHECK(cert.eigenvalues.front() == std::make_pair(2L, (uint64_t)1));
    for (auto [q, a] : cert.eigenvalues) CHECK(q != 7);
    CHECK(cert.eigenvalues.size() == 5); // q = 2, 3, 5, 11, 13

    VerifyReport rep = verify(cert);
    CHECK(rep.ok());
    CHECK(rep.checks.size() == 10);
    for (const char* name :
         {"parameters", "hypothesis", "sturm_bound", "coverage", "basis_fingerprint",
          "witness_shape", "witness_primitive", "eigen_equations", "up_equation",
          "screen"})
        CHECK(report_has(rep, name, true));

    // determinism: a fresh run byte-reproduces the certificate
    EigenSystem e2 = system_11a();
    CHECK(certify(e2, 7, ResidueRing(3, 1), -1, Sign::plus).to_json() == cert.to_json());

    // round trip
    RaiseCertificate back = RaiseCertificate::from_json(cert.to_json());
    CHECK(back.to_json() == cert.to_json());
}

TEST_CASE("certify rejects a wrong hypothesis sign") {
    EigenSystem e = system_11a();
    try {
        certify(e, 7, ResidueRing(3, 1), 1, Sign::plus);
        FAIL("expected hypothesis_failed");
    } catch (const error& err) {
        CHECK(err.code() == errc::hypothesis_failed);
    }
}

TEST_CASE("eisenstein screen blocks mod 5 unless overridden") {
    EigenSystem e = system_11a();
    try {
        certify(e, 23, ResidueRing(5, 1), 1, Sign::plus);
        FAIL("expected screen_failed");
    } catch (const error& err) {
        CHECK(err.code() == errc::screen_failed);
    }
    EigenSystem e2 = system_11a();
    RaiseCertificate cert = certify(e2, 23, ResidueRing(5, 1), 1, Sign::plus, true);
    CHECK(cert.screen == "overridden");
    CHECK(verify(cert).ok());
}

TEST_CASE("verification catches tampering") {
    EigenSystem e = system_11a();
    RaiseCertificate cert = certify(e, 7, ResidueRing(3, 1), -1, Sign::plus);

    RaiseCertificate bad = cert;
    bad.eigenvalues[0].second = (bad.eigenvalues[0].second + 1) % 3;
    VerifyReport rep = verify(bad);
    CHECK(!rep.ok());
    CHECK(report_has(rep, "eigen_equations", false));

    bad = cert;
    bad.basis_fingerprint[0] = bad.basis_fingerprint[0] == 'f' ? '0' : 'f';
    CHECK(report_has(verify(bad), "basis_fingerprint", false));

    bad = cert;
    bad.up_eigenvalue = 1;
    rep = verify(bad);
    CHECK(!rep.ok());

    bad = cert;
    bad.screen = "overridden"; // claims an override that did not happen
    CHECK(report_has(verify(bad), "screen", false));
}

TEST_CASE("a mod 9 witness reduces to a mod 3 eigenvector") {
    EigenSystem e = system_11a();
    RaiseCertificate cert = certify_auto(e, 13, ResidueRing(3, 2), -1);
    CHECK(verify(cert).ok());

    // primitivity scaling: multiplying the witness by ell kills it
    RaiseCertificate scaled = cert;
    for (auto& w : scaled.witness) w = (w * 3) % 9;
    VerifyReport rep = verify(scaled);
    CHECK(report_has(rep, "witness_primitive", false));

    // the reduced witness satisfies the same equations mod 3
    auto small = std::make_shared<ModSymSpace>(11, cert.space_sign);
    auto big = std::make_shared<ModSymSpace>(11 * 13, cert.space_sign);
    MatrixZ V = pnew_lattice(*big, *small, 13);
    REQUIRE(V.nrows() == (long)cert.witness.size());
    ResidueRing r3(3, 1);
    std::vector<uint64_t> z(big->dim(), 0);
    bool nonzero = false;
    for (long j = 0; j < big->dim(); ++j) {
        __uint128_t acc = 0;
        for (long i = 0; i < V.nrows(); ++i)
            acc += (cert.witness[i] % 3) *
                   (__uint128_t)mpz_fdiv_ui(V.at(i, j).get_mpz_t(), 3);
        z[j] = (uint64_t)(acc % 3);
        if (z[j]) nonzero = true;
    }
    CHECK(nonzero);
    OpApplier app(big, r3);
    for (auto [q, a] : cert.eigenvalues) {
        if (q > 7) break; // a few primes suffice here
        auto y = app.apply(z, q);
        for (long j = 0; j < big->dim(); ++j) CHECK(y[j] == r3.mul(a % 3, z[j]));
    }
    auto y13 = app.apply(z, 13);
    for (long j = 0; j < big->dim(); ++j) CHECK(y13[j] == r3.neg(z[j]));
}

TEST_CASE("narrowing failure reports its progress") {
    EigenSystem e = system_11a();
    // a_13 = 4 = 13 + 1 mod 5, but no 13-new form at 143 is congruent to 11a
    try {
        certify(e, 13, ResidueRing(5, 1), 1, Sign::plus, true);
        FAIL("expected no_witness");
    } catch (const no_witness_error& err) {
        CHECK(err.last_prime() >= 2);
        CHECK(err.generators_left() >= 0);
        CHECK(std::string(err.what()).find("stages") != std::string::npos);
    }

    // a degenerate variant: the 2-new lattice at 22 is zero outright
    EigenSystem e2 = system_11a();
    try {
        certify(e2, 2, ResidueRing(5, 1), 1, Sign::plus, true);
        FAIL("expected no_witness");
    } catch (const no_witness_error& err) {
        CHECK(err.generators_left() == 0);
    }
}

TEST_CASE("certificate parsing is strict") {
    EigenSystem e = system_11a();
    std::string text = certify(e, 7, ResidueRing(3, 1), -1, Sign::plus).to_json();

    auto j = nlohmann::json::parse(text);
    auto rejects = [](const nlohmann::json& doc) {
        try {
            RaiseCertificate::from_json(doc.dump());
            return false;
        } catch (const error&) {
            return true;
        }
    };

    auto missing = j;
    missing.erase("bound");
    CHECK(rejects(missing));

    auto extra = j;
    extra["note"] = "hello";
    CHECK(rejects(extra));

    auto version = j;
    version["format_version"] = "2";
    CHECK(rejects(version));

    auto badint = j;
    badint["p"] = "7x";
    CHECK(rejects(badint));

    CHECK(!rejects(j));
}
