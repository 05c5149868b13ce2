#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "heckeraise/eigensys.hpp"
#include "heckeraise/heckeop.hpp"
#include "heckeraise/modmat.hpp"

namespace heckeraise {

// Applies Hecke operators to row vectors over Z/ell^n in the public basis
// of a ModSymSpace, without forming the full operator matrix.  Work happens
// mod ell^(n+v) where ell^v exactly divides the basis denominator k, so the
// final division by k is exact on residues.
class OpApplier {
public:
    OpApplier(std::shared_ptr<const ModSymSpace> space, ResidueRing ring);

    const ResidueRing& ring() const { return ring_; }

    // Image of z (length dim, entries mod ell^n) under T_q, or U_q when
    // q | level.  q must be prime.
    std::vector<uint64_t> apply(const std::vector<uint64_t>& z, long q);

private:
    std::shared_ptr<const ModSymSpace> space_;
    ResidueRing ring_;      // target ring ell^n
    ResidueRing work_;      // ell^(n+v)
    int vshift_;            // v = v_ell(k)
    uint64_t kinv_;         // (k / ell^v)^-1 mod ell^n
    std::vector<uint64_t> wmod_;    // dim x dim, basis_w mod work modulus
    std::vector<uint64_t> projmod_; // P x dim, projection mod work modulus
    // per-generator Manin terms of U_q, keyed by q | level
    std::map<long, std::vector<std::vector<std::pair<long, int>>>> uq_terms_;
    std::map<long, std::vector<Mat22>> merel_;
};

// Which side of the degeneracy maps satisfies the U_p companion identities
// integrally.  Calibrated once on (N, p) = (11, 2) and asserted across every
// product level in the tests: on pushforwards, U_p * pi_1 = pi_1 * T_p - pi_p
// and U_p * pi_p = p * pi_1; the transposed identities on transfers fail.
inline constexpr const char* up_companion_convention = "pushforward";

// Primes p <= pmax with p coprime to the level and a_p = s*(p+1) mod ell^n,
// reported as (p, s) with s = +1 before s = -1 for the same p.  p = ell is
// skipped unless include_ell.  Extends e through pmax as needed.
std::vector<std::pair<long, int>> raising_primes(EigenSystem& e, ResidueRing ring,
                                                 long pmax, bool include_ell);

// Constructive level-raising certificate: a p-new weak eigenvector mod
// ell^n at level N*p matching the eigenvalues of the source system away
// from p and with U_p = s.
struct RaiseCertificate {
    long level = 0;      // base level N
    long p = 0;          // raising prime
    uint64_t ell = 0;
    int n = 0;
    int sign = 0;        // s = +-1
    Sign space_sign = Sign::plus;
    long bound = 0;      // Sturm bound at level N*p
    uint64_t ap_mod = 0; // a_p of the source system mod ell^n
    std::vector<std::pair<long, uint64_t>> eigenvalues; // (q, a_q mod ell^n), q != p
    uint64_t up_eigenvalue = 0; // canonical residue of s
    std::vector<uint64_t> witness; // coordinates in the p-new basis
    std::string basis_fingerprint; // pins space + p-new basis byte-exactly
    std::string screen; // "passed" or "overridden"

    ResidueRing ring() const { return ResidueRing{ell, n}; }
    std::string to_json() const;               // canonical: sorted keys, compact
    static RaiseCertificate from_json(const std::string& text);
};

// Runs the eigenvector narrowing at level e.level * p and assembles a
// certificate.  Throws hypothesis_failed when a_p != s*(p+1) mod ell^n,
// screen_failed when the mod-ell system is Eisenstein (unless skip_screen,
// which records screen = "overridden"), and no_witness_error when the
// narrowing empties out.
RaiseCertificate certify(EigenSystem& e, long p, ResidueRing ring, int s,
                         Sign space_sign, bool skip_screen = false);

// certify with space_sign plus, falling back to sign zero when the plus
// quotient has no witness.
RaiseCertificate certify_auto(EigenSystem& e, long p, ResidueRing ring, int s,
                              bool skip_screen = false);

struct VerifyCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool ok() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

// Recomputes everything a certificate claims, from scratch and without the
// space cache: parameters, hypothesis, prime coverage, basis fingerprint,
// witness primitivity, every eigen equation, the U_p equation, and screen
// consistency.  Failures land in the report, never as exceptions.
VerifyReport verify(const RaiseCertificate& cert);

} // namespace heckeraise
