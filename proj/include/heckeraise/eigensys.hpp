#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "heckeraise/arith.hpp"
#include "heckeraise/modsym.hpp"
#include "heckeraise/qmat.hpp"

namespace heckeraise {

// Sturm bound for weight 2 on Gamma_0(M): ceil(psi(M)/6), at least 1.
// Eigen-systems agreeing at all primes up to this bound agree everywhere.
long sturm_bound(long M);

// A rational Hecke eigen-system at level `level`: a_q for every prime
// q <= bound (U_q eigenvalues at q | level).  Systems extracted from a
// space carry their eigenvector so a_q can be extended on demand; systems
// read from a file cannot be extended.
struct EigenSystem {
    long level = 0;
    long bound = 0;
    std::map<long, bigint> a;
    std::string source = "computed"; // "computed" | "user"
    std::shared_ptr<const ModSymSpace> space; // null for user systems
    MatrixZ evec; // 1 x dim lattice row spanning the eigenspace

    // a_q for prime q, computing and caching it from evec when q > bound.
    bigint a_at(long q);
    // Extend so every prime <= b is present; bumps bound.
    void ensure_through(long b);
};

// Eigen-system reduced into Z/ell^n, defined at all primes <= bound.
struct ModSystem {
    long level = 0;
    ResidueRing ring{2, 1};
    long bound = 0;
    std::map<long, uint64_t> a_mod;
};

// One system per rational block of the cuspidal subspace on which every
// T_q acts as a scalar (at sign 0 a rational newform contributes its
// two-dimensional +- pair as one block), sorted by (a_2, a_3, ...).
// Dimensions of blocks without scalar rational action are appended to
// *skipped when given.
std::vector<EigenSystem> rational_eigensystems(
    const std::shared_ptr<const ModSymSpace>& S,
    std::vector<long>* skipped = nullptr);

// Entrywise reduction, primes <= bound.  bound must not exceed e.bound.
ModSystem reduce_system(const EigenSystem& e, const ResidueRing& ring, long bound);

// True iff a_r = r + 1 mod ell for every prime r <= bound outside `avoid`.
// Requires n = 1.
bool is_eisenstein(const ModSystem& m, const std::set<long>& avoid, long bound);

// The screen for the residual-irreducibility hypothesis: not Eisenstein.
bool residually_irreducible_screen(const ModSystem& m, const std::set<long>& avoid,
                                   long bound);

} // namespace heckeraise
