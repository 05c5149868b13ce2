#pragma once

#include <string>
#include <vector>

#include "heckeraise/arith.hpp"
#include "heckeraise/qmat.hpp"

namespace heckeraise {

enum class Sign { zero, plus };

inline const char* sign_name(Sign s) { return s == Sign::zero ? "0" : "+"; }

// Index and fixed-point counts for Gamma_0(M), Cremona ch 2 / Shimura 1.6.
struct GenusData {
    long level = 0;
    long psi = 0;    // [SL2(Z) : Gamma_0(M)]
    long nu2 = 0;    // elliptic points of order 2
    long nu3 = 0;    // elliptic points of order 3
    long nu_inf = 0; // cusps
    long genus = 0;
};

GenusData genus_data(long M);

// Lift of a P^1(Z/M) representative to SL2(Z); the class of (c:d) is the
// bottom row.
struct Mat22 {
    long a, b, c, d;
};

// Weight-2 modular symbols for Gamma_0(M) over Z, with optional quotient by
// complex conjugation (sign +).  Construction runs the Manin presentation:
// two-term relations by signed union-find, three-term relations by sparse
// elimination over Q, then a Hermite basis W/k of the lattice generated by
// the images of the Manin generators.  Public coordinates are chosen so the
// lattice is exactly Z^dim, which makes every generator image integral.
class ModSymSpace {
public:
    ModSymSpace(long level, Sign sign);

    long level() const { return level_; }
    Sign sign() const { return sign_; }
    const GenusData& genus() const { return genus_; }
    const P1Table& p1() const { return p1_; }

    long dim() const { return dim_; }
    long cuspidal_dim() const { return cuspidal_.nrows(); }
    long cusp_class_count() const { return cusp_classes_; }

    // Image of the x-th Manin generator in public coordinates (row of the
    // P x dim projection matrix); zero for generators that die.
    const MatrixZ& projection() const { return proj_; }

    // P^1 indices whose classes survive elimination; their images form a
    // generating set mapped to rows of U = W/k.
    const std::vector<long>& surviving() const { return surviving_; }
    const MatrixZ& basis_w() const { return w_; }
    const bigint& basis_den() const { return k_; }

    // Saturated basis of the cuspidal sublattice in public coordinates, HNF.
    const MatrixZ& cuspidal() const { return cuspidal_; }

    // Boundary of each public basis vector, over cusp classes.
    const MatrixQ& boundary() const { return boundary_; }

    // SL2(Z) lift of a P^1 representative.
    Mat22 lift(long p1_index) const;

    // SHA-256 of serialize(); identifies basis choices exactly.
    const std::string& fingerprint() const { return fingerprint_; }

    std::string serialize() const;
    static ModSymSpace deserialize(const std::string& data);

private:
    ModSymSpace() : p1_(1) {}
    void build();
    void finish_from_core(); // boundary, cuspidal, fingerprint

    long level_ = 1;
    Sign sign_ = Sign::zero;
    GenusData genus_;
    P1Table p1_;
    long dim_ = 0;
    std::vector<long> surviving_;
    MatrixZ w_;
    bigint k_;
    MatrixZ proj_;
    MatrixZ cuspidal_;
    MatrixQ boundary_;
    long cusp_classes_ = 0;
    std::string fingerprint_;
};

// Cusp of X_0(M) as a fraction a/c in lowest terms, c >= 0, infinity = 1/0.
struct Cusp {
    long a, c;
};

// Gamma_0(M)-equivalence (Cremona, prop 2.2.3).
bool cusps_equivalent(long M, const Cusp& s1, const Cusp& s2);

} // namespace heckeraise
