#pragma once

#include "heckeraise/modsym.hpp"

namespace heckeraise {

// Merel's family of 2p determinant-p matrices computing T_p on Manin
// symbols with the drop-noncoprime rule (Merel, universal Fourier
// expansions).  Primary family.
std::vector<Mat22> merel_family(long p);

// Heilbronn matrices a la Cremona ch 2.4, used as an independent
// cross-check of merel_family.
std::vector<Mat22> heilbronn_cremona(long p);

// Manin-symbol decomposition of the geodesic path {a/b, c/d} via continued
// fraction convergents (Manin's trick); denominator 0 means the cusp oo.
// Appends (P^1 index, +-1) terms to out.
void path_terms(const P1Table& p1, long a, long b, long c, long d,
                std::vector<std::pair<long, int>>& out);

// Lattice matrix (acting on row vectors) of T_q for q ∤ level, or U_q for
// q | level, both for prime q.
MatrixZ hecke_on_lattice(const ModSymSpace& S, long q);

// A with A*V = V*T for a saturated stable row lattice V; throws internal
// when V is not stable under T.
MatrixZ restrict_to(const MatrixZ& V, const MatrixZ& T);

// Degeneracy maps between levels N and Np for prime p ∤ N, t in {1, p}, as
// lattice matrices on row vectors.  down: level Np -> N is induced by
// z -> t*z on the upper half plane; up: N -> Np is its transfer.
MatrixZ degeneracy_down(const ModSymSpace& big, const ModSymSpace& small, long p, long t);
MatrixZ degeneracy_up(const ModSymSpace& small, const ModSymSpace& big, long p, long t);

// Saturated HNF basis of the p-new part of the cuspidal lattice: the kernel
// of both downward degeneracy maps.
MatrixZ pnew_lattice(const ModSymSpace& big, const ModSymSpace& small, long p);

// Coset representatives of Gamma_0(Np) in Gamma_0(N), indexed by P^1(F_p).
std::vector<Mat22> transfer_cosets(long N, long p);

// Atkin-Lehner matrix at p for level Np: [p*u, v; -N*p, p] with p*u+N*v=1.
Mat22 atkin_lehner_p(long N, long p);

} // namespace heckeraise
