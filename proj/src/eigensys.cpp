#include "heckeraise/eigensys.hpp"

#include <algorithm>
#include <cmath>

#include "heckeraise/heckeop.hpp"

namespace heckeraise {

long sturm_bound(long M) {
    if (M < 1) throw error(errc::bad_level, "sturm_bound: " + std::to_string(M));
    long psi = M;
    for (long p : prime_factors(M)) psi += psi / p;
    return std::max(1L, (psi + 5) / 6);
}

bigint EigenSystem::a_at(long q) {
    if (!is_prime((uint64_t)q)) throw error(errc::not_prime, "a_at: " + std::to_string(q));
    auto it = a.find(q);
    if (it != a.end()) return it->second;
    if (!space)
        throw error(errc::insufficient_eigenvalues,
                    "system has no a_" + std::to_string(q) + " and cannot be extended");
    MatrixZ T = hecke_on_lattice(*space, q);
    MatrixZ w = evec.mul(T);
    long j0 = -1;
    for (long j = 0; j < evec.ncols(); ++j)
        if (evec.at(0, j) != 0) { j0 = j; break; }
    if (j0 < 0) throw error(errc::internal, "empty eigenvector");
    bigint num = w.at(0, j0), den = evec.at(0, j0);
    if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()))
        throw error(errc::internal, "eigenvector not preserved by T");
    bigint av;
    mpz_divexact(av.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    for (long j = 0; j < evec.ncols(); ++j)
        if (w.at(0, j) != av * evec.at(0, j))
            throw error(errc::internal, "eigenvector not preserved by T");
    a[q] = av;
    return av;
}

void EigenSystem::ensure_through(long b) {
    if (b <= bound) return;
    if (!space)
        throw error(errc::insufficient_eigenvalues,
                    "user system defined through " + std::to_string(bound) +
                        ", needs " + std::to_string(b));
    for (long q : primes_up_to(b)) a_at(q);
    bound = b;
}

namespace {

// Integer candidates for eigenvalues of T_q (resp. U_q) in weight 2.
std::vector<long> eigen_candidates(long N, long q) {
    std::vector<long> out;
    if (N % q == 0) {
        // U_q: rational eigenvalues on cuspidal are -1, 0, 1 (new at q);
        // q-old blocks carry conjugate pairs of modulus sqrt(q).
        out = {-1, 0, 1};
    } else {
        long h = (long)(2.0 * std::sqrt((double)q));
        while ((h + 1) * (h + 1) <= 4 * q) ++h;
        while (h * h > 4 * q) --h;
        for (long v = -h; v <= h; ++v) out.push_back(v);
    }
    return out;
}

MatrixZ shift(const MatrixZ& R, long aval) {
    MatrixZ M = R;
    for (long i = 0; i < M.nrows(); ++i) M.at(i, i) -= aval;
    return M;
}

} // namespace

std::vector<EigenSystem> rational_eigensystems(
    const std::shared_ptr<const ModSymSpace>& sp, std::vector<long>* skipped) {
    const ModSymSpace& S = *sp;
    const long N = S.level();
    const long bound = sturm_bound(N);
    std::vector<EigenSystem> out;
    if (S.cuspidal().nrows() == 0) return out;

    std::map<long, MatrixZ> tq;
    auto op = [&](long q) -> const MatrixZ& {
        auto it = tq.find(q);
        if (it == tq.end()) it = tq.emplace(q, hecke_on_lattice(S, q)).first;
        return it->second;
    };

    std::vector<MatrixZ> blocks{S.cuspidal()};
    for (long q : primes_up_to(bound)) {
        const MatrixZ& T = op(q);
        std::vector<MatrixZ> next;
        for (const MatrixZ& B : blocks) {
            if (B.nrows() <= 1) { next.push_back(B); continue; }
            MatrixZ R = restrict_to(B, T);
            long found = 0;
            std::vector<MatrixZ> kids;
            std::vector<long> avals;
            for (long aval : eigen_candidates(N, q)) {
                MatrixZ K = integer_left_kernel(shift(R, aval));
                if (K.nrows() == 0) continue;
                kids.push_back(K.mul(B));
                avals.push_back(aval);
                found += K.nrows();
            }
            if (found == 0) { next.push_back(B); continue; }
            for (auto& kid : kids) next.push_back(std::move(kid));
            if (found < B.nrows()) {
                // part with no rational eigenvalue at q: image of the
                // product of (R - a)^dim over the found eigenvalues
                MatrixZ prod = MatrixZ::identity(B.nrows());
                for (long aval : avals) {
                    MatrixZ M = shift(R, aval);
                    for (long e = 0; e < B.nrows(); ++e) prod = prod.mul(M);
                }
                MatrixZ res = saturate(prod.mul(B));
                if (res.nrows() != B.nrows() - found)
                    throw error(errc::internal, "eigen split dimension leak");
                next.push_back(std::move(res));
            }
        }
        blocks = std::move(next);
    }

    for (const MatrixZ& B : blocks) {
        // A rational system shows up as a block on which every operator is
        // scalar; at sign 0 each newform contributes a 2-dim block (the +-
        // pair), so multiplicity > 1 is the normal case, not a failure.
        std::map<long, bigint> vals;
        bool scalar = true;
        for (long q : primes_up_to(bound)) {
            MatrixZ R = restrict_to(B, op(q));
            const bigint& v = R.at(0, 0);
            for (long i = 0; i < R.nrows() && scalar; ++i)
                for (long j = 0; j < R.ncols(); ++j)
                    if (R.at(i, j) != (i == j ? v : bigint(0))) {
                        scalar = false;
                        break;
                    }
            if (!scalar) break;
            vals[q] = v;
        }
        if (!scalar) {
            if (skipped) skipped->push_back(B.nrows());
            continue;
        }
        EigenSystem e;
        e.level = N;
        e.bound = bound;
        e.space = sp;
        e.evec = MatrixZ(1, B.ncols());
        for (long j = 0; j < B.ncols(); ++j) e.evec.at(0, j) = B.at(0, j);
        e.a = std::move(vals);
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const EigenSystem& x, const EigenSystem& y) {
        auto i = x.a.begin();
        auto j = y.a.begin();
        for (; i != x.a.end() && j != y.a.end(); ++i, ++j) {
            if (i->second != j->second) return i->second < j->second;
        }
        return false;
    });
    if (skipped) std::sort(skipped->begin(), skipped->end());
    return out;
}

ModSystem reduce_system(const EigenSystem& e, const ResidueRing& ring, long bound) {
    if (bound > e.bound)
        throw error(errc::bound_too_large,
                    "reduce_system: bound " + std::to_string(bound) + " exceeds " +
                        std::to_string(e.bound));
    ModSystem m;
    m.level = e.level;
    m.ring = ring;
    m.bound = bound;
    for (long q : primes_up_to(bound)) {
        auto it = e.a.find(q);
        if (it == e.a.end())
            throw error(errc::coverage_gap, "missing a_" + std::to_string(q));
        m.a_mod[q] = mpz_fdiv_ui(it->second.get_mpz_t(), ring.modulus);
    }
    return m;
}

bool is_eisenstein(const ModSystem& m, const std::set<long>& avoid, long bound) {
    if (m.ring.n != 1) throw error(errc::bad_exponent, "is_eisenstein needs n = 1");
    if (bound > m.bound)
        throw error(errc::bound_too_large, "is_eisenstein: bound exceeds system");
    for (long r : primes_up_to(bound)) {
        if (avoid.count(r)) continue;
        if (m.a_mod.at(r) != (uint64_t)((r + 1) % (long)m.ring.modulus)) return false;
    }
    return true;
}

bool residually_irreducible_screen(const ModSystem& m, const std::set<long>& avoid,
                                   long bound) {
    return !is_eisenstein(m, avoid, bound);
}

} // namespace heckeraise
