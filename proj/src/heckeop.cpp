#include "heckeraise/heckeop.hpp"

#include <cmath>
#include <numeric>

namespace heckeraise {

std::vector<Mat22> merel_family(long p) {
    if (!is_prime((uint64_t)p)) throw error(errc::not_prime, "merel_family: " + std::to_string(p));
    std::vector<Mat22> out;
    for (long a = 1; a <= p; ++a)
        for (long b = 0; b < a; ++b)
            for (long c = 0; c * (a - b) < p; ++c) {
                if ((p + b * c) % a != 0) continue;
                long d = (p + b * c) / a;
                if (a * d - b * c != p || d <= c) throw error(errc::internal, "merel family");
                out.push_back({a, b, c, d});
            }
    return out;
}

std::vector<Mat22> heilbronn_cremona(long p) {
    if (!is_prime((uint64_t)p)) throw error(errc::not_prime, "heilbronn: " + std::to_string(p));
    std::vector<Mat22> out;
    out.push_back({1, 0, 0, p});
    for (long s = 0; s < p; ++s) {
        long r = s - (p - 1) / 2;
        long x1 = p, x2 = -r, y1 = 0, y2 = 1;
        long a = -p, b = r;
        out.push_back({x1, x2, y1, y2});
        while (b != 0) {
            long q = std::lround((double)a / (double)b);
            long c = a - b * q;
            a = -b;
            b = c;
            long x3 = q * x2 - x1;
            x1 = x2;
            x2 = x3;
            long y3 = q * y2 - y1;
            y1 = y2;
            y2 = y3;
            out.push_back({x1, x2, y1, y2});
        }
    }
    return out;
}

void path_terms(const P1Table& p1, long a, long b, long c, long d,
                std::vector<std::pair<long, int>>& out) {
    // {a/b, c/d} = {0, c/d} - {0, a/b}; each {0, r/s} unrolls over the
    // convergents 0/1, 1/0, p_0/q_0, ..., r/s (Cremona 2.1.6 flavor).
    auto zero_to = [&](long r, long s, int outer) {
        if (s < 0) {
            s = -s;
            r = -r;
        }
        long g = s == 0 ? (r < 0 ? -r : r) : std::gcd(r < 0 ? -r : r, s);
        if (g == 0) throw error(errc::internal, "path endpoint 0/0");
        r /= g;
        s /= g;
        long pl = 0, ql = 1; // last list entry, starting at 0/1
        auto emit = [&](long pn, long qn) {
            // The pair {pl/ql, pn/qn} is [pn, pl; qn, ql]{0, oo} up to the
            // sign of the determinant, i.e. the symbol (det*qn : ql).
            long det = pn * ql - pl * qn;
            if (det != 1 && det != -1) throw error(errc::internal, "convergent det");
            out.emplace_back(p1.index(det * qn, ql), outer);
            pl = pn;
            ql = qn;
        };
        emit(1, 0); // {0, oo}
        long pa = 0, qa = 1, pb = 1, qb = 0; // recurrence seeds
        long num = r, den = s;
        while (den != 0) {
            long q = num >= 0 ? num / den : -((-num + den - 1) / den);
            long rem = num - q * den;
            num = den;
            den = rem;
            long pn = q * pb + pa, qn = q * qb + qa;
            emit(pn, qn);
            pa = pb;
            qa = qb;
            pb = pn;
            qb = qn;
        }
        if (s != 0 && (pb != r || qb != s))
            throw error(errc::internal, "convergents missed endpoint");
    };
    zero_to(c, d, +1);
    zero_to(a, b, -1);
}

namespace {

MatrixZ lattice_from_images(const ModSymSpace& S, const MatrixZ& osur) {
    MatrixZ T = S.basis_w().mul(osur);
    const bigint& k = S.basis_den();
    if (k != 1) {
        for (long i = 0; i < T.nrows(); ++i)
            for (long j = 0; j < T.ncols(); ++j) {
                if (!mpz_divisible_p(T.at(i, j).get_mpz_t(), k.get_mpz_t()))
                    throw error(errc::internal, "operator does not preserve lattice");
                mpz_divexact(T.at(i, j).get_mpz_t(), T.at(i, j).get_mpz_t(), k.get_mpz_t());
            }
    }
    return T;
}

void add_proj_row(const MatrixZ& proj, long y, int s, std::vector<bigint>& acc) {
    for (long j = 0; j < proj.ncols(); ++j) {
        if (s > 0)
            acc[j] += proj.at(y, j);
        else
            acc[j] -= proj.at(y, j);
    }
}

} // namespace

MatrixZ hecke_on_lattice(const ModSymSpace& S, long q) {
    if (!is_prime((uint64_t)q)) throw error(errc::not_prime, "hecke_on_lattice: " + std::to_string(q));
    const long D = S.dim();
    const P1Table& p1 = S.p1();
    MatrixZ osur(D, D);
    std::vector<bigint> acc(D);
    if (S.level() % q != 0) {
        auto fam = merel_family(q);
        for (long j = 0; j < D; ++j) {
            auto [c, d] = p1.rep(S.surviving()[j]);
            for (auto& x : acc) x = 0;
            for (const Mat22& h : fam) {
                long y = p1.try_index(c * h.a + d * h.c, c * h.b + d * h.d);
                if (y >= 0) add_proj_row(S.projection(), y, +1, acc);
            }
            for (long t = 0; t < D; ++t) osur.at(j, t) = acc[t];
        }
    } else {
        std::vector<std::pair<long, int>> terms;
        for (long j = 0; j < D; ++j) {
            Mat22 g = S.lift(S.surviving()[j]);
            for (auto& x : acc) x = 0;
            terms.clear();
            for (long r = 0; r < q; ++r) {
                // [1, r; 0, q] * g maps the symbol to {(b+rd)/(qd), (a+rc)/(qc)}
                path_terms(p1, g.b + r * g.d, q * g.d, g.a + r * g.c, q * g.c, terms);
            }
            for (auto [y, s] : terms) add_proj_row(S.projection(), y, s, acc);
            for (long t = 0; t < D; ++t) osur.at(j, t) = acc[t];
        }
    }
    return lattice_from_images(S, osur);
}

MatrixZ restrict_to(const MatrixZ& V, const MatrixZ& T) {
    MatrixQ A = solve_left(V.to_rational(), V.to_rational().mul(T.to_rational()));
    if (!A.is_integral()) throw error(errc::internal, "restriction not integral");
    return A.to_integer();
}

std::vector<Mat22> transfer_cosets(long N, long p) {
    if (!is_prime((uint64_t)p)) throw error(errc::not_prime, "transfer_cosets");
    if (N % p == 0) throw error(errc::bad_level, "transfer_cosets: p divides N");
    std::vector<Mat22> out;
    out.push_back({1, 0, 0, 1}); // class (0:1)
    for (long d0 = 0; d0 < p; ++d0) {
        // class (1:d0): bottom row (N, d0 + p*t) with gcd = 1
        long d = d0;
        long guard = 0;
        while (std::gcd(N, d) != 1) {
            d += p;
            if (++guard > 4 * N + 4) throw error(errc::internal, "transfer coset lift");
        }
        long x, y;
        xgcd(d, N, x, y); // x*d + y*N = 1
        out.push_back({x, -y, N, d});
    }
    return out;
}

Mat22 atkin_lehner_p(long N, long p) {
    long u, v;
    if (xgcd(p, N, u, v) != 1) throw error(errc::bad_level, "atkin_lehner_p: gcd(p,N) != 1");
    return {p * u, v, -N * p, p};
}

MatrixZ degeneracy_down(const ModSymSpace& big, const ModSymSpace& small, long p, long t) {
    if (big.level() != small.level() * p || (t != 1 && t != p) || big.sign() != small.sign())
        throw error(errc::level_mismatch, "degeneracy_down");
    const long Db = big.dim(), Ds = small.dim();
    MatrixZ osur(Db, Ds);
    std::vector<bigint> acc(Ds);
    std::vector<std::pair<long, int>> terms;
    for (long j = 0; j < Db; ++j) {
        auto [c, d] = big.p1().rep(big.surviving()[j]);
        for (auto& x : acc) x = 0;
        if (t == 1) {
            add_proj_row(small.projection(), small.p1().index(c, d), +1, acc);
        } else {
            Mat22 g = big.lift(big.surviving()[j]);
            terms.clear();
            path_terms(small.p1(), p * g.b, g.d, p * g.a, g.c, terms);
            for (auto [y, s] : terms) add_proj_row(small.projection(), y, s, acc);
        }
        for (long i = 0; i < Ds; ++i) osur.at(j, i) = acc[i];
    }
    return lattice_from_images(big, osur);
}

MatrixZ degeneracy_up(const ModSymSpace& small, const ModSymSpace& big, long p, long t) {
    if (big.level() != small.level() * p || (t != 1 && t != p) || big.sign() != small.sign())
        throw error(errc::level_mismatch, "degeneracy_up");
    const long N = small.level();
    const long Db = big.dim(), Ds = small.dim();
    auto cosets = transfer_cosets(N, p);
    Mat22 w = atkin_lehner_p(N, p);
    MatrixZ osur(Ds, Db);
    std::vector<bigint> acc(Db);
    std::vector<std::pair<long, int>> terms;
    for (long j = 0; j < Ds; ++j) {
        Mat22 g = small.lift(small.surviving()[j]);
        for (auto& x : acc) x = 0;
        for (const Mat22& cs : cosets) {
            Mat22 m{cs.a * g.a + cs.b * g.c, cs.a * g.b + cs.b * g.d,
                    cs.c * g.a + cs.d * g.c, cs.c * g.b + cs.d * g.d};
            if (t == 1) {
                add_proj_row(big.projection(), big.p1().index(m.c, m.d), +1, acc);
            } else {
                Mat22 wm{w.a * m.a + w.b * m.c, w.a * m.b + w.b * m.d,
                         w.c * m.a + w.d * m.c, w.c * m.b + w.d * m.d};
                terms.clear();
                path_terms(big.p1(), wm.b, wm.d, wm.a, wm.c, terms);
                for (auto [y, s] : terms) add_proj_row(big.projection(), y, s, acc);
            }
        }
        for (long i = 0; i < Db; ++i) osur.at(j, i) = acc[i];
    }
    return lattice_from_images(small, osur);
}

MatrixZ pnew_lattice(const ModSymSpace& big, const ModSymSpace& small, long p) {
    MatrixZ d1 = degeneracy_down(big, small, p, 1);
    MatrixZ dp = degeneracy_down(big, small, p, p);
    const MatrixZ& V = big.cuspidal();
    MatrixZ v1 = V.mul(d1), vp = V.mul(dp);
    MatrixZ stacked(V.nrows(), v1.ncols() + vp.ncols());
    for (long i = 0; i < V.nrows(); ++i) {
        for (long j = 0; j < v1.ncols(); ++j) stacked.at(i, j) = v1.at(i, j);
        for (long j = 0; j < vp.ncols(); ++j) stacked.at(i, v1.ncols() + j) = vp.at(i, j);
    }
    MatrixZ K = integer_left_kernel(stacked);
    return hnf(K.mul(V));
}

} // namespace heckeraise
