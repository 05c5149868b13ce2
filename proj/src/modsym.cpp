#include "heckeraise/modsym.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "heckeraise/sha256.hpp"

namespace heckeraise {

GenusData genus_data(long M) {
    if (M < 1) throw error(errc::bad_level, "level must be >= 1");
    GenusData g;
    g.level = M;
    auto ps = prime_factors(M);
    long psi = M;
    for (long p : ps) psi += psi / p;
    g.psi = psi;
    if (M % 4 == 0) {
        g.nu2 = 0;
    } else {
        long v = 1;
        for (long p : ps)
            if (p != 2) v *= 1 + legendre_minus_one(p);
        g.nu2 = v;
    }
    if (M % 9 == 0) {
        g.nu3 = 0;
    } else {
        long v = 1;
        for (long p : ps)
            if (p != 3) v *= 1 + legendre_minus_three(p);
        g.nu3 = v;
    }
    long vinf = 0;
    for (long d : divisors(M)) vinf += euler_phi(gcd_ll(d, M / d));
    g.nu_inf = vinf;
    long num = 12 + psi - 3 * g.nu2 - 4 * g.nu3 - 6 * vinf;
    if (num % 12 != 0) throw error(errc::internal, "genus formula not integral");
    g.genus = num / 12;
    return g;
}

bool cusps_equivalent(long M, const Cusp& s1, const Cusp& s2) {
    if (s1.c == 0 && s2.c == 0) return true;
    if (s1.c == 0) return s2.c % M == 0;
    if (s2.c == 0) return s1.c % M == 0;
    // Cremona prop 2.2.3: with t_j = p_j^{-1} mod q_j, the cusps are
    // equivalent iff t_1 q_2 = t_2 q_1 mod gcd(q_1 q_2, M).
    auto inv_mod = [](long a, long m) -> long {
        if (m == 1) return 0;
        long x, y;
        xgcd(((a % m) + m) % m, m, x, y);
        return ((x % m) + m) % m;
    };
    long g = gcd_ll(s1.c * s2.c, M);
    long t1 = inv_mod(s1.a, s1.c);
    long t2 = inv_mod(s2.a, s2.c);
    long lhs = ((t1 % g) * (s2.c % g) - (t2 % g) * (s1.c % g)) % g;
    return lhs % g == 0;
}

namespace {

Mat22 lift_cd(long M, long c, long d) {
    if (M == 1 || c % M == 0) return {1, 0, 0, 1};
    long dp = d;
    long guard = 0;
    while (gcd_ll(c, dp) != 1) {
        dp += M;
        if (++guard > 4 * M + 4) throw error(errc::internal, "lift_cd: no coprime shift");
    }
    long x, y;
    xgcd(dp, c, x, y); // x*dp + y*c = 1
    return {x, -y, c, dp};
}

// Signed union-find: each node carries its sign relative to its parent;
// classes where x = -x are marked dead (they vanish over Q).
struct SignedUF {
    std::vector<long> parent;
    std::vector<int> rnk;
    std::vector<int> sgn;
    std::vector<char> dead;

    explicit SignedUF(long n) : parent(n), rnk(n, 0), sgn(n, 1), dead(n, 0) {
        std::iota(parent.begin(), parent.end(), 0L);
    }

    std::pair<long, int> find(long x) {
        std::vector<long> path;
        long r = x;
        while (parent[r] != r) {
            path.push_back(r);
            r = parent[r];
        }
        int acc = 1;
        for (long i = (long)path.size() - 1; i >= 0; --i) {
            acc *= sgn[path[i]];
            parent[path[i]] = r;
            sgn[path[i]] = acc;
        }
        return {r, path.empty() ? 1 : sgn[x]};
    }

    // Impose a = eps*b.
    void unite(long a, long b, int eps) {
        auto [ra, sa] = find(a);
        auto [rb, sb] = find(b);
        if (ra == rb) {
            if (sa != eps * sb) dead[ra] = 1;
            return;
        }
        int sigma = sa * eps * sb; // rb = sigma * ra and vice versa
        char d = dead[ra] | dead[rb];
        if (rnk[ra] < rnk[rb]) std::swap(ra, rb);
        parent[rb] = ra;
        sgn[rb] = sigma;
        dead[ra] = d;
        if (rnk[ra] == rnk[rb]) ++rnk[ra];
    }
};

using SparseQ = std::vector<std::pair<long, rat>>; // sorted by column

void row_axpy(SparseQ& r, const rat& c, const SparseQ& s) {
    SparseQ out;
    out.reserve(r.size() + s.size());
    size_t i = 0, j = 0;
    while (i < r.size() || j < s.size()) {
        if (j == s.size() || (i < r.size() && r[i].first < s[j].first)) {
            out.push_back(std::move(r[i++]));
        } else if (i == r.size() || s[j].first < r[i].first) {
            out.emplace_back(s[j].first, rat(-(c * s[j].second)));
            ++j;
        } else {
            rat v = r[i].second - c * s[j].second;
            if (v != 0) out.emplace_back(r[i].first, v);
            ++i;
            ++j;
        }
    }
    r = std::move(out);
}

void emit_matrix(std::ostringstream& os, const char* tag, const MatrixZ& A) {
    os << tag << ' ' << A.nrows() << ' ' << A.ncols() << '\n';
    for (long i = 0; i < A.nrows(); ++i) {
        for (long j = 0; j < A.ncols(); ++j) {
            if (j) os << ' ';
            os << to_string(A.at(i, j));
        }
        os << '\n';
    }
}

MatrixZ read_matrix(std::istringstream& is, const std::string& tag) {
    std::string t;
    long r, c;
    if (!(is >> t >> r >> c) || t != tag)
        throw error(errc::parse_error, "space data: expected " + tag);
    MatrixZ A(r, c);
    std::string w;
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < c; ++j) {
            if (!(is >> w)) throw error(errc::parse_error, "space data: short matrix " + tag);
            A.at(i, j) = bigint(w);
        }
    return A;
}

} // namespace

Mat22 ModSymSpace::lift(long p1_index) const {
    auto [c, d] = p1_.rep(p1_index);
    return lift_cd(level_, c, d);
}

ModSymSpace::ModSymSpace(long level, Sign sign) : level_(level), sign_(sign), p1_(level) {
    build();
}

void ModSymSpace::build() {
    genus_ = genus_data(level_);
    const long M = level_;
    const long P = p1_.size();

    // Two-term relations x + xS = 0 (and x = x*iota at sign +).
    SignedUF uf(P);
    for (long x = 0; x < P; ++x) {
        auto [c, d] = p1_.rep(x);
        uf.unite(x, p1_.index(d, -c), -1);
        if (sign_ == Sign::plus) uf.unite(x, p1_.index(-c, d), +1);
    }

    std::vector<long> gen_of(P, -1);
    std::vector<int> gen_sign(P, 0); // 0 marks dead classes
    std::vector<long> free_reps;
    std::map<long, std::pair<long, int>> by_root; // root -> (gen id, rep sign)
    for (long x = 0; x < P; ++x) {
        auto [r, s] = uf.find(x);
        if (uf.dead[r]) continue;
        auto it = by_root.find(r);
        if (it == by_root.end()) {
            it = by_root.emplace(r, std::make_pair((long)free_reps.size(), s)).first;
            free_reps.push_back(x);
        }
        gen_of[x] = it->second.first;
        gen_sign[x] = s * it->second.second;
    }
    const long F = (long)free_reps.size();

    // Three-term relations x + xT + xT^2 = 0, one per T-orbit, eliminated
    // sparsely with a fill-reducing pivot choice.
    std::vector<long> pivot_row_of_col(F, -1);
    std::vector<SparseQ> rows;
    std::vector<long> row_pivot_col;
    std::vector<long> use_count(F, 0);
    for (long x = 0; x < P; ++x) {
        auto [c, d] = p1_.rep(x);
        long xt = p1_.index(d, -c - d);
        auto [c2, d2] = p1_.rep(xt);
        long xt2 = p1_.index(d2, -c2 - d2);
        if (xt < x || xt2 < x) continue;
        std::map<long, long> coeffs;
        for (long y : {x, xt, xt2})
            if (gen_sign[y] != 0) coeffs[gen_of[y]] += gen_sign[y];
        SparseQ row;
        for (auto& [col, v] : coeffs)
            if (v != 0) row.emplace_back(col, rat(v));
        while (true) {
            long hit = -1;
            for (size_t t = 0; t < row.size(); ++t)
                if (pivot_row_of_col[row[t].first] >= 0) {
                    hit = (long)t;
                    break;
                }
            if (hit < 0) break;
            long k = pivot_row_of_col[row[hit].first];
            rat pv;
            for (auto& e : rows[k])
                if (e.first == row_pivot_col[k]) pv = e.second;
            row_axpy(row, row[hit].second / pv, rows[k]);
        }
        if (row.empty()) continue;
        long best = 0;
        for (size_t t = 1; t < row.size(); ++t)
            if (use_count[row[t].first] < use_count[row[best].first]) best = (long)t;
        long pc = row[best].first;
        pivot_row_of_col[pc] = (long)rows.size();
        for (auto& e : row) ++use_count[e.first];
        row_pivot_col.push_back(pc);
        rows.push_back(std::move(row));
    }

    // Back-substitute newest-first so every stored row is supported on its
    // pivot plus surviving columns only.
    for (long i = (long)rows.size() - 1; i >= 0; --i) {
        while (true) {
            long hit = -1, k = -1;
            for (size_t t = 0; t < rows[i].size(); ++t) {
                long pr = pivot_row_of_col[rows[i][t].first];
                if (pr >= 0 && pr != i) {
                    hit = (long)t;
                    k = pr;
                    break;
                }
            }
            if (hit < 0) break;
            rat pv;
            for (auto& e : rows[k])
                if (e.first == row_pivot_col[k]) pv = e.second;
            rat coef = rows[i][hit].second / pv;
            row_axpy(rows[i], coef, rows[k]);
        }
    }

    std::vector<long> col_to_lat(F, -1);
    std::vector<long> lat_cols;
    for (long c = 0; c < F; ++c)
        if (pivot_row_of_col[c] < 0) {
            col_to_lat[c] = (long)lat_cols.size();
            lat_cols.push_back(c);
        }
    const long D = (long)lat_cols.size();
    dim_ = D;
    surviving_.clear();
    for (long c : lat_cols) surviving_.push_back(free_reps[c]);

    // phi over lattice coordinates for each free generator; eliminated ones
    // are rational rows, survivors are unit vectors.
    std::vector<SparseQ> phi(F);
    for (long c = 0; c < F; ++c) {
        long pr = pivot_row_of_col[c];
        if (pr < 0) {
            phi[c].emplace_back(col_to_lat[c], rat(1));
            continue;
        }
        rat pv;
        for (auto& e : rows[pr])
            if (e.first == c) pv = e.second;
        for (auto& e : rows[pr]) {
            if (e.first == c) continue;
            phi[c].emplace_back(col_to_lat[e.first], rat(-(e.second / pv)));
        }
    }

    bigint k(1);
    for (long c = 0; c < F; ++c)
        for (auto& e : phi[c]) mpz_lcm(k.get_mpz_t(), k.get_mpz_t(), e.second.get_den().get_mpz_t());
    k_ = k;

    // Hermite basis W of k * (image lattice); it contains k*Z^D, so k*W^-1
    // is integral and public coordinates make the lattice exactly Z^D.
    HnfBuilder hb(D, false);
    for (long i = 0; i < D; ++i) {
        std::vector<bigint> row(D);
        row[i] = k;
        hb.insert(std::move(row));
    }
    for (long c = 0; c < F; ++c) {
        if (pivot_row_of_col[c] < 0) continue;
        std::vector<bigint> row(D);
        for (auto& e : phi[c]) {
            rat v = rat(k) * e.second;
            if (v.get_den() != 1) throw error(errc::internal, "denominator lcm missed");
            row[e.first] = v.get_num();
        }
        hb.insert(std::move(row));
    }
    w_ = hb.result();
    if (w_.nrows() != D) throw error(errc::internal, "lattice basis not full rank");
    for (long i = 0; i < D; ++i)
        if (w_.at(i, i) == 0) throw error(errc::internal, "lattice basis not triangular");

    // z with z*W = b by forward substitution; exact for b in k*lattice.
    auto solve_row = [&](std::vector<bigint> acc) {
        std::vector<bigint> z(D);
        for (long j = 0; j < D; ++j) {
            if (acc[j] == 0) continue;
            if (!mpz_divisible_p(acc[j].get_mpz_t(), w_.at(j, j).get_mpz_t()))
                throw error(errc::internal, "projection not integral");
            mpz_divexact(z[j].get_mpz_t(), acc[j].get_mpz_t(), w_.at(j, j).get_mpz_t());
            for (long j2 = j + 1; j2 < D; ++j2)
                if (w_.at(j, j2) != 0) acc[j2] -= z[j] * w_.at(j, j2);
        }
        return z;
    };

    MatrixZ gen_lat(F, D); // public coordinates of each free generator
    for (long c = 0; c < F; ++c) {
        std::vector<bigint> b(D);
        for (auto& e : phi[c]) {
            rat v = rat(k) * e.second;
            b[e.first] = v.get_num();
        }
        auto z = solve_row(std::move(b));
        for (long j = 0; j < D; ++j) gen_lat.at(c, j) = z[j];
    }

    proj_ = MatrixZ(P, D);
    for (long x = 0; x < P; ++x) {
        if (gen_sign[x] == 0) continue;
        long g = gen_of[x];
        for (long j = 0; j < D; ++j)
            proj_.at(x, j) = gen_sign[x] > 0 ? gen_lat.at(g, j) : -gen_lat.at(g, j);
    }

    // Cusp classes over all generators, then the boundary map.
    std::vector<Cusp> class_reps;
    std::map<std::pair<long, long>, long> cusp_memo;
    auto class_of = [&](long a, long c) -> long {
        if (c < 0) {
            a = -a;
            c = -c;
        }
        if (c == 0) a = 1;
        auto key = std::make_pair(a, c);
        auto it = cusp_memo.find(key);
        if (it != cusp_memo.end()) return it->second;
        Cusp s{a, c};
        long id = -1;
        for (size_t t = 0; t < class_reps.size(); ++t)
            if (cusps_equivalent(M, s, class_reps[t])) {
                id = (long)t;
                break;
            }
        if (id < 0) {
            id = (long)class_reps.size();
            class_reps.push_back(s);
        }
        cusp_memo.emplace(key, id);
        return id;
    };
    for (long x = 0; x < P; ++x) {
        Mat22 m = lift_cd(M, p1_.rep(x).first, p1_.rep(x).second);
        class_of(m.a, m.c);
        class_of(m.b, m.d);
    }
    long nc = (long)class_reps.size();
    if (nc != genus_.nu_inf) throw error(errc::internal, "cusp class count != nu_inf");

    std::vector<long> merged(nc);
    std::iota(merged.begin(), merged.end(), 0L);
    if (sign_ == Sign::plus) {
        // identify each cusp class with its negative
        std::function<long(long)> root = [&](long x) {
            while (merged[x] != x) x = merged[x] = merged[merged[x]];
            return x;
        };
        for (long t = 0; t < nc; ++t) {
            long u = class_of(-class_reps[t].a, class_reps[t].c);
            long a = root(t), b = root(u);
            if (a != b) merged[std::max(a, b)] = std::min(a, b);
        }
        for (long t = 0; t < nc; ++t) merged[t] = root(t);
    }
    std::map<long, long> col_of_root;
    std::vector<long> class_col(nc);
    for (long t = 0; t < nc; ++t) {
        long r = merged[t];
        auto it = col_of_root.find(r);
        if (it == col_of_root.end()) it = col_of_root.emplace(r, (long)col_of_root.size()).first;
        class_col[t] = it->second;
    }
    cusp_classes_ = (long)col_of_root.size();

    long expected = sign_ == Sign::zero ? 2 * genus_.genus + genus_.nu_inf - 1
                                        : genus_.genus + cusp_classes_ - 1;
    if (D != expected) throw error(errc::internal, "ambient dimension mismatch");

    MatrixZ bd_sur(D, cusp_classes_);
    for (long i = 0; i < D; ++i) {
        Mat22 m = lift_cd(M, p1_.rep(surviving_[i]).first, p1_.rep(surviving_[i]).second);
        bd_sur.at(i, class_col[class_of(m.a, m.c)]) += 1;
        bd_sur.at(i, class_col[class_of(m.b, m.d)]) -= 1;
    }
    MatrixZ bt = w_.mul(bd_sur); // k * boundary of the public basis
    boundary_ = MatrixQ(D, cusp_classes_);
    for (long i = 0; i < D; ++i)
        for (long j = 0; j < cusp_classes_; ++j)
            boundary_.at(i, j) = rat(bt.at(i, j)) / rat(k_);

    cuspidal_ = integer_left_kernel(bt);
    long gexp = sign_ == Sign::zero ? 2 * genus_.genus : genus_.genus;
    if (cuspidal_.nrows() != gexp) throw error(errc::internal, "cuspidal dimension mismatch");

    fingerprint_ = sha256_hex(serialize());
}

std::string ModSymSpace::serialize() const {
    std::ostringstream os;
    os << "heckeraise space 1\n";
    os << "level " << level_ << '\n';
    os << "sign " << sign_name(sign_) << '\n';
    os << "dim " << dim_ << '\n';
    os << "k " << to_string(k_) << '\n';
    os << "cusp_classes " << cusp_classes_ << '\n';
    os << "surviving " << surviving_.size();
    for (long s : surviving_) os << ' ' << s;
    os << '\n';
    emit_matrix(os, "W", w_);
    emit_matrix(os, "proj", proj_);
    emit_matrix(os, "cuspidal", cuspidal_);
    MatrixZ bt(dim_, cusp_classes_);
    for (long i = 0; i < dim_; ++i)
        for (long j = 0; j < cusp_classes_; ++j) {
            rat v = boundary_.at(i, j) * rat(k_);
            bt.at(i, j) = v.get_num();
        }
    emit_matrix(os, "kboundary", bt);
    return os.str();
}

ModSymSpace ModSymSpace::deserialize(const std::string& data) {
    std::istringstream is(data);
    std::string t1, t2;
    int ver = 0;
    if (!(is >> t1 >> t2 >> ver) || t1 != "heckeraise" || t2 != "space" || ver != 1)
        throw error(errc::parse_error, "space data: bad header");
    ModSymSpace s;
    std::string tag, sgn;
    long level = 0, dim = 0, nclass = 0;
    std::string kstr;
    if (!(is >> tag >> level) || tag != "level") throw error(errc::parse_error, "space data: level");
    if (!(is >> tag >> sgn) || tag != "sign" || (sgn != "0" && sgn != "+"))
        throw error(errc::parse_error, "space data: sign");
    if (!(is >> tag >> dim) || tag != "dim") throw error(errc::parse_error, "space data: dim");
    if (!(is >> tag >> kstr) || tag != "k") throw error(errc::parse_error, "space data: k");
    if (!(is >> tag >> nclass) || tag != "cusp_classes")
        throw error(errc::parse_error, "space data: cusp_classes");
    long nsur = 0;
    if (!(is >> tag >> nsur) || tag != "surviving")
        throw error(errc::parse_error, "space data: surviving");
    s.level_ = level;
    s.sign_ = sgn == "0" ? Sign::zero : Sign::plus;
    s.dim_ = dim;
    s.k_ = bigint(kstr);
    s.cusp_classes_ = nclass;
    s.surviving_.resize(nsur);
    for (long i = 0; i < nsur; ++i)
        if (!(is >> s.surviving_[i])) throw error(errc::parse_error, "space data: surviving list");
    s.w_ = read_matrix(is, "W");
    s.proj_ = read_matrix(is, "proj");
    s.cuspidal_ = read_matrix(is, "cuspidal");
    MatrixZ bt = read_matrix(is, "kboundary");
    s.genus_ = genus_data(level);
    s.p1_ = P1Table(level);
    if (s.p1_.size() != s.proj_.nrows() || s.w_.nrows() != dim || s.w_.ncols() != dim ||
        s.proj_.ncols() != dim || s.cuspidal_.ncols() != dim || bt.nrows() != dim ||
        bt.ncols() != nclass || nsur != dim)
        throw error(errc::parse_error, "space data: inconsistent shapes");
    s.boundary_ = MatrixQ(dim, nclass);
    for (long i = 0; i < dim; ++i)
        for (long j = 0; j < nclass; ++j)
            s.boundary_.at(i, j) = rat(bt.at(i, j)) / rat(s.k_);
    s.fingerprint_ = sha256_hex(s.serialize());
    return s;
}

} // namespace heckeraise
