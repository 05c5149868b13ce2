#include "heckeraise/raise.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "heckeraise/cache.hpp"
#include "heckeraise/sha256.hpp"

namespace heckeraise {

namespace {

uint64_t reduce_big(const bigint& x, uint64_t m) {
    return (uint64_t)mpz_fdiv_ui(x.get_mpz_t(), (unsigned long)m);
}

std::string lattice_payload(const MatrixZ& V) {
    std::string s = std::to_string(V.nrows()) + " " + std::to_string(V.ncols()) + "\n";
    for (long i = 0; i < V.nrows(); ++i) {
        for (long j = 0; j < V.ncols(); ++j) {
            if (j) s += ' ';
            s += to_string(V.at(i, j));
        }
        s += '\n';
    }
    return s;
}

std::string pnew_fingerprint(const ModSymSpace& big, const MatrixZ& V) {
    return sha256_hex(big.serialize() + "\npnew\n" + lattice_payload(V));
}

} // namespace

OpApplier::OpApplier(std::shared_ptr<const ModSymSpace> space, ResidueRing ring)
    : space_(std::move(space)), ring_(ring), work_(ring) {
    const ModSymSpace& S = *space_;
    bigint kred, ell((unsigned long)ring_.ell);
    int v = (int)mpz_remove(kred.get_mpz_t(), S.basis_den().get_mpz_t(), ell.get_mpz_t());
    vshift_ = v;
    work_ = ResidueRing(ring_.ell, ring_.n + v);
    // keeps every __uint128_t accumulation below 2^128 with room to spare
    if (work_.modulus >= (1ULL << 40))
        throw error(errc::internal, "working modulus ell^" + std::to_string(ring_.n + v) +
                                        " too large at level " + std::to_string(S.level()));
    kinv_ = ring_.inv(reduce_big(kred, ring_.modulus));
    const long D = S.dim(), P = S.p1().size();
    wmod_.resize((size_t)D * D);
    for (long i = 0; i < D; ++i)
        for (long j = 0; j < D; ++j)
            wmod_[(size_t)i * D + j] = reduce_big(S.basis_w().at(i, j), work_.modulus);
    projmod_.resize((size_t)P * D);
    for (long x = 0; x < P; ++x)
        for (long j = 0; j < D; ++j)
            projmod_[(size_t)x * D + j] = reduce_big(S.projection().at(x, j), work_.modulus);
}

std::vector<uint64_t> OpApplier::apply(const std::vector<uint64_t>& z, long q) {
    const ModSymSpace& S = *space_;
    const long D = S.dim(), P = S.p1().size();
    if ((long)z.size() != D) throw error(errc::dimension_mismatch, "OpApplier::apply");
    const uint64_t mw = work_.modulus;

    // y = z * W mod ell^(n+v): coefficients on the surviving generators
    std::vector<uint64_t> y(D);
    for (long t = 0; t < D; ++t) {
        __uint128_t acc = 0;
        for (long i = 0; i < D; ++i) acc += (__uint128_t)z[i] * wmod_[(size_t)i * D + t];
        y[t] = (uint64_t)(acc % mw);
    }

    // gather: acc[x] = signed sum of y_t over family terms landing on symbol x
    std::vector<uint64_t> acc(P, 0);
    std::vector<unsigned char> seen(P, 0);
    std::vector<long> touched;
    auto bump = [&](long x, uint64_t val) {
        if (!seen[x]) {
            seen[x] = 1;
            touched.push_back(x);
        }
        acc[x] = work_.add(acc[x], val);
    };
    if (S.level() % q != 0) {
        auto it = merel_.find(q);
        if (it == merel_.end()) it = merel_.emplace(q, merel_family(q)).first;
        const auto& fam = it->second;
        for (long t = 0; t < D; ++t) {
            if (y[t] == 0) continue;
            auto [c, d] = S.p1().rep(S.surviving()[t]);
            for (const Mat22& h : fam) {
                long x = S.p1().try_index(c * h.a + d * h.c, c * h.b + d * h.d);
                if (x >= 0) bump(x, y[t]);
            }
        }
    } else {
        auto it = uq_terms_.find(q);
        if (it == uq_terms_.end()) {
            if (!is_prime((uint64_t)q)) throw error(errc::not_prime, "OpApplier::apply");
            std::vector<std::vector<std::pair<long, int>>> terms(D);
            for (long t = 0; t < D; ++t) {
                Mat22 g = S.lift(S.surviving()[t]);
                for (long r = 0; r < q; ++r)
                    path_terms(S.p1(), g.b + r * g.d, q * g.d, g.a + r * g.c, q * g.c, terms[t]);
            }
            it = uq_terms_.emplace(q, std::move(terms)).first;
        }
        for (long t = 0; t < D; ++t) {
            if (y[t] == 0) continue;
            uint64_t yneg = work_.neg(y[t]);
            for (auto [x, sg] : it->second[t]) bump(x, sg > 0 ? y[t] : yneg);
        }
    }

    // project back through the P x D projection, then undo the basis
    // denominator: result = (z*W*osur) / k with k = ell^v * unit
    std::vector<__uint128_t> sums(D, 0);
    for (long x : touched) {
        const uint64_t a = acc[x];
        if (!a) continue;
        const uint64_t* row = &projmod_[(size_t)x * D];
        for (long j = 0; j < D; ++j) sums[j] += (__uint128_t)a * row[j];
    }
    uint64_t lv = 1;
    for (int i = 0; i < vshift_; ++i) lv *= ring_.ell;
    std::vector<uint64_t> out(D);
    for (long j = 0; j < D; ++j) {
        uint64_t r = (uint64_t)(sums[j] % mw);
        if (r % lv != 0) throw error(errc::internal, "operator does not preserve lattice");
        out[j] = ring_.mul(kinv_, (r / lv) % ring_.modulus);
    }
    return out;
}

std::vector<std::pair<long, int>> raising_primes(EigenSystem& e, ResidueRing ring,
                                                 long pmax, bool include_ell) {
    e.ensure_through(pmax);
    std::vector<std::pair<long, int>> out;
    for (long p : primes_up_to(pmax)) {
        if (e.level % p == 0) continue;
        if ((uint64_t)p == ring.ell && !include_ell) continue;
        uint64_t ap = reduce_big(e.a_at(p), ring.modulus);
        uint64_t t = ring.reduce(p + 1);
        if (ap == t) out.emplace_back(p, +1);
        if (ap == ring.neg(t)) out.emplace_back(p, -1);
    }
    return out;
}

namespace {

using nlohmann::json;

long parse_long(const json& j, const std::string& what) {
    if (!j.is_string()) throw error(errc::parse_error, what + ": expected decimal string");
    const std::string& s = j.get_ref<const std::string&>();
    if (s.empty()) throw error(errc::parse_error, what + ": empty");
    size_t idx = 0;
    long v = 0;
    try {
        v = std::stol(s, &idx);
    } catch (const std::exception&) {
        throw error(errc::parse_error, what + ": not an integer: " + s);
    }
    if (idx != s.size()) throw error(errc::parse_error, what + ": trailing junk: " + s);
    return v;
}

uint64_t parse_residue(const json& j, const std::string& what) {
    long v = parse_long(j, what);
    if (v < 0) throw error(errc::parse_error, what + ": negative residue");
    return (uint64_t)v;
}

} // namespace

std::string RaiseCertificate::to_json() const {
    json j;
    j["ap_mod"] = std::to_string(ap_mod);
    j["basis_fingerprint"] = basis_fingerprint;
    j["bound"] = std::to_string(bound);
    json evs = json::array();
    for (const auto& [q, a] : eigenvalues)
        evs.push_back(json::array({std::to_string(q), std::to_string(a)}));
    j["eigenvalues"] = std::move(evs);
    j["ell"] = std::to_string(ell);
    j["format_version"] = "1";
    j["level"] = std::to_string(level);
    j["n"] = std::to_string(n);
    j["p"] = std::to_string(p);
    j["screen"] = screen;
    j["sign"] = std::to_string(sign);
    j["space_sign"] = sign_name(space_sign);
    j["up_eigenvalue"] = std::to_string(up_eigenvalue);
    j["versions"] = json::object({{"space_format", "1"}});
    json w = json::array();
    for (uint64_t x : witness) w.push_back(std::to_string(x));
    j["witness"] = std::move(w);
    return j.dump();
}

RaiseCertificate RaiseCertificate::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& ex) {
        throw error(errc::parse_error, std::string("certificate: ") + ex.what());
    }
    if (!j.is_object()) throw error(errc::parse_error, "certificate: not an object");
    static const std::set<std::string> expected = {
        "ap_mod", "basis_fingerprint", "bound",      "eigenvalues",
        "ell",    "format_version",    "level",      "n",
        "p",      "screen",            "sign",       "space_sign",
        "up_eigenvalue", "versions",   "witness"};
    std::set<std::string> got;
    for (auto it = j.begin(); it != j.end(); ++it) got.insert(it.key());
    if (got != expected) throw error(errc::parse_error, "certificate: wrong key set");
    if (j["format_version"] != "1")
        throw error(errc::parse_error, "certificate: unknown format_version");
    if (!j["versions"].is_object() || j["versions"].size() != 1 ||
        j["versions"].value("space_format", "") != "1")
        throw error(errc::parse_error, "certificate: unknown versions");

    RaiseCertificate c;
    c.level = parse_long(j["level"], "level");
    c.p = parse_long(j["p"], "p");
    c.ell = parse_residue(j["ell"], "ell");
    c.n = (int)parse_long(j["n"], "n");
    c.sign = (int)parse_long(j["sign"], "sign");
    if (!j["space_sign"].is_string()) throw error(errc::parse_error, "space_sign");
    std::string ss = j["space_sign"].get<std::string>();
    if (ss == "0")
        c.space_sign = Sign::zero;
    else if (ss == "+")
        c.space_sign = Sign::plus;
    else
        throw error(errc::parse_error, "space_sign: " + ss);
    c.bound = parse_long(j["bound"], "bound");
    c.ap_mod = parse_residue(j["ap_mod"], "ap_mod");
    if (!j["eigenvalues"].is_array()) throw error(errc::parse_error, "eigenvalues");
    for (const auto& pr : j["eigenvalues"]) {
        if (!pr.is_array() || pr.size() != 2) throw error(errc::parse_error, "eigenvalue pair");
        c.eigenvalues.emplace_back(parse_long(pr[0], "eigenvalue prime"),
                                   parse_residue(pr[1], "eigenvalue"));
    }
    c.up_eigenvalue = parse_residue(j["up_eigenvalue"], "up_eigenvalue");
    if (!j["witness"].is_array()) throw error(errc::parse_error, "witness");
    for (const auto& x : j["witness"]) c.witness.push_back(parse_residue(x, "witness entry"));
    if (!j["basis_fingerprint"].is_string()) throw error(errc::parse_error, "basis_fingerprint");
    c.basis_fingerprint = j["basis_fingerprint"].get<std::string>();
    if (!j["screen"].is_string()) throw error(errc::parse_error, "screen");
    c.screen = j["screen"].get<std::string>();
    return c;
}

namespace {

std::string stage_text(const std::vector<std::pair<long, long>>& stages) {
    std::ostringstream os;
    os << "narrowing stages (prime, generators left):";
    for (const auto& [q, r] : stages) os << " (" << q << ", " << r << ")";
    return os.str();
}

// row * M over the ring, row length = M.nrows()
std::vector<uint64_t> row_times(const ResidueRing& ring, const std::vector<uint64_t>& row,
                                const MatrixR& M) {
    std::vector<uint64_t> out(M.ncols(), 0);
    for (long i = 0; i < M.nrows(); ++i) {
        uint64_t c = row[i];
        if (!c) continue;
        for (long j = 0; j < M.ncols(); ++j)
            out[j] = ring.add(out[j], ring.mul(c, M.at(i, j)));
    }
    return out;
}

} // namespace

RaiseCertificate certify(EigenSystem& e, long p, ResidueRing ring, int s,
                         Sign space_sign, bool skip_screen) {
    if (s != 1 && s != -1) throw error(errc::parse_error, "sign must be +1 or -1");
    if (!is_prime((uint64_t)p)) throw error(errc::not_prime, "certify: p = " + std::to_string(p));
    const long N = e.level;
    if (N % p == 0) throw error(errc::bad_level, "certify: p divides the level");
    const long bigN = N * p;
    const long bound = sturm_bound(bigN);
    e.ensure_through(std::max(bound, p));

    uint64_t ap = reduce_big(e.a_at(p), ring.modulus);
    uint64_t target = ring.reduce(p + 1);
    if (s < 0) target = ring.neg(target);
    if (ap != target)
        throw error(errc::hypothesis_failed,
                    "a_" + std::to_string(p) + " = " + std::to_string(ap) + " != " +
                        (s > 0 ? "+" : "-") + "(p+1) = " + std::to_string(target) + " mod " +
                        std::to_string(ring.modulus));

    // residual screen: mod-ell Eisenstein systems raise for trivial reasons
    ResidueRing base(ring.ell, 1);
    const long sb = sturm_bound(N);
    ModSystem m1 = reduce_system(e, base, sb);
    auto pf = prime_factors(N);
    std::set<long> avoid(pf.begin(), pf.end());
    avoid.insert((long)ring.ell);
    avoid.insert(p);
    bool eis = is_eisenstein(m1, avoid, sb);
    if (eis && !skip_screen)
        throw error(errc::screen_failed, "system is Eisenstein mod " + std::to_string(ring.ell));

    auto big = cached_space(bigN, space_sign);
    auto small = cached_space(N, space_sign);
    MatrixZ V = pnew_lattice(*big, *small, p);
    const long r0 = V.nrows(), D = big->dim();
    if (r0 == 0)
        throw no_witness_error("p-new lattice is zero at level " + std::to_string(bigN), 0, 0);

    MatrixR Vmod(ring, r0, D);
    for (long i = 0; i < r0; ++i)
        for (long j = 0; j < D; ++j) Vmod.at(i, j) = reduce_big(V.at(i, j), ring.modulus);
    MatrixR Y = right_inverse_mod(Vmod); // D x r0, recovers p-new coordinates

    OpApplier op(big, ring);
    ModSystem sys = reduce_system(e, ring, bound);

    MatrixR G = MatrixR::identity(ring, r0);
    std::vector<std::pair<long, long>> stages;
    auto constrain = [&](long q, uint64_t alpha) {
        HowellBuilder hb(ring, r0, true);
        for (long i = 0; i < G.nrows(); ++i) {
            std::vector<uint64_t> g(r0);
            for (long t = 0; t < r0; ++t) g[t] = G.at(i, t);
            std::vector<uint64_t> z = row_times(ring, g, Vmod);
            std::vector<uint64_t> y = op.apply(z, q);
            for (long j = 0; j < D; ++j) y[j] = ring.sub(y[j], ring.mul(alpha, z[j]));
            std::vector<uint64_t> cv = row_times(ring, y, Y);
            // the p-new lattice is saturated and Hecke stable, so y must lie
            // in its span mod ell^n; anything else is a bug upstream
            if (row_times(ring, cv, Vmod) != y)
                throw error(errc::internal, "constraint row left the p-new lattice");
            hb.insert(cv);
        }
        HowellBuilder canon(ring, r0, false);
        for (const auto& krow : hb.kernel_rows()) canon.insert(row_times(ring, krow, G));
        G = canon.finish().H;
        stages.emplace_back(q, G.nrows());
    };

    for (long q : primes_up_to(bound)) {
        if (q == p) continue;
        constrain(q, sys.a_mod.at(q));
        if (G.nrows() == 0) throw no_witness_error(stage_text(stages), q, 0);
    }
    constrain(p, ring.reduce(s));
    if (G.nrows() == 0) throw no_witness_error(stage_text(stages), p, 0);

    long wrow = -1;
    for (long i = 0; i < G.nrows() && wrow < 0; ++i)
        for (long j = 0; j < r0; ++j)
            if (ring.is_unit(G.at(i, j))) {
                wrow = i;
                break;
            }
    if (wrow < 0)
        throw no_witness_error("narrowed module has no ell-primitive vector; " +
                                   stage_text(stages),
                               p, G.nrows());

    RaiseCertificate cert;
    cert.level = N;
    cert.p = p;
    cert.ell = ring.ell;
    cert.n = ring.n;
    cert.sign = s;
    cert.space_sign = space_sign;
    cert.bound = bound;
    cert.ap_mod = ap;
    for (long q : primes_up_to(bound))
        if (q != p) cert.eigenvalues.emplace_back(q, sys.a_mod.at(q));
    cert.up_eigenvalue = ring.reduce(s);
    cert.witness.resize(r0);
    for (long j = 0; j < r0; ++j) cert.witness[j] = G.at(wrow, j);
    cert.basis_fingerprint = pnew_fingerprint(*big, V);
    cert.screen = eis ? "overridden" : "passed";
    return cert;
}

RaiseCertificate certify_auto(EigenSystem& e, long p, ResidueRing ring, int s,
                              bool skip_screen) {
    try {
        return certify(e, p, ring, s, Sign::plus, skip_screen);
    } catch (const no_witness_error&) {
        return certify(e, p, ring, s, Sign::zero, skip_screen);
    }
}

VerifyReport verify(const RaiseCertificate& cert) {
    VerifyReport rep;
    auto run = [&](const std::string& name, auto&& fn) {
        VerifyCheck c;
        c.name = name;
        try {
            c.pass = fn(c.detail);
        } catch (const std::exception& ex) {
            c.pass = false;
            c.detail = ex.what();
        }
        rep.checks.push_back(std::move(c));
        return rep.checks.back().pass;
    };

    std::optional<ResidueRing> ring;
    run("parameters", [&](std::string& detail) {
        if (cert.level < 1) {
            detail = "level < 1";
            return false;
        }
        if (!is_prime((uint64_t)cert.p)) {
            detail = "p not prime";
            return false;
        }
        if (cert.level % cert.p == 0) {
            detail = "p divides the level";
            return false;
        }
        if (cert.sign != 1 && cert.sign != -1) {
            detail = "sign not +-1";
            return false;
        }
        if (cert.screen != "passed" && cert.screen != "overridden") {
            detail = "screen flag: " + cert.screen;
            return false;
        }
        if (cert.level * cert.p > 200000) {
            detail = "level too large to verify";
            return false;
        }
        ring.emplace(cert.ell, cert.n); // throws on bad ell / n
        return true;
    });

    run("hypothesis", [&](std::string& detail) {
        if (!ring) {
            detail = "no ring";
            return false;
        }
        uint64_t target = ring->reduce(cert.p + 1);
        if (cert.sign < 0) target = ring->neg(target);
        if (cert.ap_mod != target) {
            detail = "ap_mod = " + std::to_string(cert.ap_mod) + ", s*(p+1) = " +
                     std::to_string(target);
            return false;
        }
        return true;
    });

    run("sturm_bound", [&](std::string& detail) {
        long expect = sturm_bound(cert.level * cert.p);
        if (cert.bound != expect) {
            detail = "bound " + std::to_string(cert.bound) + " != " + std::to_string(expect);
            return false;
        }
        return true;
    });

    run("coverage", [&](std::string& detail) {
        if (!ring) {
            detail = "no ring";
            return false;
        }
        if (cert.bound < 1 || cert.bound > 2000000) {
            detail = "bound out of range";
            return false;
        }
        std::vector<long> want;
        for (long q : primes_up_to(cert.bound))
            if (q != cert.p) want.push_back(q);
        if ((long)cert.eigenvalues.size() != (long)want.size()) {
            detail = "wrong eigenvalue count";
            return false;
        }
        for (size_t i = 0; i < want.size(); ++i) {
            if (cert.eigenvalues[i].first != want[i]) {
                detail = "expected prime " + std::to_string(want[i]) + " at slot " +
                         std::to_string(i);
                return false;
            }
            if (cert.eigenvalues[i].second >= ring->modulus) {
                detail = "eigenvalue at q = " + std::to_string(want[i]) + " not reduced";
                return false;
            }
        }
        if (cert.ap_mod >= ring->modulus) {
            detail = "ap_mod not reduced";
            return false;
        }
        if (cert.up_eigenvalue != ring->reduce(cert.sign)) {
            detail = "up_eigenvalue != sign";
            return false;
        }
        return true;
    });

    // rebuild the spaces directly (no cache) so later checks are grounded
    std::shared_ptr<const ModSymSpace> big;
    MatrixZ V;
    run("basis_fingerprint", [&](std::string& detail) {
        if (!ring) {
            detail = "parameters invalid";
            return false;
        }
        auto b = std::make_shared<ModSymSpace>(cert.level * cert.p, cert.space_sign);
        ModSymSpace small(cert.level, cert.space_sign);
        MatrixZ pn = pnew_lattice(*b, small, cert.p);
        std::string fp = pnew_fingerprint(*b, pn);
        big = std::move(b);
        V = std::move(pn);
        if (fp != cert.basis_fingerprint) {
            detail = "fingerprint mismatch: " + fp;
            return false;
        }
        return true;
    });

    run("witness_shape", [&](std::string& detail) {
        if (!big || !ring) {
            detail = "no space";
            return false;
        }
        if ((long)cert.witness.size() != V.nrows()) {
            detail = "witness length " + std::to_string(cert.witness.size()) + " != " +
                     std::to_string(V.nrows());
            return false;
        }
        bool nonzero = false;
        for (uint64_t x : cert.witness) {
            if (x >= ring->modulus) {
                detail = "entry not reduced";
                return false;
            }
            nonzero = nonzero || x != 0;
        }
        if (!nonzero) {
            detail = "witness is zero";
            return false;
        }
        return true;
    });

    run("witness_primitive", [&](std::string& detail) {
        if (!ring) {
            detail = "no ring";
            return false;
        }
        for (uint64_t x : cert.witness)
            if (x % cert.ell != 0) return true;
        detail = "all entries divisible by ell";
        return false;
    });

    std::optional<std::vector<uint64_t>> wtilde;
    std::optional<OpApplier> op;
    run("eigen_equations", [&](std::string& detail) {
        if (!big || !ring || (long)cert.witness.size() != V.nrows()) {
            detail = "no rebuilt basis";
            return false;
        }
        const long D = big->dim();
        MatrixR Vmod(*ring, V.nrows(), D);
        for (long i = 0; i < V.nrows(); ++i)
            for (long j = 0; j < D; ++j) Vmod.at(i, j) = reduce_big(V.at(i, j), ring->modulus);
        wtilde = row_times(*ring, cert.witness, Vmod);
        op.emplace(big, *ring);
        for (const auto& [q, alpha] : cert.eigenvalues) {
            if (!is_prime((uint64_t)q)) {
                detail = "q = " + std::to_string(q) + " not prime";
                return false;
            }
            std::vector<uint64_t> y = op->apply(*wtilde, q);
            for (long j = 0; j < D; ++j)
                if (y[j] != ring->mul(alpha, (*wtilde)[j])) {
                    detail = "T_" + std::to_string(q) + " w != " + std::to_string(alpha) + " w";
                    return false;
                }
        }
        return true;
    });

    run("up_equation", [&](std::string& detail) {
        if (!op || !wtilde) {
            detail = "no applier";
            return false;
        }
        uint64_t sres = ring->reduce(cert.sign);
        std::vector<uint64_t> y = op->apply(*wtilde, cert.p);
        for (size_t j = 0; j < wtilde->size(); ++j)
            if (y[j] != ring->mul(sres, (*wtilde)[j])) {
                detail = "U_p w != s w";
                return false;
            }
        return true;
    });

    run("screen", [&](std::string& detail) {
        if (!ring) {
            detail = "no ring";
            return false;
        }
        ResidueRing base(cert.ell, 1);
        ModSystem m1;
        m1.level = cert.level;
        m1.ring = base;
        m1.bound = sturm_bound(cert.level);
        for (const auto& [q, a] : cert.eigenvalues)
            if (q <= m1.bound) m1.a_mod[q] = a % cert.ell;
        auto pf = prime_factors(cert.level);
        std::set<long> avoid(pf.begin(), pf.end());
        avoid.insert((long)cert.ell);
        avoid.insert(cert.p);
        bool eis = is_eisenstein(m1, avoid, m1.bound);
        if (eis && cert.screen != "overridden") {
            detail = "system is Eisenstein but screen says " + cert.screen;
            return false;
        }
        if (!eis && cert.screen != "passed") {
            detail = "system is not Eisenstein but screen says " + cert.screen;
            return false;
        }
        return true;
    });

    return rep;
}

} // namespace heckeraise
