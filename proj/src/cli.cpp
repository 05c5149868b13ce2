#include "heckeraise/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "heckeraise/cache.hpp"
#include "heckeraise/raise.hpp"

namespace heckeraise {

namespace {

using nlohmann::json;

long parse_long_str(const json& j, const std::string& what) {
    if (!j.is_string()) throw error(errc::parse_error, what + ": expected decimal string");
    const std::string& s = j.get_ref<const std::string&>();
    size_t idx = 0;
    long v = 0;
    try {
        v = std::stol(s, &idx);
    } catch (const std::exception&) {
        throw error(errc::parse_error, what + ": not an integer: " + s);
    }
    if (s.empty() || idx != s.size())
        throw error(errc::parse_error, what + ": not an integer: " + s);
    return v;
}

bigint parse_bigint_str(const json& j, const std::string& what) {
    if (!j.is_string()) throw error(errc::parse_error, what + ": expected decimal string");
    const std::string& s = j.get_ref<const std::string&>();
    size_t start = s.size() > 0 && s[0] == '-' ? 1 : 0;
    if (s.size() == start) throw error(errc::parse_error, what + ": empty");
    for (size_t i = start; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9')
            throw error(errc::parse_error, what + ": not an integer: " + s);
    return bigint(s);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::parse_error, "cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spill(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw error(errc::parse_error, "cannot write " + path);
    out << data;
    if (!out.good()) throw error(errc::parse_error, "cannot write " + path);
}

uint64_t reduce_big(const bigint& x, uint64_t m) {
    return (uint64_t)mpz_fdiv_ui(x.get_mpz_t(), (unsigned long)m);
}

Sign parse_sign_name(const std::string& s) {
    if (s == "0") return Sign::zero;
    if (s == "+") return Sign::plus;
    throw error(errc::parse_error, "sign must be 0 or +");
}

int exit_code_for(errc c) {
    switch (c) {
    case errc::hypothesis_failed:
    case errc::screen_failed:
    case errc::no_witness:
    case errc::internal:
        return 1;
    default:
        return 2;
    }
}

std::string system_line(EigenSystem& e, long bound) {
    std::ostringstream os;
    bool first = true;
    for (long q : primes_up_to(bound)) {
        if (!first) os << " ";
        first = false;
        os << "a_" << q << "=" << e.a_at(q).get_str();
    }
    return os.str();
}

EigenSystem chosen_system(long level, const std::string& sysfile, long index, long need) {
    if (!sysfile.empty()) {
        EigenSystem e = load_system(slurp(sysfile));
        if (level != 0 && e.level != level)
            throw error(errc::level_mismatch,
                        "--level " + std::to_string(level) + " but the system file is at level " +
                            std::to_string(e.level));
        return e;
    }
    if (level < 1) throw error(errc::bad_level, "--level is required without --system");
    auto S = cached_space(level, Sign::zero);
    auto systems = rational_eigensystems(S);
    if (index < 0 || index >= (long)systems.size())
        throw error(errc::parse_error, "--index " + std::to_string(index) + " out of range (" +
                                           std::to_string(systems.size()) + " systems)");
    EigenSystem e = std::move(systems[index]);
    e.ensure_through(need);
    return e;
}

} // namespace

EigenSystem load_system(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& ex) {
        throw error(errc::parse_error, std::string("eigen system: ") + ex.what());
    }
    if (!j.is_object() || j.size() != 3 || !j.contains("bound") || !j.contains("level") ||
        !j.contains("pairs"))
        throw error(errc::parse_error, "eigen system: want keys bound, level, pairs");
    EigenSystem e;
    e.level = parse_long_str(j["level"], "level");
    e.bound = parse_long_str(j["bound"], "bound");
    if (e.level < 1) throw error(errc::parse_error, "eigen system: bad level");
    if (e.bound < 1) throw error(errc::parse_error, "eigen system: bad bound");
    if (!j["pairs"].is_array()) throw error(errc::parse_error, "eigen system: pairs");
    for (const auto& pr : j["pairs"]) {
        if (!pr.is_array() || pr.size() != 2)
            throw error(errc::parse_error, "eigen system: malformed pair");
        long q = parse_long_str(pr[0], "pair prime");
        if (!is_prime((uint64_t)q)) throw error(errc::parse_error,
                                                "eigen system: " + std::to_string(q) + " is not prime");
        if (e.a.count(q)) throw error(errc::parse_error,
                                      "eigen system: duplicate prime " + std::to_string(q));
        e.a[q] = parse_bigint_str(pr[1], "a_" + std::to_string(q));
    }
    for (long q : primes_up_to(e.bound))
        if (!e.a.count(q))
            throw error(errc::coverage_gap, "eigen system: missing a_" + std::to_string(q));
    e.source = "user";
    return e;
}

std::string save_system(const EigenSystem& e) {
    json j;
    j["bound"] = std::to_string(e.bound);
    j["level"] = std::to_string(e.level);
    json pairs = json::array();
    for (long q : primes_up_to(e.bound)) {
        auto it = e.a.find(q);
        if (it == e.a.end())
            throw error(errc::coverage_gap, "save_system: missing a_" + std::to_string(q));
        pairs.push_back(json::array({std::to_string(q), it->second.get_str()}));
    }
    j["pairs"] = std::move(pairs);
    return j.dump();
}

int run_cli(int argc, char** argv) {
    CLI::App app{"weight-2 modular symbols for Gamma_0(M) and constructive level raising mod ell^n"};
    app.require_subcommand(1);
    int rc = 0;

    // genus
    auto* cg = app.add_subcommand("genus", "print the genus of X_0(M)");
    long g_M = 0;
    cg->add_option("M", g_M, "level")->required();
    cg->callback([&] { std::cout << genus_data(g_M).genus << "\n"; });

    // space
    auto* cs = app.add_subcommand("space", "summarize the modular symbol space at level M");
    long s_M = 0;
    std::string s_sign = "0";
    cs->add_option("M", s_M, "level")->required();
    cs->add_option("--sign", s_sign, "0 (full) or + (plus quotient)")
        ->check(CLI::IsMember({"0", "+"}));
    cs->callback([&] {
        auto S = cached_space(s_M, parse_sign_name(s_sign));
        const GenusData& gd = S->genus();
        std::cout << "level " << S->level() << " sign " << sign_name(S->sign()) << "\n"
                  << "psi " << gd.psi << " nu2 " << gd.nu2 << " nu3 " << gd.nu3 << " cusps "
                  << gd.nu_inf << " genus " << gd.genus << "\n"
                  << "dim " << S->dim() << " cuspidal " << S->cuspidal_dim() << " cusp_classes "
                  << S->cusp_class_count() << "\n"
                  << "fingerprint " << S->fingerprint() << "\n";
    });

    // eigen
    auto* ce = app.add_subcommand("eigen", "rational Hecke eigen-systems at level N");
    long e_N = 0, e_bound = 0, e_index = 0;
    std::string e_sign = "0", e_out;
    ce->add_option("N", e_N, "level")->required();
    ce->add_option("--bound", e_bound, "report a_q for primes q <= bound (default: Sturm bound)");
    ce->add_option("--sign", e_sign, "space sign")->check(CLI::IsMember({"0", "+"}));
    ce->add_option("--out", e_out, "write one system as JSON");
    ce->add_option("--index", e_index, "which system --out writes (default 0)");
    ce->callback([&] {
        auto S = cached_space(e_N, parse_sign_name(e_sign));
        std::vector<long> skipped;
        auto systems = rational_eigensystems(S, &skipped);
        long b = e_bound > 0 ? e_bound : sturm_bound(e_N);
        for (size_t i = 0; i < systems.size(); ++i) {
            systems[i].ensure_through(b);
            std::cout << "system " << i << ": " << system_line(systems[i], b) << "\n";
        }
        for (long d : skipped) std::cout << "skipped: irrational block of dimension " << d << "\n";
        if (systems.empty()) std::cout << "no rational eigensystems\n";
        if (!e_out.empty()) {
            if (e_index < 0 || e_index >= (long)systems.size())
                throw error(errc::parse_error,
                            "--index " + std::to_string(e_index) + " out of range (" +
                                std::to_string(systems.size()) + " systems)");
            spill(e_out, save_system(systems[e_index]) + "\n");
        }
    });

    // search
    auto* cr = app.add_subcommand("search", "raising primes p with a_p = +-(p+1) mod ell^n");
    long r_N = 0, r_pmax = 0, r_index = 0;
    uint64_t r_ell = 0;
    int r_n = 1;
    bool r_incl = false;
    std::string r_sys;
    cr->add_option("--level", r_N, "level (or take it from --system)");
    cr->add_option("--ell", r_ell, "congruence prime")->required();
    cr->add_option("--n", r_n, "congruence exponent (default 1)");
    cr->add_option("--pmax", r_pmax, "search primes p <= pmax")->required();
    cr->add_flag("--include-ell", r_incl, "also consider p = ell");
    cr->add_option("--system", r_sys, "eigen-system JSON file");
    cr->add_option("--index", r_index, "which computed system to use (default 0)");
    cr->callback([&] {
        ResidueRing ring(r_ell, r_n);
        EigenSystem e = chosen_system(r_N, r_sys, r_index, r_pmax);
        auto found = raising_primes(e, ring, r_pmax, r_incl);
        for (auto [p, s] : found)
            std::cout << "p=" << p << " s=" << (s > 0 ? "+1" : "-1") << "\n";
        if (found.empty()) {
            std::cerr << "no raising primes up to " << r_pmax << "\n";
            rc = 1;
        }
    });

    // certify
    auto* cc = app.add_subcommand("certify", "produce a level-raising certificate at level N*p");
    long c_N = 0, c_p = 0;
    uint64_t c_ell = 0;
    int c_n = 1;
    std::string c_sign, c_sys, c_out, c_space_sign = "auto";
    bool c_skip = false;
    cc->add_option("--level", c_N, "base level (or take it from --system)");
    cc->add_option("--p", c_p, "raising prime")->required();
    cc->add_option("--ell", c_ell, "congruence prime")->required();
    cc->add_option("--n", c_n, "congruence exponent (default 1)");
    cc->add_option("--sign", c_sign, "+ for a_p = p+1, - for a_p = -(p+1)")
        ->required()
        ->check(CLI::IsMember({"+", "-", "+1", "-1"}));
    cc->add_option("--system", c_sys, "eigen-system JSON file");
    cc->add_option("--out", c_out, "write the certificate here instead of stdout");
    cc->add_flag("--unsafe-skip-screen", c_skip, "certify even when the system is Eisenstein");
    cc->add_option("--space-sign", c_space_sign, "modular symbol sign to search in")
        ->check(CLI::IsMember({"auto", "0", "+"}));
    cc->callback([&] {
        ResidueRing ring(c_ell, c_n);
        if (c_N >= 1 && c_N % c_p == 0)
            throw error(errc::bad_level, "certify: p divides the level");
        int s = (c_sign == "+" || c_sign == "+1") ? +1 : -1;
        EigenSystem e = [&] {
            if (!c_sys.empty() || c_N < 1) return chosen_system(c_N, c_sys, 0, c_p);
            // no file: pick the first computed system satisfying the hypothesis
            auto S = cached_space(c_N, Sign::zero);
            auto systems = rational_eigensystems(S);
            uint64_t target = ring.reduce(c_p + 1);
            if (s < 0) target = ring.neg(target);
            for (auto& sys : systems) {
                if (reduce_big(sys.a_at(c_p), ring.modulus) == target) return std::move(sys);
            }
            throw error(errc::hypothesis_failed,
                        "no rational eigen-system at level " + std::to_string(c_N) +
                            " has a_" + std::to_string(c_p) + " = " + c_sign + "(p+1) mod " +
                            std::to_string(ring.modulus));
        }();
        RaiseCertificate cert =
            c_space_sign == "auto"
                ? certify_auto(e, c_p, ring, s, c_skip)
                : certify(e, c_p, ring, s, parse_sign_name(c_space_sign), c_skip);
        if (c_out.empty())
            std::cout << cert.to_json() << "\n";
        else
            spill(c_out, cert.to_json() + "\n");
    });

    // verify
    auto* cv = app.add_subcommand("verify", "recheck a certificate from scratch");
    std::string v_file;
    cv->add_option("certificate", v_file, "certificate JSON file")->required();
    cv->callback([&] {
        RaiseCertificate cert = RaiseCertificate::from_json(slurp(v_file));
        VerifyReport rep = verify(cert);
        for (const auto& c : rep.checks) {
            std::cout << "check " << c.name << ": " << (c.pass ? "ok" : "FAIL");
            if (!c.pass && !c.detail.empty()) std::cout << " (" << c.detail << ")";
            std::cout << "\n";
        }
        if (rep.ok()) {
            std::cout << "verification succeeded\n";
        } else {
            std::cout << "verification failed\n";
            rc = 1;
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::CallForAllHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError& ex) {
        app.exit(ex);
        return 2;
    } catch (const error& ex) {
        std::cerr << "hecke-raise: " << ex.what() << "\n";
        return exit_code_for(ex.code());
    } catch (const std::exception& ex) {
        std::cerr << "hecke-raise: " << ex.what() << "\n";
        return 1;
    }
    return rc;
}

} // namespace heckeraise
