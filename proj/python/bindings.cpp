#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heckeraise/cache.hpp"
#include "heckeraise/cli.hpp"
#include "heckeraise/raise.hpp"

namespace py = pybind11;
using namespace heckeraise;

namespace {

py::object py_bigint(const bigint& x) {
    std::string s = x.get_str();
    return py::reinterpret_steal<py::object>(PyLong_FromString(s.c_str(), nullptr, 10));
}

Sign sign_of(const std::string& s) {
    if (s == "0") return Sign::zero;
    if (s == "+") return Sign::plus;
    throw error(errc::parse_error, "sign must be 0 or +");
}

// same selection rule as the command line: an explicit system file wins,
// otherwise the first computed system (certify: first matching a_p)
EigenSystem pick_system(long level, const std::string& system_json) {
    if (!system_json.empty()) {
        EigenSystem e = load_system(system_json);
        if (level != 0 && e.level != level)
            throw error(errc::level_mismatch, "level does not match the system");
        return e;
    }
    auto S = cached_space(level, Sign::zero);
    auto systems = rational_eigensystems(S);
    if (systems.empty())
        throw error(errc::insufficient_eigenvalues,
                    "no rational eigen-system at level " + std::to_string(level));
    return std::move(systems[0]);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "weight-2 modular symbols for Gamma_0(M) and level raising mod ell^n";

    m.def("genus", [](long M) { return genus_data(M).genus; }, py::arg("M"),
          "genus of X_0(M)");

    m.def("sturm_bound", &sturm_bound, py::arg("M"),
          "eigen-systems agreeing at primes up to this bound agree everywhere");

    m.def(
        "space_summary",
        [](long M, const std::string& sign) {
            auto S = cached_space(M, sign_of(sign));
            py::dict d;
            d["level"] = S->level();
            d["sign"] = sign_name(S->sign());
            d["psi"] = S->genus().psi;
            d["cusps"] = S->genus().nu_inf;
            d["genus"] = S->genus().genus;
            d["dim"] = S->dim();
            d["cuspidal_dim"] = S->cuspidal_dim();
            d["fingerprint"] = S->fingerprint();
            return d;
        },
        py::arg("M"), py::arg("sign") = "0", "dimensions and fingerprint of the space");

    m.def(
        "eigensystems",
        [](long N, long bound, const std::string& sign) {
            auto S = cached_space(N, sign_of(sign));
            auto systems = rational_eigensystems(S);
            long b = bound > 0 ? bound : sturm_bound(N);
            py::list out;
            for (auto& e : systems) {
                e.ensure_through(b);
                py::dict d;
                d["level"] = e.level;
                d["bound"] = b;
                py::dict a;
                for (long q : primes_up_to(b)) a[py::int_(q)] = py_bigint(e.a_at(q));
                d["a"] = a;
                out.append(d);
            }
            return out;
        },
        py::arg("N"), py::arg("bound") = 0, py::arg("sign") = "0",
        "rational Hecke eigen-systems with a_q through the bound");

    m.def(
        "search",
        [](long level, uint64_t ell, long pmax, int n, bool include_ell,
           const std::string& system_json) {
            EigenSystem e = pick_system(level, system_json);
            return raising_primes(e, ResidueRing(ell, n), pmax, include_ell);
        },
        py::arg("level") = 0, py::arg("ell"), py::arg("pmax"), py::arg("n") = 1,
        py::arg("include_ell") = false, py::arg("system_json") = "",
        "raising primes (p, s) with a_p = s*(p+1) mod ell^n");

    m.def(
        "certify",
        [](long level, long p, uint64_t ell, int sign, int n, bool skip_screen,
           const std::string& space_sign, const std::string& system_json) {
            ResidueRing ring(ell, n);
            EigenSystem e = [&] {
                if (!system_json.empty()) return pick_system(level, system_json);
                auto S = cached_space(level, Sign::zero);
                auto systems = rational_eigensystems(S);
                uint64_t target = ring.reduce(p + 1);
                if (sign < 0) target = ring.neg(target);
                for (auto& sys : systems)
                    if ((uint64_t)mpz_fdiv_ui(sys.a_at(p).get_mpz_t(), ring.modulus) == target)
                        return std::move(sys);
                throw error(errc::hypothesis_failed,
                            "no system at level " + std::to_string(level) +
                                " satisfies the congruence at p");
            }();
            RaiseCertificate cert = space_sign == "auto"
                                        ? certify_auto(e, p, ring, sign, skip_screen)
                                        : certify(e, p, ring, sign, sign_of(space_sign),
                                                  skip_screen);
            return cert.to_json();
        },
        py::arg("level") = 0, py::arg("p"), py::arg("ell"), py::arg("sign"),
        py::arg("n") = 1, py::arg("skip_screen") = false, py::arg("space_sign") = "auto",
        py::arg("system_json") = "",
        "produce a level-raising certificate as canonical JSON");

    m.def(
        "verify",
        [](const std::string& cert_json) {
            VerifyReport rep = verify(RaiseCertificate::from_json(cert_json));
            py::list checks;
            for (const auto& c : rep.checks)
                checks.append(py::make_tuple(c.name, c.pass, c.detail));
            py::dict d;
            d["ok"] = rep.ok();
            d["checks"] = checks;
            return d;
        },
        py::arg("cert_json"), "recheck a certificate from scratch");
}
