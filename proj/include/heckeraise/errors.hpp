#pragma once

#include <stdexcept>
#include <string>

namespace heckeraise {

enum class errc {
    not_prime,
    bad_exponent,
    bad_level,
    not_on_p1,
    dimension_mismatch,
    level_mismatch,
    bound_too_large,
    parse_error,
    coverage_gap,
    insufficient_eigenvalues,
    hypothesis_failed,
    screen_failed,
    no_witness,
    internal,
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::not_prime: return "not_prime";
    case errc::bad_exponent: return "bad_exponent";
    case errc::bad_level: return "bad_level";
    case errc::not_on_p1: return "not_on_p1";
    case errc::dimension_mismatch: return "dimension_mismatch";
    case errc::level_mismatch: return "level_mismatch";
    case errc::bound_too_large: return "bound_too_large";
    case errc::parse_error: return "parse_error";
    case errc::coverage_gap: return "coverage_gap";
    case errc::insufficient_eigenvalues: return "insufficient_eigenvalues";
    case errc::hypothesis_failed: return "hypothesis_failed";
    case errc::screen_failed: return "screen_failed";
    case errc::no_witness: return "no_witness";
    case errc::internal: return "internal";
    }
    return "unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

// Raised when the eigenvector narrowing in certify() empties out.  Records
// how far the narrowing got so callers can report where raising failed.
class no_witness_error : public error {
public:
    no_witness_error(const std::string& msg, long last_prime, long generators_left)
        : error(errc::no_witness, msg), last_prime_(last_prime),
          generators_left_(generators_left) {}
    long last_prime() const { return last_prime_; }
    long generators_left() const { return generators_left_; }

private:
    long last_prime_;
    long generators_left_;
};

} // namespace heckeraise
