#pragma once

#include <cstdint>
#include <string>

namespace heckeraise {

// FIPS 180-4 SHA-256, enough for content fingerprints; not a general
// crypto library.  Returns lowercase hex.
std::string sha256_hex(const std::string& data);

} // namespace heckeraise
