#include "heckeraise/cache.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "heckeraise/sha256.hpp"

namespace heckeraise {

std::optional<std::filesystem::path> cache_dir() {
    const char* env = std::getenv("HECKE_RAISE_CACHE");
    if (env != nullptr) {
        std::string v(env);
        if (v == "off" || v.empty()) return std::nullopt;
        return std::filesystem::path(v);
    }
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg != nullptr && *xdg)
        return std::filesystem::path(xdg) / "hecke-raise";
    if (const char* home = std::getenv("HOME"); home != nullptr && *home)
        return std::filesystem::path(home) / ".cache" / "hecke-raise";
    return std::nullopt;
}

namespace {

std::optional<ModSymSpace> load_entry(const std::filesystem::path& file, long level, Sign sign) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return std::nullopt;
    std::string head;
    if (!std::getline(in, head)) return std::nullopt;
    std::ostringstream rest;
    rest << in.rdbuf();
    std::string payload = rest.str();
    if (head.rfind("sha256 ", 0) != 0 || head.substr(7) != sha256_hex(payload)) {
        std::cerr << "hecke-raise: cache entry " << file.string()
                  << " failed its checksum, recomputing\n";
        return std::nullopt;
    }
    try {
        ModSymSpace S = ModSymSpace::deserialize(payload);
        if (S.level() != level || S.sign() != sign) {
            std::cerr << "hecke-raise: cache entry " << file.string()
                      << " is for the wrong space, recomputing\n";
            return std::nullopt;
        }
        return S;
    } catch (const std::exception& ex) {
        std::cerr << "hecke-raise: cache entry " << file.string() << " is corrupt ("
                  << ex.what() << "), recomputing\n";
        return std::nullopt;
    }
}

void store_entry(const std::filesystem::path& file, const ModSymSpace& S) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    if (ec) return;
    std::string payload = S.serialize();
    std::filesystem::path tmp = file;
    tmp += ".tmp." + std::to_string((long)::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) return;
        out << "sha256 " << sha256_hex(payload) << "\n" << payload;
        if (!out.good()) {
            out.close();
            std::filesystem::remove(tmp, ec);
            return;
        }
    }
    std::filesystem::rename(tmp, file, ec); // atomic on POSIX
    if (ec) std::filesystem::remove(tmp, ec);
}

} // namespace

std::shared_ptr<const ModSymSpace> cached_space(long level, Sign sign) {
    auto dir = cache_dir();
    if (!dir) return std::make_shared<ModSymSpace>(level, sign);
    std::filesystem::path file =
        *dir / ("space_v1_M" + std::to_string(level) + "_s" +
                (sign == Sign::zero ? std::string("0") : std::string("p")) + ".txt");
    if (auto S = load_entry(file, level, sign))
        return std::make_shared<ModSymSpace>(std::move(*S));
    auto fresh = std::make_shared<ModSymSpace>(level, sign);
    store_entry(file, *fresh);
    return fresh;
}

} // namespace heckeraise
