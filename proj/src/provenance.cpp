#include "ricci/provenance.hpp"

#include <cstdio>

namespace ricci {

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

Provenance Provenance::from_config(std::string_view canonical_config, std::uint64_t seed) {
    Provenance p;
    p.config_hash = hex64(fnv1a64(canonical_config));
    p.seed = seed;
    return p;
}

std::string Provenance::comment_line() const {
    return "# config_hash=" + config_hash + " version=" + version + " seed=" + std::to_string(seed);
}

}  // namespace ricci
