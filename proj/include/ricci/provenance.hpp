#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ricci {

inline constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view text);
std::string hex64(std::uint64_t value);

// Stamped on every artifact written by the library and the CLI.
struct Provenance {
    std::string config_hash = "none";
    std::string version = kVersion;
    std::uint64_t seed = 0;

    static Provenance from_config(std::string_view canonical_config, std::uint64_t seed);
    // Single comment line, without trailing newline.
    std::string comment_line() const;
};

}  // namespace ricci
