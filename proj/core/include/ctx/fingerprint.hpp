#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ctx/snapshot.hpp"

namespace ctx {

/// Content address of a snapshot: SHA-256 of canonical_content(). Two
/// snapshots get equal fingerprints iff vocabulary and assertion set are
/// equal, regardless of input ordering, id or timestamp.
struct Fingerprint {
    std::array<std::uint8_t, 32> bytes{};

    auto operator<=>(const Fingerprint&) const = default;

    std::string hex() const;
    static std::optional<Fingerprint> from_hex(std::string_view text);
};

/// Digest of the canonical serialization. Requires a valid snapshot;
/// throws ValidationError otherwise.
Fingerprint fingerprint(const Snapshot& snapshot);

}  // namespace ctx
