#include "ctx/fingerprint.hpp"

#include <openssl/evp.h>

#include <stdexcept>

#include "ctx/errors.hpp"

namespace ctx {

std::string Fingerprint::hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

std::optional<Fingerprint> Fingerprint::from_hex(std::string_view text) {
    if (text.size() != 64) return std::nullopt;
    Fingerprint fp;
    for (std::size_t i = 0; i < 32; ++i) {
        auto nibble = [](char c) -> int {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            if (c >= 'A' && c <= 'F') return c - 'A' + 10;
            return -1;
        };
        const int hi = nibble(text[2 * i]);
        const int lo = nibble(text[2 * i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        fp.bytes[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return fp;
}

Fingerprint fingerprint(const Snapshot& snapshot) {
    if (const auto report = validate(snapshot); !report.ok()) {
        throw ValidationError("cannot fingerprint an invalid snapshot:\n" + report.to_text());
    }
    const std::string content = canonical_content(snapshot);

    Fingerprint fp;
    unsigned int written = 0;
    if (EVP_Digest(content.data(), content.size(), fp.bytes.data(), &written, EVP_sha256(),
                   nullptr) != 1 ||
        written != fp.bytes.size()) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    return fp;
}

}  // namespace ctx
