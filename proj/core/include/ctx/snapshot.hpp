#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ctx/assertion.hpp"

namespace ctx {

/// One immutable context model: TBox vocabulary plus ABox assertion set,
/// stamped with a logical timestamp. Content (vocabulary + abox) is what
/// identifies a context; id and timestamp are bookkeeping.
class Snapshot {
public:
    Snapshot() = default;
    Snapshot(std::string id, std::uint64_t timestamp, Vocabulary vocabulary, AssertionSet abox)
        : id_(std::move(id)),
          timestamp_(timestamp),
          vocabulary_(std::move(vocabulary)),
          abox_(std::move(abox)) {}

    const std::string& id() const { return id_; }
    std::uint64_t timestamp() const { return timestamp_; }
    const Vocabulary& vocabulary() const { return vocabulary_; }
    const AssertionSet& abox() const { return abox_; }

    /// Equality of vocabulary and assertion set, ignoring id and timestamp.
    bool content_equals(const Snapshot& other) const {
        return vocabulary_ == other.vocabulary_ && abox_ == other.abox_;
    }

private:
    std::string id_;
    std::uint64_t timestamp_ = 0;
    Vocabulary vocabulary_;
    AssertionSet abox_;
};

enum class ViolationKind {
    BadIdentifier,
    UndeclaredConcept,
    UndeclaredRole,
    SubsumptionUndeclaredConcept,
    CyclicSubsumption,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string detail;

    std::string message() const;
};

/// Violations are data, not failures; an empty report means valid.
struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::string to_text() const;
};

/// Checks every snapshot invariant: identifier grammar, assertions over
/// declared vocabulary, subsumption endpoints declared, subsumption acyclicity.
ValidationReport validate(const Snapshot& snapshot);

/// Parses the snapshot file format and validates the result.
/// Throws ParseError on syntax problems, ValidationError when the parsed
/// snapshot violates an invariant (undeclared vocabulary, cyclic isa).
Snapshot parse_snapshot(std::string_view text);

/// Syntax-only parse; the result may fail validate(). Used by the CLI to
/// report violations as data rather than errors.
Snapshot parse_snapshot_unvalidated(std::string_view text);

/// Canonical serialization without the header line: vocabulary lines followed
/// by assertion lines, each group sorted lexicographically, '\n'-terminated.
/// This is the exact byte sequence the fingerprint hashes.
std::string canonical_content(const Snapshot& snapshot);

/// Canonical file form: "@snapshot <id> <timestamp>" header + canonical content.
/// parse_snapshot(serialize(s)) reproduces vocabulary, abox and fingerprint.
std::string serialize(const Snapshot& snapshot);

Snapshot load_snapshot_file(const std::filesystem::path& path);
void write_snapshot_file(const Snapshot& snapshot, const std::filesystem::path& path);

}  // namespace ctx
