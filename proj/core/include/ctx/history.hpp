#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ctx/fingerprint.hpp"
#include "ctx/snapshot.hpp"

namespace ctx {

struct VocabularyDelta {
    std::set<std::string> concepts;
    std::set<std::string> roles;
    std::set<std::pair<std::string, std::string>> subsumptions;

    bool empty() const { return concepts.empty() && roles.empty() && subsumptions.empty(); }
    bool operator==(const VocabularyDelta&) const = default;
};

/// Assertion- and vocabulary-level difference between two snapshots.
/// Invariant: applying (remove removed, add added) to the older snapshot
/// reproduces the newer one's content exactly (see apply_diff).
struct ContextDiff {
    AssertionSet added_assertions;
    AssertionSet removed_assertions;
    VocabularyDelta added_vocab;
    VocabularyDelta removed_vocab;

    bool empty() const {
        return added_assertions.empty() && removed_assertions.empty() && added_vocab.empty() &&
               removed_vocab.empty();
    }
};

ContextDiff diff(const Snapshot& older, const Snapshot& newer);

/// Patch: removes then adds per the diff. Keeps base id and timestamp.
Snapshot apply_diff(const Snapshot& base, const ContextDiff& d);

/// A context change observed between consecutive history entries; diff is
/// never empty (identical consecutive snapshots produce no event).
struct ChangeEvent {
    std::uint64_t at;  // timestamp of the newer snapshot
    ContextDiff diff;
};

struct HistoryEntry {
    std::uint64_t timestamp;
    Snapshot snapshot;
    Fingerprint fingerprint;
};

/// Append-only ordered context history. Value semantics: append returns an
/// extended copy, so older history values stay usable by concurrent readers.
class History {
public:
    /// Requires a valid snapshot with timestamp strictly above the last
    /// entry. Throws ValidationError / std::invalid_argument.
    [[nodiscard]] History append(Snapshot snapshot) const;

    const std::vector<HistoryEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const HistoryEntry& operator[](std::size_t i) const { return entries_[i]; }

private:
    std::vector<HistoryEntry> entries_;
};

/// One event per consecutive pair with non-empty diff, in timestamp order.
std::vector<ChangeEvent> change_events(const History& history);

/// Manifest: one snapshot-file path per line (relative paths resolve against
/// the manifest's directory), '#' comments and blank lines allowed.
History load_history_manifest(const std::filesystem::path& manifest_path);

}  // namespace ctx
