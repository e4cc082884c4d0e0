#include "ctx/history.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "ctx/errors.hpp"

namespace ctx {

namespace {

template <typename T>
std::set<T> set_minus(const std::set<T>& a, const std::set<T>& b) {
    std::set<T> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

}  // namespace

ContextDiff diff(const Snapshot& older, const Snapshot& newer) {
    ContextDiff d;
    d.added_assertions = set_minus(newer.abox(), older.abox());
    d.removed_assertions = set_minus(older.abox(), newer.abox());

    const Vocabulary& ov = older.vocabulary();
    const Vocabulary& nv = newer.vocabulary();
    d.added_vocab.concepts = set_minus(nv.concepts, ov.concepts);
    d.removed_vocab.concepts = set_minus(ov.concepts, nv.concepts);
    d.added_vocab.roles = set_minus(nv.roles, ov.roles);
    d.removed_vocab.roles = set_minus(ov.roles, nv.roles);
    d.added_vocab.subsumptions = set_minus(nv.subsumptions, ov.subsumptions);
    d.removed_vocab.subsumptions = set_minus(ov.subsumptions, nv.subsumptions);
    return d;
}

Snapshot apply_diff(const Snapshot& base, const ContextDiff& d) {
    AssertionSet abox = base.abox();
    for (const auto& a : d.removed_assertions) abox.erase(a);
    abox.insert(d.added_assertions.begin(), d.added_assertions.end());

    Vocabulary vocab = base.vocabulary();
    for (const auto& c : d.removed_vocab.concepts) vocab.concepts.erase(c);
    for (const auto& r : d.removed_vocab.roles) vocab.roles.erase(r);
    for (const auto& s : d.removed_vocab.subsumptions) vocab.subsumptions.erase(s);
    vocab.concepts.insert(d.added_vocab.concepts.begin(), d.added_vocab.concepts.end());
    vocab.roles.insert(d.added_vocab.roles.begin(), d.added_vocab.roles.end());
    vocab.subsumptions.insert(d.added_vocab.subsumptions.begin(),
                              d.added_vocab.subsumptions.end());

    return Snapshot(base.id(), base.timestamp(), std::move(vocab), std::move(abox));
}

History History::append(Snapshot snapshot) const {
    if (!entries_.empty() && snapshot.timestamp() <= entries_.back().timestamp) {
        throw std::invalid_argument(
            "non-monotonic timestamp: " + std::to_string(snapshot.timestamp()) +
            " does not follow " + std::to_string(entries_.back().timestamp));
    }
    Fingerprint fp = fingerprint(snapshot);  // also enforces validity
    History extended = *this;
    const std::uint64_t ts = snapshot.timestamp();
    extended.entries_.push_back({ts, std::move(snapshot), fp});
    return extended;
}

std::vector<ChangeEvent> change_events(const History& history) {
    std::vector<ChangeEvent> events;
    const auto& entries = history.entries();
    for (std::size_t i = 1; i < entries.size(); ++i) {
        ContextDiff d = diff(entries[i - 1].snapshot, entries[i].snapshot);
        if (!d.empty()) {
            events.push_back({entries[i].timestamp, std::move(d)});
        }
    }
    return events;
}

History load_history_manifest(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path.string());
    const auto base = manifest_path.parent_path();

    History history;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        std::size_t start = 0;
        while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) ++start;
        if (start > 0) line.erase(0, start);
        if (line.empty()) continue;

        std::filesystem::path p(line);
        if (p.is_relative()) p = base / p;
        try {
            history = history.append(load_snapshot_file(p));
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, line, std::string("manifest entry rejected: ") + e.what());
        }
    }
    return history;
}

}  // namespace ctx
