#pragma once

#include <cstddef>
#include <functional>

#include "ctx/history.hpp"
#include "ctx/snapshot.hpp"

namespace ctx {

/// Weights of the two Jaccard components; must be non-negative and sum to 1.
struct SimilarityConfig {
    double abox_weight = 0.8;
    double vocab_weight = 0.2;

    void validate() const;  // throws std::invalid_argument
};

struct SimilarityScore {
    double value = 0.0;
    double abox_jaccard = 0.0;
    double vocab_jaccard = 0.0;
};

/// Weighted Jaccard similarity over assertion sets and serialized vocabulary
/// lines. Empty-vs-empty component = 1 (identical content). Symmetric, in
/// [0,1], and 1 exactly when contents are equal.
SimilarityScore sim(const Snapshot& a, const Snapshot& b, const SimilarityConfig& cfg = {});

struct NearestResult {
    std::size_t index;  // position in the history
    SimilarityScore score;
};

/// Entry maximizing sim(entry.snapshot, query); ties broken by the latest
/// timestamp. Throws std::invalid_argument on an empty history.
NearestResult nearest(const History& history, const Snapshot& query,
                      const SimilarityConfig& cfg = {});

/// Replaceable measure hook: the search logic is independent of the concrete
/// similarity function, so richer measures (subsumption-aware, embeddings)
/// can be dropped in without touching callers.
using SimilarityMeasure = std::function<SimilarityScore(const Snapshot&, const Snapshot&)>;

NearestResult nearest(const History& history, const Snapshot& query,
                      const SimilarityMeasure& measure);

}  // namespace ctx
