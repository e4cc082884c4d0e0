#include "ctx/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctx {

void SimilarityConfig::validate() const {
    if (abox_weight < 0.0 || vocab_weight < 0.0 ||
        std::abs(abox_weight + vocab_weight - 1.0) > 1e-12) {
        throw std::invalid_argument("similarity weights must be non-negative and sum to 1");
    }
}

namespace {

// |A ∩ B| / |A ∪ B| over sorted unique sequences, 1 when both are empty.
template <typename Set>
double jaccard(const Set& a, const Set& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t common = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++common;
            ++ia;
            ++ib;
        }
    }
    const std::size_t unions = a.size() + b.size() - common;
    return static_cast<double>(common) / static_cast<double>(unions);
}

}  // namespace

SimilarityScore sim(const Snapshot& a, const Snapshot& b, const SimilarityConfig& cfg) {
    cfg.validate();
    SimilarityScore score;
    score.abox_jaccard = jaccard(a.abox(), b.abox());

    auto va = a.vocabulary().lines();
    auto vb = b.vocabulary().lines();
    // lines() yields each group sorted; sort the concatenation once so the
    // merge walk above applies.
    std::sort(va.begin(), va.end());
    std::sort(vb.begin(), vb.end());
    score.vocab_jaccard = jaccard(va, vb);

    score.value = cfg.abox_weight * score.abox_jaccard + cfg.vocab_weight * score.vocab_jaccard;
    return score;
}

NearestResult nearest(const History& history, const Snapshot& query,
                      const SimilarityMeasure& measure) {
    if (history.empty()) throw std::invalid_argument("nearest over an empty history");
    NearestResult best{0, measure(history[0].snapshot, query)};
    for (std::size_t i = 1; i < history.size(); ++i) {
        SimilarityScore s = measure(history[i].snapshot, query);
        // >= so equal scores resolve to the later (larger-timestamp) entry.
        if (s.value >= best.score.value) {
            best = {i, s};
        }
    }
    return best;
}

NearestResult nearest(const History& history, const Snapshot& query,
                      const SimilarityConfig& cfg) {
    cfg.validate();
    return nearest(history, query, [&cfg](const Snapshot& a, const Snapshot& b) {
        return sim(a, b, cfg);
    });
}

}  // namespace ctx
