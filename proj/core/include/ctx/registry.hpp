#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <variant>

#include "ctx/analytics.hpp"
#include "ctx/fingerprint.hpp"
#include "ctx/history.hpp"
#include "ctx/similarity.hpp"

namespace ctx {

/// A trained model bound to the fingerprint of the context it was trained
/// under, with its holdout performance.
struct ModelRecord {
    Fingerprint fingerprint;
    Model model;
    double performance = 0.0;  // accuracy in [0,1]
    std::uint64_t trained_at = 0;
};

struct RegistryConfig {
    double tau = 0.9;  // similarity acceptance threshold

    void validate() const;  // throws std::invalid_argument
};

struct ExactMatch {
    ModelRecord record;
};

struct SimilarMatch {
    ModelRecord record;
    SimilarityScore score;
    std::size_t history_index;  // entry the fallback matched
};

struct Miss {};

/// Result of model selection for a context: exact fingerprint hit, accepted
/// similarity fallback, or a miss (caller trains and binds a new model).
using ModelChoice = std::variant<ExactMatch, SimilarMatch, Miss>;

/// Fingerprint -> best model record. Value semantics: bind returns an
/// updated copy, mirroring the history's persistence.
class Registry {
public:
    /// Maps fp -> record; rebinding an existing fingerprint keeps the record
    /// with higher performance (ties -> newer trained_at). Throws
    /// std::invalid_argument when performance is outside [0,1].
    [[nodiscard]] Registry bind(const Fingerprint& fp, Model model, double performance,
                                std::uint64_t trained_at) const;

    const ModelRecord* find(const Fingerprint& fp) const;
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const std::map<Fingerprint, ModelRecord>& records() const { return records_; }

private:
    std::map<Fingerprint, ModelRecord> records_;
};

/// Selection for the current context:
///  1. exact fingerprint match wins;
///  2. otherwise the most similar history entry whose fingerprint is bound,
///     accepted when its score reaches cfg.tau;
///  3. otherwise Miss.
ModelChoice select(const Registry& registry, const History& history, const Snapshot& current,
                   const RegistryConfig& cfg = {}, const SimilarityConfig& sim_cfg = {});

/// One record per line: `fingerprint-hex kind parameters performance
/// trained_at`. Written atomically (temp file + rename).
void save_registry(const Registry& registry, const std::filesystem::path& path);
Registry load_registry(const std::filesystem::path& path);

}  // namespace ctx
