#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctx/config.hpp"
#include "ctx/drift.hpp"
#include "ctx/history.hpp"
#include "ctx/registry.hpp"

namespace ctx {

enum class SelectionKind { Exact, Similar, Miss };

std::string_view to_string(SelectionKind kind);

/// One replayed stream sample.
struct StepRecord {
    std::uint64_t index = 0;
    std::string snapshot_id;                  // as carried by the stream row
    SelectionKind regime = SelectionKind::Miss;  // selection in effect
    std::optional<SelectionKind> selection;   // set on selection steps only
    bool prediction = false;
    bool truth = false;
    std::vector<DriftAlarm> alarms;           // alarms raised at this step
};

struct ContextStats {
    std::string snapshot_id;
    std::uint64_t samples = 0;
    std::uint64_t correct = 0;

    double accuracy() const { return samples == 0 ? 0.0 : double(correct) / double(samples); }
};

struct RunSummary {
    std::uint64_t steps = 0;
    std::uint64_t exact = 0;
    std::uint64_t similar = 0;
    std::uint64_t miss = 0;
    std::uint64_t trainings = 0;
    std::uint64_t ddm_warnings = 0;
    std::uint64_t ddm_drifts = 0;
    std::uint64_t window_drifts = 0;
    CompletenessVerdict verdict;
    std::vector<ContextStats> per_context;  // ordered by first appearance
};

/// Full log + summary of one replay. Serialization is byte-deterministic:
/// identical inputs produce identical JSON.
struct RunReport {
    RunConfig config;
    std::vector<StepRecord> steps;
    std::vector<DriftAlarm> alarms;
    RunSummary summary;
};

/// Replays the stream in timestamp order against the manifest history.
///
/// Context tracking: a row whose snapshot_id is in the manifest and differs
/// from the current context triggers a selection (registry::select). Ids
/// missing from the manifest are invisible to the system: the current
/// context is kept, which is exactly how an incompletely tracked context
/// knowledge base manifests. The first row's id must be known.
///
/// Train-on-miss: the new context's samples are collected (train_batch cap,
/// ends early with the occurrence); first 80% train, last 20% holdout; the
/// model is bound to the context fingerprint with its holdout accuracy. The
/// previously deployed model keeps predicting during collection; a newly
/// trained model deploys immediately only when nothing is deployed yet.
///
/// Drift detectors consume the deployed model's prediction errors starting
/// at first deployment; verify_completeness closes the run.
///
/// Throws ParseError/std::invalid_argument on malformed input (unknown
/// initial snapshot id, feature dimension mismatch).
RunReport replay(const History& manifest, std::span<const StreamRow> stream,
                 const RunConfig& config = {});

/// Same, seeded with previously persisted bindings; models trained in
/// earlier runs are reused through exact or similar selection. The registry
/// state after the run (seed bindings plus this run's) is written to
/// final_registry when non-null.
RunReport replay(const History& manifest, std::span<const StreamRow> stream,
                 const RunConfig& config, const Registry& initial,
                 Registry* final_registry);

/// Deterministic JSON (fixed key order, shortest round-trip numbers).
std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);  // throws ParseError

/// Recomputes every summary tally from the step log and compares; throws
/// IntegrityError on the first mismatch.
void check_report_integrity(const RunReport& report);

/// Human-readable summary block.
std::string format_summary(const RunReport& report);

/// Machine-readable summary: `metric,value` rows followed by
/// `context,<id>,<samples>,<accuracy>` rows.
std::string summary_csv(const RunReport& report);

}  // namespace ctx
