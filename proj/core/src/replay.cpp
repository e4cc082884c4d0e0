#include "ctx/replay.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ctx/errors.hpp"

namespace ctx {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(SelectionKind kind) {
    switch (kind) {
        case SelectionKind::Exact: return "exact";
        case SelectionKind::Similar: return "similar";
        case SelectionKind::Miss: return "miss";
    }
    return "unknown";
}

namespace {

std::optional<SelectionKind> selection_from_string(const std::string& text) {
    if (text == "exact") return SelectionKind::Exact;
    if (text == "similar") return SelectionKind::Similar;
    if (text == "miss") return SelectionKind::Miss;
    return std::nullopt;
}

struct PendingTraining {
    Fingerprint fingerprint;
    std::uint64_t context_timestamp;
    std::vector<Sample> batch;
};

}  // namespace

RunReport replay(const History& manifest, std::span<const StreamRow> stream,
                 const RunConfig& config) {
    return replay(manifest, stream, config, Registry{}, nullptr);
}

RunReport replay(const History& manifest, std::span<const StreamRow> stream,
                 const RunConfig& config, const Registry& initial,
                 Registry* final_registry) {
    config.validate();
    if (stream.empty()) throw std::invalid_argument("empty stream");

    std::map<std::string, std::size_t> entry_by_id;
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        entry_by_id[manifest[i].snapshot.id()] = i;
    }

    RunReport report;
    report.config = config;
    report.steps.reserve(stream.size());

    Registry registry = initial;
    std::optional<Model> active;
    std::optional<PendingTraining> pending;
    std::string current_id;          // context the system believes active
    std::size_t current_entry = 0;
    SelectionKind regime = SelectionKind::Miss;

    DdmDetector ddm(config.ddm_warmup);
    TwoWindowTest window(config.window, config.alpha);

    std::vector<std::uint64_t> believed_timestamps;
    believed_timestamps.reserve(stream.size());

    auto& summary = report.summary;

    auto finalize_pending = [&]() {
        if (!pending) return;
        PendingTraining work = std::move(*pending);
        pending.reset();
        if (work.batch.empty()) return;

        const std::size_t n = work.batch.size();
        const std::size_t train_n = std::max<std::size_t>(1, (n * 8) / 10);
        std::vector<Sample> train_part(work.batch.begin(), work.batch.begin() + train_n);
        std::vector<Sample> holdout_part(work.batch.begin() + train_n, work.batch.end());
        if (holdout_part.empty()) holdout_part = train_part;

        const Dataset train_set(std::move(train_part));
        const Dataset holdout_set(std::move(holdout_part));
        Model model = train(train_set, config.model_kind);
        const double performance = evaluate(model, holdout_set);
        registry = registry.bind(work.fingerprint, model, performance, work.context_timestamp);
        ++summary.trainings;
        if (!active) active = std::move(model);  // bootstrap deployment
    };

    const std::size_t feature_dim = stream.front().features.size();

    for (std::size_t pos = 0; pos < stream.size(); ++pos) {
        const StreamRow& row = stream[pos];
        if (row.t != pos) {
            throw std::invalid_argument("stream indices must be consecutive from 0; row " +
                                        std::to_string(pos) + " carries t=" +
                                        std::to_string(row.t));
        }
        if (row.features.size() != feature_dim) {
            throw std::invalid_argument("feature dimension mismatch at stream index " +
                                        std::to_string(pos));
        }

        StepRecord step;
        step.index = row.t;
        step.snapshot_id = row.snapshot_id;
        step.truth = row.label;

        const auto known = entry_by_id.find(row.snapshot_id);
        if (current_id.empty() && known == entry_by_id.end()) {
            throw std::invalid_argument("first stream row references unknown snapshot_id '" +
                                        row.snapshot_id + "'");
        }
        // A known id different from the believed context is a visible change;
        // unknown ids leave the believed context in place.
        if (known != entry_by_id.end() && row.snapshot_id != current_id) {
            finalize_pending();
            current_id = row.snapshot_id;
            current_entry = known->second;

            const HistoryEntry& entry = manifest[current_entry];
            ModelChoice choice =
                select(registry, manifest, entry.snapshot, config.registry, config.similarity);
            if (const auto* exact = std::get_if<ExactMatch>(&choice)) {
                regime = SelectionKind::Exact;
                ++summary.exact;
                active = exact->record.model;
            } else if (const auto* similar = std::get_if<SimilarMatch>(&choice)) {
                regime = SelectionKind::Similar;
                ++summary.similar;
                active = similar->record.model;
            } else {
                regime = SelectionKind::Miss;
                ++summary.miss;
                pending = PendingTraining{entry.fingerprint, entry.timestamp, {}};
            }
            step.selection = regime;
        }
        step.regime = regime;
        believed_timestamps.push_back(manifest[current_entry].timestamp);

        // Prediction: deployed model, or the default negative before any
        // model exists. Detectors consume deployed-model errors only.
        step.prediction = active ? predict(*active, row.features) : false;
        if (active) {
            const bool error = step.prediction != row.label;
            if (auto alarm = ddm.update(row.t, error)) {
                step.alarms.push_back(*alarm);
                report.alarms.push_back(*alarm);
            }
            if (auto alarm = window.update(row.t, error)) {
                step.alarms.push_back(*alarm);
                report.alarms.push_back(*alarm);
            }
        }

        if (pending) {
            pending->batch.push_back({row.features, row.label});
            if (pending->batch.size() >= config.train_batch) finalize_pending();
        }
        report.steps.push_back(std::move(step));
    }
    finalize_pending();

    for (const auto& alarm : report.alarms) {
        if (alarm.detector == "ddm") {
            if (alarm.kind == AlarmKind::Drift) {
                ++summary.ddm_drifts;
            } else {
                ++summary.ddm_warnings;
            }
        } else if (alarm.kind == AlarmKind::Drift) {
            ++summary.window_drifts;
        }
    }

    const auto changes = change_events(manifest);
    summary.verdict =
        verify_completeness(report.alarms, changes, believed_timestamps, config.lookback);
    summary.steps = report.steps.size();
    if (final_registry != nullptr) *final_registry = registry;

    std::map<std::string, std::size_t> context_index;
    for (const auto& step : report.steps) {
        auto it = context_index.find(step.snapshot_id);
        if (it == context_index.end()) {
            it = context_index.emplace(step.snapshot_id, summary.per_context.size()).first;
            summary.per_context.push_back({step.snapshot_id, 0, 0});
        }
        ContextStats& stats = summary.per_context[it->second];
        ++stats.samples;
        if (step.prediction == step.truth) ++stats.correct;
    }
    return report;
}

namespace {

ordered_json alarm_to_json(const DriftAlarm& alarm) {
    return ordered_json{{"at", alarm.at},
                        {"kind", std::string(to_string(alarm.kind))},
                        {"statistic", alarm.statistic},
                        {"detector", alarm.detector}};
}

DriftAlarm alarm_from_json(const ordered_json& j) {
    DriftAlarm alarm;
    alarm.at = j.at("at").get<std::uint64_t>();
    alarm.kind = j.at("kind").get<std::string>() == "warning" ? AlarmKind::Warning
                                                              : AlarmKind::Drift;
    alarm.statistic = j.at("statistic").get<double>();
    alarm.detector = j.at("detector").get<std::string>();
    return alarm;
}

}  // namespace

std::string report_to_json(const RunReport& report) {
    const RunConfig& c = report.config;
    ordered_json j;
    j["config"] = ordered_json{
        {"wa", c.similarity.abox_weight},
        {"wv", c.similarity.vocab_weight},
        {"tau", c.registry.tau},
        {"ddm_warmup", c.ddm_warmup},
        {"window", c.window},
        {"alpha", c.alpha},
        {"lookback", c.lookback},
        {"train_batch", c.train_batch},
        {"model", c.model_kind == ModelKind::ThresholdStump ? "stump" : "majority"},
    };

    ordered_json steps = ordered_json::array();
    for (const auto& step : report.steps) {
        ordered_json s;
        s["index"] = step.index;
        s["snapshot_id"] = step.snapshot_id;
        s["regime"] = std::string(to_string(step.regime));
        if (step.selection) {
            s["selection"] = std::string(to_string(*step.selection));
        } else {
            s["selection"] = nullptr;
        }
        s["prediction"] = step.prediction;
        s["truth"] = step.truth;
        ordered_json alarms = ordered_json::array();
        for (const auto& alarm : step.alarms) alarms.push_back(alarm_to_json(alarm));
        s["alarms"] = std::move(alarms);
        steps.push_back(std::move(s));
    }
    j["steps"] = std::move(steps);

    ordered_json alarms = ordered_json::array();
    for (const auto& alarm : report.alarms) alarms.push_back(alarm_to_json(alarm));
    j["alarms"] = std::move(alarms);

    const RunSummary& sm = report.summary;
    ordered_json per_context = ordered_json::array();
    for (const auto& stats : sm.per_context) {
        per_context.push_back(ordered_json{{"snapshot_id", stats.snapshot_id},
                                           {"samples", stats.samples},
                                           {"correct", stats.correct},
                                           {"accuracy", stats.accuracy()}});
    }
    ordered_json verdict;
    verdict["result"] =
        sm.verdict.sufficient() ? "context-sufficient" : "context-incomplete";
    verdict["lookback"] = sm.verdict.lookback;
    if (sm.verdict.offending_alarm) {
        verdict["offending_alarm"] = alarm_to_json(*sm.verdict.offending_alarm);
    } else {
        verdict["offending_alarm"] = nullptr;
    }
    j["summary"] = ordered_json{
        {"steps", sm.steps},
        {"exact", sm.exact},
        {"similar", sm.similar},
        {"miss", sm.miss},
        {"trainings", sm.trainings},
        {"ddm_warnings", sm.ddm_warnings},
        {"ddm_drifts", sm.ddm_drifts},
        {"window_drifts", sm.window_drifts},
        {"verdict", std::move(verdict)},
        {"per_context", std::move(per_context)},
    };
    return j.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, "", std::string("invalid report json: ") + e.what());
    }
    try {
        RunReport report;
        const auto& jc = j.at("config");
        report.config.similarity.abox_weight = jc.at("wa").get<double>();
        report.config.similarity.vocab_weight = jc.at("wv").get<double>();
        report.config.registry.tau = jc.at("tau").get<double>();
        report.config.ddm_warmup = jc.at("ddm_warmup").get<std::uint64_t>();
        report.config.window = jc.at("window").get<std::size_t>();
        report.config.alpha = jc.at("alpha").get<double>();
        report.config.lookback = jc.at("lookback").get<std::uint64_t>();
        report.config.train_batch = jc.at("train_batch").get<std::size_t>();
        report.config.model_kind = jc.at("model").get<std::string>() == "majority"
                                       ? ModelKind::MajorityClass
                                       : ModelKind::ThresholdStump;

        for (const auto& s : j.at("steps")) {
            StepRecord step;
            step.index = s.at("index").get<std::uint64_t>();
            step.snapshot_id = s.at("snapshot_id").get<std::string>();
            auto regime = selection_from_string(s.at("regime").get<std::string>());
            if (!regime) throw ParseError(0, "", "bad regime in report");
            step.regime = *regime;
            if (!s.at("selection").is_null()) {
                step.selection = selection_from_string(s.at("selection").get<std::string>());
                if (!step.selection) throw ParseError(0, "", "bad selection in report");
            }
            step.prediction = s.at("prediction").get<bool>();
            step.truth = s.at("truth").get<bool>();
            for (const auto& a : s.at("alarms")) step.alarms.push_back(alarm_from_json(a));
            report.steps.push_back(std::move(step));
        }
        for (const auto& a : j.at("alarms")) report.alarms.push_back(alarm_from_json(a));

        const auto& sm = j.at("summary");
        report.summary.steps = sm.at("steps").get<std::uint64_t>();
        report.summary.exact = sm.at("exact").get<std::uint64_t>();
        report.summary.similar = sm.at("similar").get<std::uint64_t>();
        report.summary.miss = sm.at("miss").get<std::uint64_t>();
        report.summary.trainings = sm.at("trainings").get<std::uint64_t>();
        report.summary.ddm_warnings = sm.at("ddm_warnings").get<std::uint64_t>();
        report.summary.ddm_drifts = sm.at("ddm_drifts").get<std::uint64_t>();
        report.summary.window_drifts = sm.at("window_drifts").get<std::uint64_t>();
        const auto& v = sm.at("verdict");
        report.summary.verdict.result = v.at("result").get<std::string>() == "context-sufficient"
                                            ? Completeness::ContextSufficient
                                            : Completeness::ContextIncomplete;
        report.summary.verdict.lookback = v.at("lookback").get<std::uint64_t>();
        if (!v.at("offending_alarm").is_null()) {
            report.summary.verdict.offending_alarm = alarm_from_json(v.at("offending_alarm"));
        }
        for (const auto& pc : sm.at("per_context")) {
            ContextStats stats;
            stats.snapshot_id = pc.at("snapshot_id").get<std::string>();
            stats.samples = pc.at("samples").get<std::uint64_t>();
            stats.correct = pc.at("correct").get<std::uint64_t>();
            report.summary.per_context.push_back(std::move(stats));
        }
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, "", std::string("report json missing fields: ") + e.what());
    }
}

void check_report_integrity(const RunReport& report) {
    const RunSummary& sm = report.summary;
    auto fail = [](const std::string& what) { throw IntegrityError("report integrity: " + what); };

    if (sm.steps != report.steps.size()) fail("step count mismatch");

    std::uint64_t exact = 0, similar = 0, miss = 0;
    std::uint64_t ddm_w = 0, ddm_d = 0, win_d = 0;
    std::size_t alarm_total = 0;
    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> per_context;
    std::uint64_t expected_index = 0;
    for (const auto& step : report.steps) {
        if (step.index != expected_index++) fail("step indices not consecutive");
        if (step.selection) {
            if (*step.selection != step.regime) fail("selection disagrees with regime");
            switch (*step.selection) {
                case SelectionKind::Exact: ++exact; break;
                case SelectionKind::Similar: ++similar; break;
                case SelectionKind::Miss: ++miss; break;
            }
        }
        for (const auto& alarm : step.alarms) {
            ++alarm_total;
            if (alarm.detector == "ddm") {
                (alarm.kind == AlarmKind::Drift ? ddm_d : ddm_w)++;
            } else if (alarm.kind == AlarmKind::Drift) {
                ++win_d;
            }
        }
        auto& [samples, correct] = per_context[step.snapshot_id];
        ++samples;
        if (step.prediction == step.truth) ++correct;
    }
    if (exact != sm.exact || similar != sm.similar || miss != sm.miss) {
        fail("selection tallies mismatch");
    }
    if (sm.trainings != sm.miss) fail("trainings != miss selections");
    if (ddm_w != sm.ddm_warnings || ddm_d != sm.ddm_drifts || win_d != sm.window_drifts) {
        fail("alarm tallies mismatch");
    }
    if (alarm_total != report.alarms.size()) fail("alarm list does not match step alarms");
    if (per_context.size() != sm.per_context.size()) fail("per-context coverage mismatch");
    for (const auto& stats : sm.per_context) {
        auto it = per_context.find(stats.snapshot_id);
        if (it == per_context.end() || it->second.first != stats.samples ||
            it->second.second != stats.correct) {
            fail("per-context stats mismatch for " + stats.snapshot_id);
        }
    }
    if (!sm.verdict.sufficient()) {
        if (!sm.verdict.offending_alarm) fail("incomplete verdict without offending alarm");
        const auto& off = *sm.verdict.offending_alarm;
        const bool present = std::any_of(
            report.alarms.begin(), report.alarms.end(), [&](const DriftAlarm& a) {
                return a.at == off.at && a.kind == off.kind && a.detector == off.detector;
            });
        if (!present) fail("offending alarm not in alarm list");
    }
}

std::string format_summary(const RunReport& report) {
    const RunSummary& sm = report.summary;
    std::ostringstream out;
    out << "steps       " << sm.steps << '\n';
    out << "selections  exact=" << sm.exact << " similar=" << sm.similar << " miss=" << sm.miss
        << '\n';
    out << "trainings   " << sm.trainings << '\n';
    out << "alarms      ddm-drift=" << sm.ddm_drifts << " ddm-warning=" << sm.ddm_warnings
        << " window-drift=" << sm.window_drifts << '\n';
    out << "verdict     "
        << (sm.verdict.sufficient() ? "context-sufficient" : "context-incomplete");
    if (sm.verdict.offending_alarm) {
        const auto& a = *sm.verdict.offending_alarm;
        out << " (uncovered " << a.detector << " drift at " << a.at << ")";
    }
    out << " [lookback " << sm.verdict.lookback << "]\n";
    for (const auto& step : report.steps) {
        if (step.selection) {
            out << "selection   @" << step.index << ' ' << to_string(*step.selection) << " ("
                << step.snapshot_id << ")\n";
        }
    }
    for (const auto& stats : sm.per_context) {
        out << "context     " << stats.snapshot_id << " samples=" << stats.samples
            << " accuracy=" << stats.accuracy() << '\n';
    }
    return out.str();
}

std::string summary_csv(const RunReport& report) {
    const RunSummary& sm = report.summary;
    std::ostringstream out;
    out << "metric,value\n";
    out << "steps," << sm.steps << '\n';
    out << "exact," << sm.exact << '\n';
    out << "similar," << sm.similar << '\n';
    out << "miss," << sm.miss << '\n';
    out << "trainings," << sm.trainings << '\n';
    out << "ddm_warnings," << sm.ddm_warnings << '\n';
    out << "ddm_drifts," << sm.ddm_drifts << '\n';
    out << "window_drifts," << sm.window_drifts << '\n';
    out << "verdict," << (sm.verdict.sufficient() ? "context-sufficient" : "context-incomplete")
        << '\n';
    for (const auto& stats : sm.per_context) {
        out << "context," << stats.snapshot_id << ',' << stats.samples << ','
            << stats.accuracy() << '\n';
    }
    return out.str();
}

}  // namespace ctx
