// ctx — context-aware analytic model management for manufacturing
// operations data. Subcommands: validate, diff, sim, fingerprint,
// scenario, run, report.
//
// Exit codes: 0 success, 1 validation/integrity failure, 2 malformed input.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "ctx/config.hpp"
#include "ctx/errors.hpp"
#include "ctx/fingerprint.hpp"
#include "ctx/history.hpp"
#include "ctx/replay.hpp"
#include "ctx/scenario.hpp"
#include "ctx/similarity.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kMalformedInput = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int cmd_validate(const std::string& path) {
    const ctx::Snapshot snapshot = ctx::parse_snapshot_unvalidated(read_file(path));
    const ctx::ValidationReport report = ctx::validate(snapshot);
    if (report.ok()) return kOk;
    std::cout << report.to_text();
    return kValidationFailure;
}

ctx::Snapshot load_valid(const std::string& path) {
    const ctx::Snapshot snapshot = ctx::parse_snapshot_unvalidated(read_file(path));
    if (const auto report = ctx::validate(snapshot); !report.ok()) {
        std::cerr << path << ":\n" << report.to_text();
        throw ctx::ValidationError("invalid snapshot: " + path);
    }
    return snapshot;
}

int cmd_fingerprint(const std::string& path) {
    std::cout << ctx::fingerprint(load_valid(path)).hex() << '\n';
    return kOk;
}

int cmd_diff(const std::string& older_path, const std::string& newer_path) {
    const ctx::Snapshot older = load_valid(older_path);
    const ctx::Snapshot newer = load_valid(newer_path);
    const ctx::ContextDiff d = ctx::diff(older, newer);

    for (const auto& c : d.removed_vocab.concepts) std::cout << "- concept " << c << '\n';
    for (const auto& r : d.removed_vocab.roles) std::cout << "- role " << r << '\n';
    for (const auto& [child, parent] : d.removed_vocab.subsumptions)
        std::cout << "- isa " << child << ' ' << parent << '\n';
    for (const auto& a : d.removed_assertions) std::cout << "- " << ctx::to_line(a) << '\n';
    for (const auto& c : d.added_vocab.concepts) std::cout << "+ concept " << c << '\n';
    for (const auto& r : d.added_vocab.roles) std::cout << "+ role " << r << '\n';
    for (const auto& [child, parent] : d.added_vocab.subsumptions)
        std::cout << "+ isa " << child << ' ' << parent << '\n';
    for (const auto& a : d.added_assertions) std::cout << "+ " << ctx::to_line(a) << '\n';
    return kOk;
}

int cmd_sim(const std::string& a_path, const std::string& b_path, double wa, double wv) {
    const ctx::SimilarityConfig cfg{wa, wv};
    const ctx::SimilarityScore score = ctx::sim(load_valid(a_path), load_valid(b_path), cfg);
    std::printf("value %.6f\n", score.value);
    std::printf("abox_jaccard %.6f\n", score.abox_jaccard);
    std::printf("vocab_jaccard %.6f\n", score.vocab_jaccard);
    return kOk;
}

int cmd_scenario(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out_dir) {
    ctx::ScenarioConfig config;
    config.segments = {{ctx::RobotContext::Robo1, 500}, {ctx::RobotContext::Robo2, 500}};
    if (!config_path.empty()) {
        ctx::FileConfig::load(config_path).apply(config);
    }
    if (seed) config.seed = *seed;
    const ctx::ScenarioOutput output = ctx::generate(config);
    ctx::write_scenario(output, out_dir);
    std::cout << "wrote " << output.stream.size() << " samples, " << output.snapshots.size()
              << " snapshots to " << out_dir << '\n';
    return kOk;
}

struct RunOverrides {
    std::optional<double> tau, wa, wv, alpha;
    std::optional<std::uint64_t> window, lookback, train_batch, ddm_warmup;
    std::optional<std::string> model;
    std::string registry_in, registry_out;
};

int cmd_run(const std::string& manifest_path, const std::string& stream_path,
            const std::string& config_path, const std::string& out_path,
            const std::string& alarms_path, const RunOverrides& overrides) {
    ctx::RunConfig config;
    if (!config_path.empty()) {
        ctx::FileConfig::load(config_path).apply(config);
    }
    if (overrides.tau) config.registry.tau = *overrides.tau;
    if (overrides.wa) config.similarity.abox_weight = *overrides.wa;
    if (overrides.wv) config.similarity.vocab_weight = *overrides.wv;
    if (overrides.alpha) config.alpha = *overrides.alpha;
    if (overrides.window) config.window = *overrides.window;
    if (overrides.lookback) config.lookback = *overrides.lookback;
    if (overrides.train_batch) config.train_batch = *overrides.train_batch;
    if (overrides.ddm_warmup) config.ddm_warmup = *overrides.ddm_warmup;
    if (overrides.model) {
        if (*overrides.model == "stump") {
            config.model_kind = ctx::ModelKind::ThresholdStump;
        } else if (*overrides.model == "majority") {
            config.model_kind = ctx::ModelKind::MajorityClass;
        } else {
            throw std::invalid_argument("--model expects stump or majority");
        }
    }
    config.validate();
    const ctx::History history = ctx::load_history_manifest(manifest_path);
    const auto stream = ctx::load_stream_csv(stream_path);

    ctx::Registry seed_registry;
    if (!overrides.registry_in.empty()) {
        seed_registry = ctx::load_registry(overrides.registry_in);
    }
    ctx::Registry final_registry;
    const ctx::RunReport report =
        ctx::replay(history, stream, config, seed_registry, &final_registry);
    if (!overrides.registry_out.empty()) {
        ctx::save_registry(final_registry, overrides.registry_out);
    }

    const std::string json = ctx::report_to_json(report);
    if (out_path.empty() || out_path == "-") {
        std::cout << json;
    } else {
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write report: " + out_path);
        out << json;
    }
    if (!alarms_path.empty()) {
        ctx::write_alarm_csv(alarms_path, report.alarms);
    }
    return kOk;
}

int cmd_report(const std::string& report_path, const std::string& csv_path) {
    const ctx::RunReport report = ctx::report_from_json(read_file(report_path));
    ctx::check_report_integrity(report);
    std::cout << ctx::format_summary(report);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write csv: " + csv_path);
        out << ctx::summary_csv(report);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"context-aware analytic model management"};
    app.require_subcommand(1);

    std::string snap_a, snap_b, manifest, stream, config, out, alarms, report_path, csv;
    double wa = 0.8, wv = 0.2;
    std::optional<std::uint64_t> seed;

    auto* validate = app.add_subcommand("validate", "check a snapshot file");
    validate->add_option("file", snap_a, "snapshot file")->required();

    auto* fingerprint = app.add_subcommand("fingerprint", "print a snapshot's content hash");
    fingerprint->add_option("file", snap_a, "snapshot file")->required();

    auto* diff = app.add_subcommand("diff", "assertion-level diff of two snapshots");
    diff->add_option("older", snap_a, "older snapshot")->required();
    diff->add_option("newer", snap_b, "newer snapshot")->required();

    auto* sim = app.add_subcommand("sim", "semantic similarity of two snapshots");
    sim->add_option("a", snap_a, "first snapshot")->required();
    sim->add_option("b", snap_b, "second snapshot")->required();
    sim->add_option("--wa", wa, "assertion-set weight");
    sim->add_option("--wv", wv, "vocabulary weight");

    auto* scenario = app.add_subcommand("scenario", "generate the welding-cell scenario");
    scenario->add_option("--config", config, "key=value config file");
    scenario->add_option("--seed", seed, "generator seed (overrides config)");
    scenario->add_option("--out", out, "output directory")->required();

    auto* run = app.add_subcommand("run", "replay a stream against a context history");
    RunOverrides overrides;
    run->add_option("--manifest", manifest, "history manifest")->required();
    run->add_option("--stream", stream, "stream csv")->required();
    run->add_option("--config", config, "key=value config file");
    run->add_option("--out", out, "report json path ('-' = stdout)");
    run->add_option("--alarms", alarms, "alarm log csv path");
    run->add_option("--tau", overrides.tau, "similarity acceptance threshold");
    run->add_option("--wa", overrides.wa, "assertion-set weight");
    run->add_option("--wv", overrides.wv, "vocabulary weight");
    run->add_option("--alpha", overrides.alpha, "window-test significance level");
    run->add_option("--window", overrides.window, "window size");
    run->add_option("--lookback", overrides.lookback, "completeness lookback span");
    run->add_option("--train-batch", overrides.train_batch, "train-on-miss batch size");
    run->add_option("--ddm-warmup", overrides.ddm_warmup, "ddm warm-up samples");
    run->add_option("--model", overrides.model, "stump or majority");
    run->add_option("--registry-in", overrides.registry_in, "seed model bindings from a file");
    run->add_option("--registry-out", overrides.registry_out, "persist model bindings to a file");

    auto* report = app.add_subcommand("report", "summarize a run report");
    report->add_option("file", report_path, "report json")->required();
    report->add_option("--csv", csv, "write machine-readable summary csv");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(snap_a);
        if (fingerprint->parsed()) return cmd_fingerprint(snap_a);
        if (diff->parsed()) return cmd_diff(snap_a, snap_b);
        if (sim->parsed()) return cmd_sim(snap_a, snap_b, wa, wv);
        if (scenario->parsed()) return cmd_scenario(config, seed, out);
        if (run->parsed()) return cmd_run(manifest, stream, config, out, alarms, overrides);
        if (report->parsed()) return cmd_report(report_path, csv);
    } catch (const ctx::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kMalformedInput;
    } catch (const ctx::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return kValidationFailure;
    } catch (const ctx::IntegrityError& e) {
        std::cerr << e.what() << '\n';
        return kValidationFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kMalformedInput;
    }
    return kOk;
}
