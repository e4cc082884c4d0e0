#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "ctx/analytics.hpp"
#include "ctx/registry.hpp"
#include "ctx/scenario.hpp"
#include "ctx/similarity.hpp"

namespace ctx {

/// Replay parameters. Defaults mirror the documented module defaults.
struct RunConfig {
    SimilarityConfig similarity;          // wa / wv
    RegistryConfig registry;              // tau
    std::uint64_t ddm_warmup = 30;
    std::size_t window = 100;             // two-window test size
    double alpha = 0.01;
    std::uint64_t lookback = 200;         // completeness lookback span
    std::size_t train_batch = 100;        // samples collected per train-on-miss
    ModelKind model_kind = ModelKind::ThresholdStump;

    void validate() const;
};

/// Flat key=value file ('#' comments). Unknown keys are rejected.
/// Recognized keys: wa, wv, tau, ddm_warmup, window, alpha, lookback,
/// train_batch, model, theta, noise, seed, segments.
class FileConfig {
public:
    FileConfig() = default;
    static FileConfig load(const std::filesystem::path& path);   // throws ParseError
    static FileConfig parse(const std::string& text);

    std::optional<std::string> get(const std::string& key) const;

    /// Applies wa/wv/tau/ddm_warmup/window/alpha/lookback/train_batch/model.
    void apply(RunConfig& config) const;

    /// Applies segments/theta/noise/seed. `segments` is a comma-separated
    /// list of Robo1:<n> / Robo2:<n> entries.
    void apply(ScenarioConfig& config) const;

private:
    std::map<std::string, std::string> values_;
};

std::vector<ScenarioSegment> parse_segments(const std::string& text);  // throws ParseError

}  // namespace ctx
