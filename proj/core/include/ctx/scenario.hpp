#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ctx/analytics.hpp"
#include "ctx/snapshot.hpp"

namespace ctx {

/// The two equipment configurations of the body-welding cell.
enum class RobotContext { Robo1, Robo2 };

std::string_view to_string(RobotContext context);

struct ScenarioSegment {
    RobotContext context;
    std::size_t length;
};

/// Deterministic generator configuration. Draws come from std::mt19937_64
/// (a fully specified engine) mapped to [0,1) via the 53-bit construction
/// (engine() >> 11) * 2^-53, so identical seeds reproduce identical streams
/// on every platform.
struct ScenarioConfig {
    std::vector<ScenarioSegment> segments;
    double theta = 0.4;   // Robo-1 defect threshold on quality
    double noise = 0.05;  // label-flip probability under Robo-1
    std::uint64_t seed = 0;

    void validate() const;  // throws std::invalid_argument
};

struct ScenarioOutput {
    std::vector<StreamRow> stream;        // t = 0..n-1
    std::vector<Snapshot> snapshots;      // per segment: id "seg<k>", timestamp k
    std::vector<std::uint64_t> truth;     // ground-truth change positions
};

/// Uniform [0,1) from the top 53 bits of one engine draw.
double uniform53(std::mt19937_64& engine);

/// The body-welding context: products P1/P2 made from material M22, process
/// BodyWelding producing both, equipment Robo-1 or Robo-2 in use. The two
/// variants differ in exactly one role assertion.
Snapshot build_snapshot(RobotContext context);
Snapshot build_snapshot(RobotContext context, std::string id, std::uint64_t timestamp);

/// Quality x ~ U(0,1). Under Robo1, y = (x < theta) XOR flip with
/// flip ~ Bernoulli(noise) drawn after x; under Robo2, y = false and no flip
/// is drawn. Fully deterministic given the seed.
ScenarioOutput generate(const ScenarioConfig& config);

/// Writes stream.csv, seg<k>.snap per segment, manifest.txt and truth.txt
/// into the directory (created if missing).
void write_scenario(const ScenarioOutput& output, const std::filesystem::path& directory);

}  // namespace ctx
