#include "ctx/scenario.hpp"

#include <fstream>
#include <stdexcept>

namespace ctx {

std::string_view to_string(RobotContext context) {
    return context == RobotContext::Robo1 ? "Robo-1" : "Robo-2";
}

void ScenarioConfig::validate() const {
    if (segments.empty()) throw std::invalid_argument("scenario needs at least one segment");
    for (const auto& seg : segments) {
        if (seg.length == 0) throw std::invalid_argument("segment lengths must be positive");
    }
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0,1)");
    if (!(noise >= 0.0 && noise < 0.5)) throw std::invalid_argument("noise must lie in [0,0.5)");
}

double uniform53(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

Snapshot build_snapshot(RobotContext context, std::string id, std::uint64_t timestamp) {
    Vocabulary vocab;
    vocab.concepts = {"Product", "Material", "Process", "Equipment"};
    vocab.roles = {"madeFrom", "uses", "produces"};

    // The robot swap replaces exactly the `uses` assertion; everything else,
    // including the registered equipment, is shared between the two variants.
    AssertionSet abox;
    abox.insert(ConceptAssertion{"Product", "P1"});
    abox.insert(ConceptAssertion{"Product", "P2"});
    abox.insert(ConceptAssertion{"Material", "M22"});
    abox.insert(ConceptAssertion{"Process", "BodyWelding"});
    abox.insert(ConceptAssertion{"Equipment", "Robo-1"});
    abox.insert(RoleAssertion{"madeFrom", "P1", "M22"});
    abox.insert(RoleAssertion{"madeFrom", "P2", "M22"});
    abox.insert(RoleAssertion{"produces", "BodyWelding", "P1"});
    abox.insert(RoleAssertion{"produces", "BodyWelding", "P2"});
    abox.insert(RoleAssertion{"uses", "BodyWelding", std::string(to_string(context))});

    return Snapshot(std::move(id), timestamp, std::move(vocab), std::move(abox));
}

Snapshot build_snapshot(RobotContext context) {
    return build_snapshot(context, context == RobotContext::Robo1 ? "robo1" : "robo2", 0);
}

ScenarioOutput generate(const ScenarioConfig& config) {
    config.validate();

    ScenarioOutput output;
    std::mt19937_64 engine(config.seed);
    std::uint64_t index = 0;

    for (std::size_t k = 0; k < config.segments.size(); ++k) {
        const auto& segment = config.segments[k];
        output.snapshots.push_back(
            build_snapshot(segment.context, "seg" + std::to_string(k), k));
        if (k > 0) output.truth.push_back(index);

        for (std::size_t i = 0; i < segment.length; ++i) {
            StreamRow row;
            row.t = index;
            const double quality = uniform53(engine);
            row.features = {quality};
            if (segment.context == RobotContext::Robo1) {
                const bool base = quality < config.theta;
                const bool flip = uniform53(engine) < config.noise;
                row.label = base != flip;
            } else {
                row.label = false;  // Robo-2 tolerates material deviations
            }
            row.snapshot_id = "seg" + std::to_string(k);
            output.stream.push_back(std::move(row));
            ++index;
        }
    }
    return output;
}

void write_scenario(const ScenarioOutput& output, const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    write_stream_csv(directory / "stream.csv", output.stream);

    std::ofstream manifest(directory / "manifest.txt", std::ios::binary | std::ios::trunc);
    if (!manifest) {
        throw std::runtime_error("cannot write manifest in " + directory.string());
    }
    for (const auto& snapshot : output.snapshots) {
        const std::string name = snapshot.id() + ".snap";
        write_snapshot_file(snapshot, directory / name);
        manifest << name << '\n';
    }

    std::ofstream truth(directory / "truth.txt", std::ios::binary | std::ios::trunc);
    for (std::uint64_t p : output.truth) truth << p << '\n';
}

}  // namespace ctx
