#include "ctx/registry.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ctx/errors.hpp"

namespace ctx {

void RegistryConfig::validate() const {
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw std::invalid_argument("tau must lie in [0,1]");
    }
}

Registry Registry::bind(const Fingerprint& fp, Model model, double performance,
                        std::uint64_t trained_at) const {
    if (!(performance >= 0.0 && performance <= 1.0)) {
        throw std::invalid_argument("performance must lie in [0,1]");
    }
    Registry updated = *this;
    auto it = updated.records_.find(fp);
    if (it == updated.records_.end()) {
        updated.records_.emplace(fp, ModelRecord{fp, std::move(model), performance, trained_at});
        return updated;
    }
    // keep-best: higher performance wins, ties go to the newer training
    const ModelRecord& existing = it->second;
    if (performance > existing.performance ||
        (performance == existing.performance && trained_at > existing.trained_at)) {
        it->second = ModelRecord{fp, std::move(model), performance, trained_at};
    }
    return updated;
}

const ModelRecord* Registry::find(const Fingerprint& fp) const {
    auto it = records_.find(fp);
    return it == records_.end() ? nullptr : &it->second;
}

ModelChoice select(const Registry& registry, const History& history, const Snapshot& current,
                   const RegistryConfig& cfg, const SimilarityConfig& sim_cfg) {
    cfg.validate();
    sim_cfg.validate();

    const Fingerprint current_fp = fingerprint(current);
    if (const ModelRecord* exact = registry.find(current_fp)) {
        return ExactMatch{*exact};
    }

    // Similarity fallback over history entries whose fingerprint is bound.
    const ModelRecord* best_record = nullptr;
    SimilarityScore best_score{};
    std::size_t best_index = 0;
    bool found = false;
    for (std::size_t i = 0; i < history.size(); ++i) {
        const ModelRecord* record = registry.find(history[i].fingerprint);
        if (record == nullptr) continue;
        SimilarityScore score = sim(history[i].snapshot, current, sim_cfg);
        // >= : equal scores resolve to the later history entry
        if (!found || score.value >= best_score.value) {
            best_record = record;
            best_score = score;
            best_index = i;
            found = true;
        }
    }
    if (found && best_score.value >= cfg.tau) {
        return SimilarMatch{*best_record, best_score, best_index};
    }
    return Miss{};
}

namespace {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double_token(const std::string& token, std::size_t line_no) {
    if (token == "inf") return std::numeric_limits<double>::infinity();
    if (token == "-inf") return -std::numeric_limits<double>::infinity();
    double v{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError(line_no, token, "expected a number");
    }
    return v;
}

}  // namespace

void save_registry(const Registry& registry, const std::filesystem::path& path) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write registry: " + tmp.string());
        for (const auto& [fp, record] : registry.records()) {
            out << fp.hex() << ' ';
            if (const auto* mc = std::get_if<MajorityClassModel>(&record.model)) {
                out << "majority " << (mc->label ? 1 : 0);
            } else {
                const auto& stump = std::get<ThresholdStumpModel>(record.model);
                out << "stump " << stump.feature_index << ' ' << format_double(stump.threshold)
                    << ' ' << (stump.polarity ? 1 : 0);
            }
            out << ' ' << format_double(record.performance) << ' ' << record.trained_at << '\n';
        }
    }
    std::filesystem::rename(tmp, path);
}

Registry load_registry(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open registry: " + path.string());

    Registry registry;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream tokens(line);
        std::string hex, kind;
        if (!(tokens >> hex)) continue;  // blank line
        const auto fp = Fingerprint::from_hex(hex);
        if (!fp) throw ParseError(line_no, hex, "expected a 64-digit fingerprint");
        if (!(tokens >> kind)) throw ParseError(line_no, line, "missing model kind");

        Model model;
        if (kind == "majority") {
            int label{};
            if (!(tokens >> label) || (label != 0 && label != 1)) {
                throw ParseError(line_no, kind, "majority takes a 0/1 label");
            }
            model = MajorityClassModel{label == 1};
        } else if (kind == "stump") {
            std::size_t feature{};
            std::string threshold;
            int polarity{};
            if (!(tokens >> feature >> threshold >> polarity) || (polarity != 0 && polarity != 1)) {
                throw ParseError(line_no, kind, "stump takes <feature> <threshold> <polarity01>");
            }
            model = ThresholdStumpModel{feature, parse_double_token(threshold, line_no),
                                        polarity == 1};
        } else {
            throw ParseError(line_no, kind, "unknown model kind");
        }

        std::string perf_token;
        std::uint64_t trained_at{};
        if (!(tokens >> perf_token >> trained_at)) {
            throw ParseError(line_no, line, "missing performance / trained_at");
        }
        std::string trailing;
        if (tokens >> trailing) throw ParseError(line_no, trailing, "trailing tokens");
        registry = registry.bind(*fp, std::move(model), parse_double_token(perf_token, line_no),
                                 trained_at);
    }
    return registry;
}

}  // namespace ctx
