#include "ctx/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ctx/errors.hpp"

namespace ctx {

void RunConfig::validate() const {
    similarity.validate();
    registry.validate();
    if (window == 0) throw std::invalid_argument("window must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (train_batch == 0) throw std::invalid_argument("train_batch must be positive");
}

namespace {

const std::set<std::string> kKnownKeys = {
    "wa",     "wv",    "tau",         "ddm_warmup", "window", "alpha",
    "lookback", "train_batch", "model", "theta",      "noise",  "seed", "segments",
};

double to_double(const std::string& key, const std::string& value) {
    double v{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw std::invalid_argument("config key '" + key + "' expects a number, got '" + value +
                                    "'");
    }
    return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
    std::uint64_t v{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw std::invalid_argument("config key '" + key + "' expects a non-negative integer");
    }
    return v;
}

}  // namespace

FileConfig FileConfig::parse(const std::string& text) {
    FileConfig config;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        std::size_t start = 0;
        while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) ++start;
        if (start == line.size()) continue;

        const auto eq = line.find('=', start);
        if (eq == std::string::npos) {
            throw ParseError(line_no, line, "expected key=value");
        }
        std::string key = line.substr(start, eq - start);
        std::string value = line.substr(eq + 1);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        std::size_t vs = 0;
        while (vs < value.size() && (value[vs] == ' ' || value[vs] == '\t')) ++vs;
        value.erase(0, vs);

        if (!kKnownKeys.contains(key)) {
            throw ParseError(line_no, key, "unknown config key");
        }
        config.values_[key] = value;
    }
    return config;
}

FileConfig FileConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::optional<std::string> FileConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

void FileConfig::apply(RunConfig& config) const {
    if (auto v = get("wa")) config.similarity.abox_weight = to_double("wa", *v);
    if (auto v = get("wv")) config.similarity.vocab_weight = to_double("wv", *v);
    if (auto v = get("tau")) config.registry.tau = to_double("tau", *v);
    if (auto v = get("ddm_warmup")) config.ddm_warmup = to_uint("ddm_warmup", *v);
    if (auto v = get("window")) config.window = static_cast<std::size_t>(to_uint("window", *v));
    if (auto v = get("alpha")) config.alpha = to_double("alpha", *v);
    if (auto v = get("lookback")) config.lookback = to_uint("lookback", *v);
    if (auto v = get("train_batch"))
        config.train_batch = static_cast<std::size_t>(to_uint("train_batch", *v));
    if (auto v = get("model")) {
        if (*v == "stump") {
            config.model_kind = ModelKind::ThresholdStump;
        } else if (*v == "majority") {
            config.model_kind = ModelKind::MajorityClass;
        } else {
            throw std::invalid_argument("config key 'model' expects stump or majority");
        }
    }
    config.validate();
}

void FileConfig::apply(ScenarioConfig& config) const {
    if (auto v = get("theta")) config.theta = to_double("theta", *v);
    if (auto v = get("noise")) config.noise = to_double("noise", *v);
    if (auto v = get("seed")) config.seed = to_uint("seed", *v);
    if (auto v = get("segments")) config.segments = parse_segments(*v);
}

std::vector<ScenarioSegment> parse_segments(const std::string& text) {
    std::vector<ScenarioSegment> segments;
    std::istringstream in(text);
    std::string entry;
    while (std::getline(in, entry, ',')) {
        const auto colon = entry.find(':');
        if (colon == std::string::npos) {
            throw ParseError(1, entry, "segment entries look like Robo1:<length>");
        }
        const std::string name = entry.substr(0, colon);
        const std::string count = entry.substr(colon + 1);
        RobotContext context;
        if (name == "Robo1") {
            context = RobotContext::Robo1;
        } else if (name == "Robo2") {
            context = RobotContext::Robo2;
        } else {
            throw ParseError(1, name, "unknown context (Robo1 or Robo2)");
        }
        std::size_t length{};
        auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), length);
        if (ec != std::errc{} || ptr != count.data() + count.size() || length == 0) {
            throw ParseError(1, count, "segment length must be a positive integer");
        }
        segments.push_back({context, length});
    }
    if (segments.empty()) throw ParseError(1, text, "empty segment list");
    return segments;
}

}  // namespace ctx
