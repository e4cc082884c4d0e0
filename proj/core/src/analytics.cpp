#include "ctx/analytics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "ctx/assertion.hpp"
#include "ctx/errors.hpp"

namespace ctx {

Dataset::Dataset(std::vector<Sample> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw std::invalid_argument("empty dataset");
    feature_dim_ = samples_.front().features.size();
    if (feature_dim_ == 0) throw std::invalid_argument("samples need at least one feature");
    for (const auto& s : samples_) {
        if (s.features.size() != feature_dim_) {
            throw std::invalid_argument("inconsistent feature dimension in dataset");
        }
        for (double v : s.features) {
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");
        }
    }
}

namespace {

MajorityClassModel train_majority(const Dataset& data) {
    std::size_t positives = 0;
    for (const auto& s : data.samples()) positives += s.label ? 1 : 0;
    // tie -> false
    return MajorityClassModel{2 * positives > data.size()};
}

ThresholdStumpModel train_stump(const Dataset& data) {
    const auto& samples = data.samples();
    const std::size_t n = samples.size();
    const double inf = std::numeric_limits<double>::infinity();

    std::size_t best_error = n + 1;
    ThresholdStumpModel best;

    std::vector<std::pair<double, bool>> column(n);
    for (std::size_t f = 0; f < data.feature_dim(); ++f) {
        for (std::size_t i = 0; i < n; ++i) column[i] = {samples[i].features[f], samples[i].label};
        std::sort(column.begin(), column.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        // prefix_true[i] = positives among the first i sorted samples
        std::vector<std::size_t> prefix_true(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) {
            prefix_true[i + 1] = prefix_true[i] + (column[i].second ? 1 : 0);
        }
        const std::size_t total_true = prefix_true[n];

        // Candidate thresholds as cut positions k (samples [0,k) below the
        // threshold): k=0 is -inf, k=n is +inf, interior cuts sit between
        // distinct consecutive values (midpoint).
        auto consider = [&](std::size_t k, double threshold) {
            // polarity=true predicts defect below the threshold:
            // errors = negatives below + positives at-or-above.
            const std::size_t below_true = prefix_true[k];
            const std::size_t err_true = (k - below_true) + (total_true - below_true);
            const std::size_t err_false = n - err_true;
            // enumeration order (feature asc, threshold asc, polarity true
            // first) + strict improvement realizes the tie rules
            if (err_true < best_error) {
                best_error = err_true;
                best = {f, threshold, true};
            }
            if (err_false < best_error) {
                best_error = err_false;
                best = {f, threshold, false};
            }
        };

        consider(0, -inf);
        for (std::size_t i = 1; i < n; ++i) {
            if (column[i].first > column[i - 1].first) {
                consider(i, (column[i - 1].first + column[i].first) / 2.0);
            }
        }
        consider(n, inf);
    }
    return best;
}

}  // namespace

Model train(const Dataset& data, ModelKind kind) {
    if (data.empty()) throw std::invalid_argument("cannot train on an empty dataset");
    switch (kind) {
        case ModelKind::MajorityClass: return train_majority(data);
        case ModelKind::ThresholdStump: return train_stump(data);
    }
    throw std::invalid_argument("unknown model kind");
}

bool predict(const Model& model, std::span<const double> features) {
    if (const auto* mc = std::get_if<MajorityClassModel>(&model)) {
        return mc->label;
    }
    const auto& stump = std::get<ThresholdStumpModel>(model);
    if (stump.feature_index >= features.size()) {
        throw std::out_of_range("feature vector too short for stump feature index " +
                                std::to_string(stump.feature_index));
    }
    const bool below = features[stump.feature_index] < stump.threshold;
    return stump.polarity ? below : !below;
}

double evaluate(const Model& model, const Dataset& data) {
    if (data.empty()) throw std::invalid_argument("cannot evaluate on an empty dataset");
    std::size_t correct = 0;
    for (const auto& s : data.samples()) {
        if (predict(model, s.features) == s.label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, std::size_t line_no) {
    double v{};
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw ParseError(line_no, s, "expected a finite number");
    }
    return v;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<StreamRow> load_stream_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stream csv: " + path.string());

    std::vector<StreamRow> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t feature_count = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            const auto header = split_csv(line);
            if (header.size() < 4 || header.front() != "t" || header.back() != "snapshot_id" ||
                header[header.size() - 2] != "label") {
                throw ParseError(line_no, line, "expected header t,x1..xk,label,snapshot_id");
            }
            feature_count = header.size() - 3;
            continue;
        }
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != feature_count + 3) {
            throw ParseError(line_no, line, "wrong field count");
        }
        StreamRow row;
        {
            const auto& s = fields[0];
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), row.t);
            if (ec != std::errc{} || ptr != s.data() + s.size()) {
                throw ParseError(line_no, s, "t must be a non-negative integer");
            }
        }
        row.features.reserve(feature_count);
        for (std::size_t i = 0; i < feature_count; ++i) {
            row.features.push_back(parse_double(fields[1 + i], line_no));
        }
        const auto& label = fields[feature_count + 1];
        if (label == "0") {
            row.label = false;
        } else if (label == "1") {
            row.label = true;
        } else {
            throw ParseError(line_no, label, "label must be 0 or 1");
        }
        row.snapshot_id = fields[feature_count + 2];
        if (!is_valid_identifier(row.snapshot_id)) {
            throw ParseError(line_no, row.snapshot_id, "invalid snapshot_id");
        }
        rows.push_back(std::move(row));
    }
    if (line_no == 0) throw ParseError(0, "", "empty stream csv");
    return rows;
}

void write_stream_csv(const std::filesystem::path& path, std::span<const StreamRow> rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write stream csv: " + path.string());
    const std::size_t k = rows.empty() ? 1 : rows.front().features.size();
    out << "t";
    for (std::size_t i = 1; i <= k; ++i) out << ",x" << i;
    out << ",label,snapshot_id\n";
    for (const auto& row : rows) {
        out << row.t;
        for (double v : row.features) out << ',' << format_double(v);
        out << ',' << (row.label ? '1' : '0') << ',' << row.snapshot_id << '\n';
    }
}

Dataset to_dataset(std::span<const StreamRow> rows) {
    std::vector<Sample> samples;
    samples.reserve(rows.size());
    for (const auto& row : rows) samples.push_back({row.features, row.label});
    return Dataset(std::move(samples));
}

}  // namespace ctx
