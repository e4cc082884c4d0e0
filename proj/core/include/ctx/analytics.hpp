#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ctx {

/// One labeled observation: feature vector x, boolean label y (true = defect).
struct Sample {
    std::vector<double> features;
    bool label = false;
};

/// Samples sharing one feature dimension. Construction validates shape and
/// finiteness; throws std::invalid_argument.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::vector<Sample> samples);

    const std::vector<Sample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    std::size_t feature_dim() const { return feature_dim_; }

private:
    std::vector<Sample> samples_;
    std::size_t feature_dim_ = 0;
};

/// Constant classifier: the most frequent training label (ties -> false).
struct MajorityClassModel {
    bool label = false;

    bool operator==(const MajorityClassModel&) const = default;
};

/// Single-feature threshold rule. polarity true: predict defect when
/// feature < threshold (strict); polarity false: the complement.
/// +-infinity thresholds express the constant classifiers.
struct ThresholdStumpModel {
    std::size_t feature_index = 0;
    double threshold = 0.0;
    bool polarity = true;

    bool operator==(const ThresholdStumpModel&) const = default;
};

using Model = std::variant<MajorityClassModel, ThresholdStumpModel>;

enum class ModelKind { MajorityClass, ThresholdStump };

/// Training is deterministic. The stump search is exhaustive over features,
/// candidate thresholds (midpoints between consecutive sorted distinct values
/// plus +-infinity sentinels) and both polarities, minimizing training error;
/// ties break toward the smallest feature index, then the smallest threshold,
/// then polarity=true. Throws std::invalid_argument on an empty dataset.
Model train(const Dataset& data, ModelKind kind);

/// Throws std::out_of_range when the feature vector is too short for the model.
bool predict(const Model& model, std::span<const double> features);

/// Fraction of samples with predict(m, x) == y. Throws on empty data.
double evaluate(const Model& model, const Dataset& data);

/// One row of the stream/dataset CSV: `t,x1..xk,label,snapshot_id`.
struct StreamRow {
    std::uint64_t t = 0;
    std::vector<double> features;
    bool label = false;
    std::string snapshot_id;
};

std::vector<StreamRow> load_stream_csv(const std::filesystem::path& path);
void write_stream_csv(const std::filesystem::path& path, std::span<const StreamRow> rows);

/// Strips snapshot ids / indices; keeps features and labels.
Dataset to_dataset(std::span<const StreamRow> rows);

}  // namespace ctx
