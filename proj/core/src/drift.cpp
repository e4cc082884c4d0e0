#include "ctx/drift.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace ctx {

std::string_view to_string(AlarmKind kind) {
    return kind == AlarmKind::Warning ? "warning" : "drift";
}

DdmDetector::DdmDetector(std::uint64_t warmup) : warmup_(warmup) { reset(); }

void DdmDetector::reset() {
    n_ = 0;
    errors_ = 0;
    p_min_ = std::numeric_limits<double>::infinity();
    s_min_ = std::numeric_limits<double>::infinity();
    state_ = State::Stable;
}

std::optional<DriftAlarm> DdmDetector::update(std::uint64_t stream_index, bool error) {
    ++n_;
    if (error) ++errors_;
    const double p = static_cast<double>(errors_) / static_cast<double>(n_);
    const double s = std::sqrt(p * (1.0 - p) / static_cast<double>(n_));
    if (n_ < warmup_) return std::nullopt;

    if (p + s < p_min_ + s_min_) {
        p_min_ = p;
        s_min_ = s;
    }
    if (s_min_ == 0.0) {
        // Error-free baseline: no variance to compare against. Restart once
        // evidence arrives rather than alarming on the first error.
        if (p + s > 0.0) reset();
        return std::nullopt;
    }

    if (p + s > p_min_ + 3.0 * (s_min_ + s)) {
        const double statistic = p + s;
        reset();
        return DriftAlarm{stream_index, AlarmKind::Drift, statistic, "ddm"};
    }
    if (p + s > p_min_ + 2.0 * (s_min_ + s)) {
        if (state_ != State::Warning) {
            state_ = State::Warning;
            return DriftAlarm{stream_index, AlarmKind::Warning, p + s, "ddm"};
        }
        return std::nullopt;
    }
    state_ = State::Stable;
    return std::nullopt;
}

TwoWindowTest::TwoWindowTest(std::size_t window, double alpha) : w_(window), alpha_(alpha) {
    if (window == 0) throw std::invalid_argument("window size must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
}

std::optional<DriftAlarm> TwoWindowTest::update(std::uint64_t stream_index, bool error) {
    if (ref_.size() < w_) {
        ref_.push_back(error);
        ref_errors_ += error ? 1 : 0;
        return std::nullopt;
    }
    cur_.push_back(error);
    cur_errors_ += error ? 1 : 0;
    if (cur_.size() > w_) {
        cur_errors_ -= cur_.front() ? 1 : 0;
        cur_.pop_front();
    }
    if (cur_.size() < w_) return std::nullopt;

    const double n = static_cast<double>(w_);
    const double pooled = static_cast<double>(ref_errors_ + cur_errors_) / (2.0 * n);
    if (pooled <= 0.0 || pooled >= 1.0) return std::nullopt;  // degenerate variance

    ++tests_;
    const boost::math::normal_distribution<double> normal;
    const double step_alpha = alpha_ / static_cast<double>(tests_);
    const double critical = boost::math::quantile(normal, 1.0 - step_alpha / 2.0);

    const double p_ref = static_cast<double>(ref_errors_) / n;
    const double p_cur = static_cast<double>(cur_errors_) / n;
    const double se = std::sqrt(pooled * (1.0 - pooled) * (2.0 / n));
    const double z = (p_ref - p_cur) / se;

    if (std::abs(z) > critical) {
        ref_.clear();
        cur_.clear();
        ref_errors_ = 0;
        cur_errors_ = 0;
        tests_ = 0;
        return DriftAlarm{stream_index, AlarmKind::Drift, z, "window"};
    }
    return std::nullopt;
}

CompletenessVerdict verify_completeness(std::span<const DriftAlarm> alarms,
                                        std::span<const ChangeEvent> changes,
                                        std::span<const std::uint64_t> stream_timestamps,
                                        std::uint64_t lookback) {
    // Map each change event to the first stream position carrying its timestamp.
    std::vector<std::uint64_t> positions;
    for (const auto& change : changes) {
        for (std::size_t i = 0; i < stream_timestamps.size(); ++i) {
            if (stream_timestamps[i] == change.at) {
                positions.push_back(static_cast<std::uint64_t>(i));
                break;
            }
        }
    }
    std::sort(positions.begin(), positions.end());

    CompletenessVerdict verdict;
    verdict.lookback = lookback;
    for (const auto& alarm : alarms) {
        if (alarm.kind != AlarmKind::Drift) continue;
        const std::uint64_t lo = alarm.at >= lookback ? alarm.at - lookback : 0;
        const bool covered = std::any_of(positions.begin(), positions.end(), [&](std::uint64_t p) {
            return p >= lo && p <= alarm.at;
        });
        if (!covered) {
            verdict.result = Completeness::ContextIncomplete;
            verdict.offending_alarm = alarm;
            return verdict;
        }
    }
    verdict.result = Completeness::ContextSufficient;
    return verdict;
}

void write_alarm_csv(const std::filesystem::path& path, std::span<const DriftAlarm> alarms) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write alarm log: " + path.string());
    out << "index,detector,kind,statistic\n";
    char buf[32];
    for (const auto& a : alarms) {
        std::snprintf(buf, sizeof buf, "%.17g", a.statistic);
        out << a.at << ',' << a.detector << ',' << to_string(a.kind) << ',' << buf << '\n';
    }
}

}  // namespace ctx
