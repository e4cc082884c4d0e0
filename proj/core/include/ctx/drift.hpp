#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctx/history.hpp"

namespace ctx {

enum class AlarmKind { Warning, Drift };

std::string_view to_string(AlarmKind kind);

/// A detector event on a boolean error stream.
struct DriftAlarm {
    std::uint64_t at = 0;       // stream index of the triggering update
    AlarmKind kind = AlarmKind::Drift;
    double statistic = 0.0;     // DDM: p+s at the alarm; window test: z
    std::string detector;       // "ddm" or "window"
};

/// Error-rate monitor in the DDM family. Tracks the running error rate
/// p = errors/n with standard error s = sqrt(p(1-p)/n) and the minimum of
/// p+s seen since the last reset (minima recorded once the warm-up
/// completes). Alarm rules, strict comparisons throughout:
///
///   warning: p + s > p_min + 2*(s_min + s)
///   drift:   p + s > p_min + 3*(s_min + s)   -> counts and minima reset
///
/// The margin includes the current estimate's standard error so that a
/// stationary stream stays quiet over thousands of samples while genuine
/// rate rises still trip within tens of samples. A minimum recorded on an
/// error-free prefix (s_min == 0) carries no usable variance; when evidence
/// arrives the detector restarts its counts instead of alarming.
///
/// A Warning alarm is emitted on the transition into the warning zone;
/// a Drift alarm every time the drift rule fires.
class DdmDetector {
public:
    enum class State { Stable, Warning };

    explicit DdmDetector(std::uint64_t warmup = 30);

    /// Consumes one prediction-error flag. stream_index only labels alarms.
    std::optional<DriftAlarm> update(std::uint64_t stream_index, bool error);

    std::uint64_t sample_count() const { return n_; }
    std::uint64_t error_count() const { return errors_; }
    double p_min() const { return p_min_; }
    double s_min() const { return s_min_; }
    State state() const { return state_; }

private:
    void reset();

    std::uint64_t warmup_;
    std::uint64_t n_ = 0;
    std::uint64_t errors_ = 0;
    double p_min_;
    double s_min_;
    State state_ = State::Stable;
};

/// Streaming two-proportion z-test between a reference window and a sliding
/// current window of w error flags each. The reference holds the first w
/// flags after construction or after the last alarm; the current window is
/// FIFO. Once both are full every update runs the pooled two-proportion test
///
///   z = (p_ref - p_cur) / sqrt(pp*(1-pp)*(2/w)),  pp = pooled error rate,
///
/// skipped when pp is 0 or 1 (no variance to test against). The m-th test
/// since the last alarm compares |z| against the two-sided normal critical
/// value at alpha/m: a harmonic alpha-spending whose union bound grows only
/// logarithmically with the length of a quiet stretch, while consecutive
/// tests overlap in all but one sample, so the realized false-alarm rate per
/// stretch stays near alpha. The first test after an alarm uses the plain
/// alpha critical value. On alarm both windows clear and the reference
/// refills from the subsequent stream.
class TwoWindowTest {
public:
    explicit TwoWindowTest(std::size_t window = 100, double alpha = 0.01);

    std::optional<DriftAlarm> update(std::uint64_t stream_index, bool error);

    std::size_t window_size() const { return w_; }
    double alpha() const { return alpha_; }
    std::size_t reference_fill() const { return ref_.size(); }
    std::size_t current_fill() const { return cur_.size(); }
    std::uint64_t tests_run() const { return tests_; }

private:
    std::size_t w_;
    double alpha_;
    std::deque<bool> ref_;
    std::deque<bool> cur_;
    std::size_t ref_errors_ = 0;
    std::size_t cur_errors_ = 0;
    std::uint64_t tests_ = 0;  // since last alarm
};

enum class Completeness { ContextSufficient, ContextIncomplete };

/// Outcome of the drift-vs-context-change cross check: a Drift alarm with no
/// context change within the lookback span before it marks the context
/// knowledge base as incomplete.
struct CompletenessVerdict {
    Completeness result = Completeness::ContextSufficient;
    std::optional<DriftAlarm> offending_alarm;
    std::uint64_t lookback = 0;

    bool sufficient() const { return result == Completeness::ContextSufficient; }
};

/// stream_timestamps[i] is the context timestamp in effect at stream index i;
/// a ChangeEvent maps to the first index carrying its timestamp. A Drift
/// alarm at index a is covered when some change position p satisfies
/// a - lookback <= p <= a. Warning alarms never trigger incompleteness.
CompletenessVerdict verify_completeness(std::span<const DriftAlarm> alarms,
                                        std::span<const ChangeEvent> changes,
                                        std::span<const std::uint64_t> stream_timestamps,
                                        std::uint64_t lookback);

/// Alarm log CSV: `index,detector,kind,statistic`.
void write_alarm_csv(const std::filesystem::path& path, std::span<const DriftAlarm> alarms);

}  // namespace ctx
