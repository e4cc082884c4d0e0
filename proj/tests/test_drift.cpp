#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ctx/drift.hpp"
#include "ctx/scenario.hpp"

using namespace ctx;

namespace {

// Direct transcription of the documented DDM update rules, kept separate
// from the production implementation as an oracle.
struct DdmOracle {
    std::uint64_t warmup, n = 0, errors = 0;
    double pmin = INFINITY, smin = INFINITY;
    bool warning = false;

    explicit DdmOracle(std::uint64_t w = 30) : warmup(w) {}

    void restart() {
        n = errors = 0;
        pmin = smin = INFINITY;
        warning = false;
    }

    // returns 0 = nothing, 1 = warning, 2 = drift
    int update(bool error) {
        ++n;
        errors += error ? 1 : 0;
        const double p = double(errors) / double(n);
        const double s = std::sqrt(p * (1 - p) / double(n));
        if (n < warmup) return 0;
        if (p + s < pmin + smin) {
            pmin = p;
            smin = s;
        }
        if (smin == 0.0) {
            if (p + s > 0.0) restart();
            return 0;
        }
        if (p + s > pmin + 3 * (smin + s)) {
            restart();
            return 2;
        }
        if (p + s > pmin + 2 * (smin + s)) {
            const bool entered = !warning;
            warning = true;
            return entered ? 1 : 0;
        }
        warning = false;
        return 0;
    }
};

std::vector<bool> bernoulli_stream(double rate, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<bool> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = uniform53(rng) < rate;
    return out;
}

}  // namespace

TEST_CASE("ddm: an error-free stream never alarms") {
    DdmDetector d;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        CHECK(!d.update(i, false).has_value());
    }
    CHECK(d.error_count() == 0);
}

TEST_CASE("ddm: rate jump 0.05 -> 0.6 raises drift after the change point") {
    DdmDetector d;
    std::optional<DriftAlarm> drift;
    std::mt19937_64 rng(20240915);
    for (std::uint64_t i = 0; i < 1500 && !drift; ++i) {
        const double rate = i < 500 ? 0.05 : 0.6;
        const auto alarm = d.update(i, uniform53(rng) < rate);
        if (alarm && alarm->kind == AlarmKind::Drift) drift = alarm;
    }
    REQUIRE(drift.has_value());
    CHECK(drift->at > 500);
    CHECK(drift->at < 700);
    CHECK(drift->detector == "ddm");
}

TEST_CASE("ddm: false-alarm rate on a constant 0.5 stream stays within 5%") {
    int alarmed_runs = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        DdmDetector d;
        bool alarmed = false;
        std::mt19937_64 rng(seed);
        for (std::uint64_t i = 0; i < 2000; ++i) {
            const auto alarm = d.update(i, uniform53(rng) < 0.5);
            if (alarm && alarm->kind == AlarmKind::Drift) alarmed = true;
        }
        alarmed_runs += alarmed ? 1 : 0;
    }
    CHECK(alarmed_runs <= 2);  // 5% of 50 runs
}

TEST_CASE("ddm: matches the rule transcription on random streams") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const double rate = (1 + rng() % 60) / 100.0;
        const auto stream = bernoulli_stream(rate, 800, rng());
        DdmDetector detector;
        DdmOracle oracle;
        for (std::size_t i = 0; i < stream.size(); ++i) {
            const auto alarm = detector.update(i, stream[i]);
            const int expected = oracle.update(stream[i]);
            if (expected == 0) {
                CHECK(!alarm.has_value());
            } else {
                REQUIRE(alarm.has_value());
                CHECK(alarm->kind == (expected == 2 ? AlarmKind::Drift : AlarmKind::Warning));
                CHECK(alarm->at == i);
            }
        }
        CHECK(detector.sample_count() == oracle.n);
        CHECK(detector.error_count() == oracle.errors);
    }
}

TEST_CASE("ddm: no alarm inside the warm-up on arbitrary streams") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        DdmDetector d;
        std::mt19937_64 rng(seed);
        for (std::uint64_t i = 0; i < 29; ++i) {
            CHECK(!d.update(i, rng() % 2 == 0).has_value());
        }
    }
    DdmDetector all_true;
    for (std::uint64_t i = 0; i < 29; ++i) {
        CHECK(!all_true.update(i, true).has_value());
    }
}

TEST_CASE("ddm: minima track the smallest observed p+s") {
    DdmDetector d;
    std::mt19937_64 rng(3);
    double least = INFINITY;
    for (std::uint64_t i = 0; i < 400; ++i) {
        d.update(i, uniform53(rng) < 0.3);
        const std::uint64_t n = d.sample_count();
        if (n >= 30) {
            const double p = double(d.error_count()) / double(n);
            const double s = std::sqrt(p * (1 - p) / double(n));
            least = std::min(least, p + s);
            CHECK(d.p_min() + d.s_min() == doctest::Approx(least).epsilon(1e-12));
        }
    }
}

TEST_CASE("window: both windows all-false is degenerate, no alarm") {
    TwoWindowTest t(100, 0.01);
    for (std::uint64_t i = 0; i < 500; ++i) {
        CHECK(!t.update(i, false).has_value());
    }
    CHECK(t.tests_run() == 0);
}

TEST_CASE("window: 0.5-rate reference vs all-clean current gives |z| near 8.16") {
    TwoWindowTest t(100, 0.01);
    std::uint64_t i = 0;
    for (; i < 100; ++i) t.update(i, i % 2 == 0);  // reference: 50 errors
    std::optional<DriftAlarm> alarm;
    for (; i < 200; ++i) {
        const auto a = t.update(i, false);
        if (a) alarm = a;
    }
    REQUIRE(alarm.has_value());  // first test runs at the plain alpha level
    CHECK(alarm->at == 199);
    CHECK(alarm->kind == AlarmKind::Drift);
    CHECK(alarm->statistic == doctest::Approx(8.16496580927726).epsilon(1e-9));
    CHECK(alarm->detector == "window");
}

TEST_CASE("window: 150 samples cannot alarm with w=100") {
    TwoWindowTest t(100, 0.01);
    std::mt19937_64 rng(5);
    for (std::uint64_t i = 0; i < 150; ++i) {
        CHECK(!t.update(i, rng() % 2 == 0).has_value());
    }
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        TwoWindowTest fresh(100, 0.01);
        std::mt19937_64 r(seed);
        for (std::uint64_t i = 0; i < 2 * 100 - 1; ++i) {
            CHECK(!fresh.update(i, r() % 2 == 0).has_value());
        }
    }
}

TEST_CASE("window: detects the error-rate drop after a rise") {
    TwoWindowTest t(100, 0.01);
    std::mt19937_64 rng(12);
    std::vector<std::uint64_t> drifts;
    for (std::uint64_t i = 0; i < 1200; ++i) {
        const double rate = i < 400 ? 0.06 : (i < 800 ? 0.4 : 0.05);
        const auto a = t.update(i, uniform53(rng) < rate);
        if (a) drifts.push_back(a->at);
    }
    REQUIRE(drifts.size() >= 2);
    CHECK(drifts[0] > 400);
    CHECK(drifts[0] <= 550);
    // the drop at 800 is found too
    CHECK(std::any_of(drifts.begin(), drifts.end(),
                      [](std::uint64_t at) { return at > 800 && at <= 950; }));
}

TEST_CASE("window: false-alarm rate on stationary streams stays within 5%") {
    for (double rate : {0.41, 0.06}) {
        int alarmed_runs = 0;
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            TwoWindowTest t(100, 0.01);
            bool alarmed = false;
            std::mt19937_64 rng(seed * 13 + 1);
            for (std::uint64_t i = 0; i < 2000; ++i) {
                if (t.update(i, uniform53(rng) < rate)) alarmed = true;
            }
            alarmed_runs += alarmed ? 1 : 0;
        }
        CHECK(alarmed_runs <= 2);
    }
}

TEST_CASE("detectors: identical streams produce identical alarm sequences") {
    const auto stream = bernoulli_stream(0.3, 1500, 99);
    auto run = [&stream]() {
        DdmDetector d;
        TwoWindowTest t(100, 0.01);
        std::vector<DriftAlarm> alarms;
        for (std::size_t i = 0; i < stream.size(); ++i) {
            if (auto a = d.update(i, stream[i])) alarms.push_back(*a);
            if (auto a = t.update(i, stream[i])) alarms.push_back(*a);
        }
        return alarms;
    };
    const auto a = run();
    const auto b = run();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].at == b[i].at);
        CHECK(a[i].kind == b[i].kind);
        CHECK(a[i].statistic == b[i].statistic);
        CHECK(a[i].detector == b[i].detector);
    }
}

TEST_CASE("verify_completeness: base cases") {
    CHECK(verify_completeness({}, {}, {}, 200).sufficient());

    std::vector<std::uint64_t> timestamps(1000, 0);
    for (std::size_t i = 500; i < 1000; ++i) timestamps[i] = 1;
    std::vector<ChangeEvent> changes{{1, {}}};

    std::vector<DriftAlarm> covered{{540, AlarmKind::Drift, 3.0, "ddm"}};
    CHECK(verify_completeness(covered, changes, timestamps, 200).sufficient());

    // no change events at all: the same alarm is uncovered
    const auto verdict = verify_completeness(covered, {}, timestamps, 200);
    CHECK(!verdict.sufficient());
    REQUIRE(verdict.offending_alarm.has_value());
    CHECK(verdict.offending_alarm->at == 540);

    // warnings never flag incompleteness
    std::vector<DriftAlarm> warn{{540, AlarmKind::Warning, 2.0, "ddm"}};
    CHECK(verify_completeness(warn, {}, timestamps, 200).sufficient());

    // an alarm too long after the change is uncovered
    std::vector<DriftAlarm> late{{800, AlarmKind::Drift, 3.0, "ddm"}};
    CHECK(!verify_completeness(late, changes, timestamps, 200).sufficient());
}

TEST_CASE("property: enlarging the lookback never flips sufficient to incomplete") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 600;
        std::vector<std::uint64_t> timestamps(n, 0);
        const std::size_t change_at = 100 + rng() % 300;
        for (std::size_t i = change_at; i < n; ++i) timestamps[i] = 1;
        std::vector<ChangeEvent> changes{{1, {}}};
        std::vector<DriftAlarm> alarms;
        const std::size_t n_alarms = rng() % 4;
        for (std::size_t a = 0; a < n_alarms; ++a) {
            alarms.push_back({rng() % n, AlarmKind::Drift, 3.0, "ddm"});
        }
        std::sort(alarms.begin(), alarms.end(),
                  [](const DriftAlarm& x, const DriftAlarm& y) { return x.at < y.at; });
        const std::uint64_t w1 = rng() % 200;
        const std::uint64_t w2 = w1 + rng() % 200;
        const auto v1 = verify_completeness(alarms, changes, timestamps, w1);
        const auto v2 = verify_completeness(alarms, changes, timestamps, w2);
        if (v1.sufficient()) CHECK(v2.sufficient());
    }
}

TEST_CASE("claim check: label stream is stationary within a context, shifted across") {
    // two-segment scenario labels; window test between halves
    ScenarioConfig cfg;
    cfg.segments = {{RobotContext::Robo1, 500}, {RobotContext::Robo2, 500}};
    cfg.seed = 7;
    const auto out = generate(cfg);

    // restricted to the first fingerprint: halves of rows [0,500)
    TwoWindowTest within(250, 0.01);
    bool within_alarm = false;
    for (std::size_t i = 0; i < 500; ++i) {
        if (within.update(i, out.stream[i].label)) within_alarm = true;
    }
    CHECK(!within_alarm);

    // unrestricted: halves straddle the context change
    TwoWindowTest across(500, 0.01);
    bool across_alarm = false;
    for (std::size_t i = 0; i < 1000; ++i) {
        if (across.update(i, out.stream[i].label)) across_alarm = true;
    }
    CHECK(across_alarm);
}
