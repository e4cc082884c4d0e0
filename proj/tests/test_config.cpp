#include <doctest.h>

#include "ctx/config.hpp"
#include "ctx/errors.hpp"

using namespace ctx;

TEST_CASE("config: defaults mirror the documented values") {
    const RunConfig c;
    CHECK(c.similarity.abox_weight == 0.8);
    CHECK(c.similarity.vocab_weight == 0.2);
    CHECK(c.registry.tau == 0.9);
    CHECK(c.ddm_warmup == 30);
    CHECK(c.window == 100);
    CHECK(c.alpha == 0.01);
    CHECK(c.lookback == 200);
    CHECK(c.train_batch == 100);
    CHECK(c.model_kind == ModelKind::ThresholdStump);

    const ScenarioConfig s;
    CHECK(s.theta == 0.4);
    CHECK(s.noise == 0.05);
}

TEST_CASE("config: file values override defaults") {
    const auto file = FileConfig::parse(
        "# run settings\n"
        "tau = 0.8\n"
        "wa=0.7\n"
        "wv=0.3\n"
        "window=50\n"
        "model=majority\n"
        "lookback=150\n");
    RunConfig c;
    file.apply(c);
    CHECK(c.registry.tau == 0.8);
    CHECK(c.similarity.abox_weight == 0.7);
    CHECK(c.similarity.vocab_weight == 0.3);
    CHECK(c.window == 50);
    CHECK(c.lookback == 150);
    CHECK(c.model_kind == ModelKind::MajorityClass);
}

TEST_CASE("config: scenario keys and segment lists") {
    const auto file = FileConfig::parse(
        "segments=Robo1:500,Robo2:500,Robo1:500\n"
        "theta=0.35\n"
        "noise=0.1\n"
        "seed=42\n");
    ScenarioConfig s;
    file.apply(s);
    REQUIRE(s.segments.size() == 3);
    CHECK(s.segments[0].context == RobotContext::Robo1);
    CHECK(s.segments[1].context == RobotContext::Robo2);
    CHECK(s.segments[2].length == 500);
    CHECK(s.theta == 0.35);
    CHECK(s.noise == 0.1);
    CHECK(s.seed == 42);
}

TEST_CASE("config: rejects unknown keys, bad values and bad weights") {
    CHECK_THROWS_AS(FileConfig::parse("bogus=1\n"), ParseError);
    CHECK_THROWS_AS(FileConfig::parse("tau\n"), ParseError);

    RunConfig c;
    CHECK_THROWS_AS(FileConfig::parse("tau=high\n").apply(c), std::invalid_argument);
    CHECK_THROWS_AS(FileConfig::parse("model=forest\n").apply(c), std::invalid_argument);
    CHECK_THROWS_AS(FileConfig::parse("wa=0.5\nwv=0.2\n").apply(c), std::invalid_argument);

    CHECK_THROWS_AS(parse_segments("Robo3:100"), ParseError);
    CHECK_THROWS_AS(parse_segments("Robo1"), ParseError);
    CHECK_THROWS_AS(parse_segments("Robo1:0"), ParseError);
    CHECK_THROWS_AS(parse_segments(""), ParseError);
}
