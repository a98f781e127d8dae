#include "deslab/diagnoser.hpp"
#include "deslab/error.hpp"
#include "deslab/plant.hpp"

#include <doctest.h>

#include <random>

using namespace deslab;

namespace {

Model tiny_model(int width, int n, std::uint64_t seed) {
    ModelConfig cfg;
    cfg.input_dim = width + 1;
    cfg.hidden = 4;
    cfg.window_length = n;
    return init_model(cfg, seed, TimeScaling::none());
}

TimedIOVector vec(double t_rel, std::vector<std::uint8_t> values) {
    return {t_rel, std::move(values)};
}

} // namespace

TEST_CASE("diagnoser warms up until the buffer holds N vectors") {
    Model m = tiny_model(2, 3, 1);
    Diagnoser d(m, 0.5);
    Verdict v1 = d.push(vec(0.0, {0, 1}));
    CHECK(v1.kind == Verdict::Kind::Warmup);
    CHECK(v1.top_confidence == 0.0);
    Verdict v2 = d.push(vec(100.0, {1, 1}));
    CHECK(v2.kind == Verdict::Kind::Warmup);
    Verdict v3 = d.push(vec(100.0, {1, 0}));
    CHECK(v3.kind != Verdict::Kind::Warmup); // buffer full from here on
    CHECK(d.buffered() == 3);
    Verdict v4 = d.push(vec(100.0, {0, 0}));
    CHECK(v4.kind != Verdict::Kind::Warmup);
    CHECK(d.buffered() == 3); // oldest evicted
}

TEST_CASE("uniform output distribution yields Uncertain under tau = 0.5") {
    Model m = tiny_model(2, 2, 1);
    m.head_w.setZero();
    m.head_b.setZero(); // softmax output exactly 1/8 everywhere
    Diagnoser d(m, 0.5);
    d.push(vec(0.0, {0, 0}));
    Verdict v = d.push(vec(50.0, {1, 0}));
    CHECK(v.kind == Verdict::Kind::Uncertain);
    CHECK(v.top_confidence == doctest::Approx(0.125));
}

TEST_CASE("confident verdicts split into Normal and Fault by argmax class") {
    Model m = tiny_model(2, 2, 1);
    m.head_w.setZero();
    m.head_b.setZero();
    m.head_b(0) = 10.0; // class 0 dominates -> Normal
    Diagnoser normal(m, 0.5);
    normal.push(vec(0.0, {0, 0}));
    Verdict vn = normal.push(vec(50.0, {0, 1}));
    CHECK(vn.kind == Verdict::Kind::Normal);

    m.head_b(0) = 0.0;
    m.head_b(4) = 10.0; // class 4 dominates -> Fault(4)
    Diagnoser fault(m, 0.5);
    fault.push(vec(0.0, {0, 0}));
    Verdict vf = fault.push(vec(50.0, {0, 1}));
    CHECK(vf.kind == Verdict::Kind::Fault);
    CHECK(vf.fault_class == 4);
    CHECK(vf.top_confidence > 0.99);
}

TEST_CASE("tau outside (0, 1] is rejected") {
    Model m = tiny_model(2, 2, 1);
    CHECK_THROWS_AS(Diagnoser(m, 0.0), Error);
    CHECK_THROWS_AS(Diagnoser(m, 1.5), Error);
}

TEST_CASE("replay equals manual vectorize-and-push") {
    PlantDescription plant = parse_plant(import_station_text());
    ChangeLog log = run_scenario(plant, 12000, {}, 19);
    Model m = tiny_model(static_cast<int>(plant.width()), 5, 2);

    auto verdicts = replay(log, m, 0.5);
    auto vectors = vectorize(log);
    REQUIRE(verdicts.size() == vectors.size());

    Diagnoser d(m, 0.5);
    double abs_time = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        abs_time += vectors[i].t_rel;
        Verdict v = d.push(vectors[i]);
        CHECK(verdicts[i].first == static_cast<std::int64_t>(abs_time));
        CHECK(verdicts[i].second.kind == v.kind);
        CHECK(verdicts[i].second.distribution == v.distribution);
    }
}

TEST_CASE("latency finds the first correct post-injection fault verdict") {
    std::vector<std::pair<std::int64_t, Verdict>> verdicts;
    Verdict warm;
    warm.kind = Verdict::Kind::Warmup;
    Verdict normal;
    normal.kind = Verdict::Kind::Normal;
    Verdict wrong;
    wrong.kind = Verdict::Kind::Fault;
    wrong.fault_class = 2;
    Verdict right;
    right.kind = Verdict::Kind::Fault;
    right.fault_class = 5;
    verdicts = {{100, warm}, {200, normal}, {5200, wrong}, {5400, right}, {5600, right}};

    auto lat = latency(verdicts, 5000, 5);
    REQUIRE(lat.has_value());
    CHECK(*lat == 400);
    CHECK_FALSE(latency(verdicts, 5000, 3).has_value());
    // pre-injection hits do not count
    CHECK_FALSE(latency({{100, right}}, 5000, 5).has_value());
}
