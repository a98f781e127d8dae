#include "deslab/error.hpp"
#include "deslab/faults.hpp"
#include "deslab/plant.hpp"

#include <doctest.h>

#include <map>
#include <random>

using namespace deslab;

TEST_CASE("mask semantics per fault kind, fuzzed over true-value sequences") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        ActiveFault stuck0{FaultKind::StuckAt0, 100, 0};
        ActiveFault stuck1{FaultKind::StuckAt1, 100, 0};
        ActiveFault sp01{FaultKind::Spurious0to1, 100, 40};
        ActiveFault sp10{FaultKind::Spurious1to0, 100, 40};
        for (std::int64_t now = 0; now <= 300; now += 10) {
            bool v = (rng() & 1) != 0;
            CHECK(mask(v, nullptr, now) == v);
            CHECK(mask(v, &stuck0, now) == false);
            CHECK(mask(v, &stuck1, now) == true);
            bool in_pulse = now >= 100 && now < 140;
            CHECK(mask(v, &sp01, now) == (in_pulse ? true : v));
            CHECK(mask(v, &sp10, now) == (in_pulse ? false : v));
        }
    }
}

TEST_CASE("active fault set holds at most one fault per signal") {
    ActiveFaultSet set;
    CHECK(set.empty());
    set.activate(3, {"x", FaultKind::StuckAt0, 50, 0});
    set.activate(3, {"x", FaultKind::StuckAt1, 60, 0});
    REQUIRE(set.find(3) != nullptr);
    CHECK(set.find(3)->kind == FaultKind::StuckAt1); // later activation wins
    CHECK(set.find(4) == nullptr);
}

TEST_CASE("label_for maps scenarios onto the eight classes") {
    LabelCatalog cat = LabelCatalog::import_station();
    REQUIRE(cat.entries().size() == 6);

    CHECK(label_for({}, cat).index == 0);
    for (std::size_t i = 0; i < cat.entries().size(); ++i) {
        const auto& [sig, kind] = cat.entries()[i];
        FaultSpec f{sig, kind, 1000, 0};
        CHECK(label_for({f}, cat).index == static_cast<int>(i) + 1);
    }
    // non-catalog faults land in the residual class
    CHECK(label_for({{"s05", FaultKind::StuckAt0, 1000, 0}}, cat).index == 7);
    CHECK(label_for({{"k_entry", FaultKind::Spurious0to1, 1000, 200}}, cat).index == 7);
    // multi-fault scenarios are out of scope
    FaultSpec a{"k_entry", FaultKind::StuckAt0, 100, 0};
    FaultSpec b{"k_end", FaultKind::StuckAt0, 200, 0};
    CHECK_THROWS_AS(label_for({a, b}, cat), Error);
}

TEST_CASE("scenario_suite covers every class uniformly and avoids the catalog for C7") {
    LabelCatalog cat = LabelCatalog::import_station();
    PlantDescription plant = parse_plant(import_station_text());

    auto one = scenario_suite(cat, plant, 1, 20000, 5);
    CHECK(one.size() == 8);

    auto many = scenario_suite(cat, plant, 10, 20000, 5);
    REQUIRE(many.size() == 80);
    std::map<int, int> hist;
    for (const Scenario& sc : many) {
        hist[sc.label.index]++;
        if (sc.fault) {
            CHECK(sc.fault->inject_ms >= 5000);
            CHECK(sc.fault->inject_ms <= 15000);
            CHECK(label_for({*sc.fault}, cat).index == sc.label.index);
            if (sc.label.index == 7)
                CHECK_FALSE(cat.class_of(sc.fault->target, sc.fault->kind).has_value());
        } else {
            CHECK(sc.label.index == 0);
        }
    }
    for (int c = 0; c < kNumClasses; ++c) CHECK(hist[c] == 10);

    // deterministic under seed
    auto again = scenario_suite(cat, plant, 10, 20000, 5);
    REQUIRE(again.size() == many.size());
    for (std::size_t i = 0; i < many.size(); ++i) {
        CHECK(again[i].fault == many[i].fault);
        CHECK(again[i].label == many[i].label);
    }

    CHECK_THROWS_AS(scenario_suite(LabelCatalog{}, plant, 1, 20000, 5), Error);
}

TEST_CASE("scenario file format round-trips") {
    std::string text = "none\n"
                       "k_entry stuck0 at 5000\n"
                       "m_conv stuck1 at 6000\n"
                       "s03 sp01 at 7000 for 250\n";
    auto scenarios = parse_scenario_file(text);
    REQUIRE(scenarios.size() == 4);
    CHECK(scenarios[0].empty());
    CHECK(scenarios[1][0] == FaultSpec{"k_entry", FaultKind::StuckAt0, 5000, 0});
    CHECK(scenarios[3][0] == FaultSpec{"s03", FaultKind::Spurious0to1, 7000, 250});

    std::string rebuilt;
    for (const auto& sc : scenarios) rebuilt += format_scenario(sc) + "\n";
    CHECK(rebuilt == text);

    CHECK_THROWS_AS(parse_scenario_file("k_entry wobbly at 10\n"), Error);
    CHECK_THROWS_AS(parse_scenario_file("k_entry sp01 at 10\n"), Error); // missing pulse
}
