#include "deslab/dataset.hpp"
#include "deslab/error.hpp"
#include "deslab/plant.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

using namespace deslab;

namespace {

// random vector sequence for window property tests
std::vector<TimedIOVector> random_vectors(std::mt19937_64& rng, int count, int width) {
    std::vector<TimedIOVector> out;
    for (int i = 0; i < count; ++i) {
        TimedIOVector v;
        v.t_rel = static_cast<double>(rng() % 1000);
        for (int j = 0; j < width; ++j) v.values.push_back(rng() & 1);
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace

TEST_CASE("vectorize: one vector per distinct change time, last-value-hold") {
    ChangeLog log = record({"a", "b"}, 100,
                           {{0, {0, 1}}, {100, {1, 1}}, {200, {1, 1}}, {300, {1, 0}}});
    auto vecs = vectorize(log);
    REQUIRE(vecs.size() == 3); // t = 0, 100, 300 (no change at 200)
    CHECK(vecs[0].t_rel == 0.0);
    CHECK(vecs[0].values == std::vector<std::uint8_t>{0, 1});
    CHECK(vecs[1].t_rel == 100.0);
    CHECK(vecs[1].values == std::vector<std::uint8_t>{1, 1});
    CHECK(vecs[2].t_rel == 200.0); // 300 - 100
    CHECK(vecs[2].values == std::vector<std::uint8_t>{1, 0});
}

TEST_CASE("vectorize reconstruction: cumulative t_rel reproduces the change times") {
    PlantDescription plant = parse_plant(import_station_text());
    ChangeLog log = run_scenario(plant, 15000, {}, 11);
    auto vecs = vectorize(log);

    std::set<std::int64_t> distinct;
    for (const ChangeRecord& r : log.records) distinct.insert(r.time_ms);
    REQUIRE(vecs.size() == distinct.size());

    double cum = 0.0;
    auto it = distinct.begin();
    for (const TimedIOVector& v : vecs) {
        cum += v.t_rel;
        CHECK(cum == static_cast<double>(*it++));
    }
}

TEST_CASE("window count formula matches brute-force slice enumeration") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng() % 20);
        int len = n + static_cast<int>(rng() % 60);
        int stride = 1 + static_cast<int>(rng() % 5);
        auto vecs = random_vectors(rng, len, 3);

        auto ws = windows(vecs, n, stride, ClassLabel{2});
        std::size_t brute = 0;
        for (int start = 0; start + n <= len; start += stride) ++brute;
        CHECK(ws.size() == brute);
        CHECK(ws.size() == static_cast<std::size_t>((len - n) / stride + 1));

        // window-slice property: each sample is the contiguous slice
        for (std::size_t w = 0; w < ws.size(); ++w) {
            CHECK(ws[w].label.index == 2);
            REQUIRE(ws[w].window.size() == static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j)
                CHECK(ws[w].window[static_cast<std::size_t>(j)] ==
                      vecs[w * static_cast<std::size_t>(stride) + static_cast<std::size_t>(j)]);
        }
    }
}

TEST_CASE("windows rejects runs shorter than the window length") {
    std::mt19937_64 rng(1);
    auto vecs = random_vectors(rng, 4, 2);
    CHECK_THROWS_AS(windows(vecs, 5, 1, ClassLabel{0}), Error);
}

TEST_CASE("fault labeling splits windows at the injection time") {
    std::mt19937_64 rng(2);
    auto vecs = random_vectors(rng, 10, 2);
    for (auto& v : vecs) v.t_rel = 100.0; // change times 100, 200, ..., 1000
    vecs[0].t_rel = 100.0;

    LabelCatalog cat = LabelCatalog::import_station();
    FaultSpec fault{"k_entry", FaultKind::StuckAt0, 450, 0}; // class C1

    auto labeled = label_windows_for_fault(vecs, 3, 1, fault, cat, true);
    REQUIRE(labeled.size() == 8);
    // window i covers change times (i+1)*100 .. (i+3)*100; it is pre-fault
    // while its end time < 450, i.e. windows ending at 300 and 400
    CHECK(labeled[0].label.index == 0);
    CHECK(labeled[1].label.index == 0);
    for (std::size_t i = 2; i < labeled.size(); ++i) CHECK(labeled[i].label.index == 1);

    auto dropped = label_windows_for_fault(vecs, 3, 1, fault, cat, false);
    CHECK(dropped.size() == 6);
    for (const auto& w : dropped) CHECK(w.label.index == 1);

    // degenerate: injection after the run -> everything is pre-fault
    FaultSpec late{"k_entry", FaultKind::StuckAt0, 99999, 0};
    for (const auto& w : label_windows_for_fault(vecs, 3, 1, late, cat, true))
        CHECK(w.label.index == 0);
}

TEST_CASE("time scaling parse/format/apply") {
    CHECK(parse_time_scaling("none") == TimeScaling::none());
    CHECK(parse_time_scaling("div1000") == TimeScaling::divide(1000.0));
    CHECK(parse_time_scaling("log1p") == TimeScaling::log1p());
    CHECK(format_time_scaling(TimeScaling::divide(250.0)) == "div250");
    CHECK_THROWS_AS(parse_time_scaling("squash"), Error);

    CHECK(TimeScaling::none().apply(1234.0) == 1234.0);
    CHECK(TimeScaling::divide(1000.0).apply(1234.0) == doctest::Approx(1.234));
    CHECK(TimeScaling::log1p().apply(0.0) == 0.0);

    auto vecs = std::vector<TimedIOVector>{{1000.0, {1, 0}}, {500.0, {0, 1}}};
    auto scaled = normalize_time(vecs, TimeScaling::divide(1000.0));
    CHECK(scaled[0].t_rel == doctest::Approx(1.0));
    CHECK(scaled[1].t_rel == doctest::Approx(0.5));
    CHECK(scaled[0].values == vecs[0].values); // booleans untouched
}

TEST_CASE("stratified k-fold: disjoint, covering, per-class balanced within 1") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        Dataset ds;
        ds.window_length = 1;
        ds.width = 1;
        int count = 20 + static_cast<int>(rng() % 200);
        for (int i = 0; i < count; ++i) {
            WindowSample s;
            s.label.index = static_cast<int>(rng() % 8);
            s.window.push_back({1.0, {0}});
            ds.samples.push_back(std::move(s));
            ds.run_ids.push_back(0);
        }
        int k = 2 + static_cast<int>(rng() % 4);
        FoldSplit split = kfold(ds, k, trial);

        REQUIRE(split.assignment.size() == ds.samples.size());
        // covering + disjoint by construction: every sample has exactly one
        // fold index in [0, k)
        for (int f : split.assignment) {
            CHECK(f >= 0);
            CHECK(f < k);
        }
        // per-class balance
        std::map<int, std::vector<int>> per_class_counts;
        for (std::size_t i = 0; i < ds.samples.size(); ++i) {
            auto& counts = per_class_counts[ds.samples[i].label.index];
            counts.resize(static_cast<std::size_t>(k), 0);
            counts[static_cast<std::size_t>(split.assignment[i])]++;
        }
        for (auto& [cls, counts] : per_class_counts) {
            int lo = *std::min_element(counts.begin(), counts.end());
            int hi = *std::max_element(counts.begin(), counts.end());
            CHECK(hi - lo <= 1);
        }

        // deterministic under seed
        CHECK(kfold(ds, k, trial).assignment == split.assignment);
    }
}

TEST_CASE("dataset file round-trips exactly") {
    std::mt19937_64 rng(31);
    Dataset ds;
    ds.window_length = 4;
    ds.width = 3;
    ds.scaling = TimeScaling::divide(1000.0);
    for (int i = 0; i < 12; ++i) {
        WindowSample s;
        s.label.index = static_cast<int>(rng() % 8);
        for (int t = 0; t < 4; ++t) {
            TimedIOVector v;
            v.t_rel = static_cast<double>(rng() % 100000) / 997.0;
            for (int j = 0; j < 3; ++j) v.values.push_back(rng() & 1);
            s.window.push_back(std::move(v));
        }
        ds.samples.push_back(std::move(s));
        ds.run_ids.push_back(i / 3);
    }
    Dataset back = read_dataset(write_dataset(ds));
    CHECK(back.window_length == ds.window_length);
    CHECK(back.width == ds.width);
    CHECK(back.scaling == ds.scaling);
    REQUIRE(back.samples.size() == ds.samples.size());
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        CHECK(back.samples[i].label == ds.samples[i].label);
        CHECK(back.samples[i].window == ds.samples[i].window); // %.17g is exact
    }
}

TEST_CASE("append_log_to_dataset labels by log headers and applies scaling once") {
    PlantDescription plant = parse_plant(import_station_text());
    LabelCatalog cat = LabelCatalog::import_station();

    ChangeLog normal = run_scenario(plant, 20000, {}, 3);
    normal.label = 0;

    FaultSpec fault{"k_entry", FaultKind::StuckAt1, 12000, 0};
    ChangeLog faulty = run_scenario(plant, 20000, {fault}, 4);
    faulty.label = label_for({fault}, cat).index;
    faulty.inject_ms = fault.inject_ms;

    Dataset ds;
    append_log_to_dataset(ds, normal, 10, 1, TimeScaling::divide(1000.0), cat, 0);
    append_log_to_dataset(ds, faulty, 10, 1, TimeScaling::divide(1000.0), cat, 1);
    CHECK(ds.width == 33);
    CHECK(ds.window_length == 10);
    CHECK(ds.scaling == TimeScaling::divide(1000.0));
    CHECK(ds.samples.size() > 0);
    bool saw_pre = false, saw_post = false;
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        if (ds.run_ids[i] == 1) {
            (ds.samples[i].label.index == 0 ? saw_pre : saw_post) = true;
            if (ds.samples[i].label.index != 0) CHECK(ds.samples[i].label.index == 2);
        } else {
            CHECK(ds.samples[i].label.index == 0);
        }
        for (const TimedIOVector& v : ds.samples[i].window) CHECK(v.t_rel < 100.0); // scaled
    }
    CHECK(saw_pre);
    CHECK(saw_post);

    // mixing scalings in one dataset is rejected
    CHECK_THROWS_AS(append_log_to_dataset(ds, normal, 10, 1, TimeScaling::none(), cat, 2), Error);
}
