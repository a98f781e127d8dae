#include "deslab/acquisition.hpp"
#include "deslab/error.hpp"

#include <doctest.h>

using namespace deslab;

namespace {

ChangeLog sample_log() {
    // a: 0 ->(100) 1 ->(300) 0;  b: 1 throughout
    return record({"a", "b"}, 100,
                  {{0, {0, 1}}, {100, {1, 1}}, {200, {1, 1}}, {300, {0, 1}}});
}

} // namespace

TEST_CASE("builder emits the initial snapshot in full, then diffs only") {
    ChangeLog log = sample_log();
    REQUIRE(log.records.size() == 4);
    CHECK(log.records[0] == ChangeRecord{0, 0, false});
    CHECK(log.records[1] == ChangeRecord{1, 0, true});
    CHECK(log.records[2] == ChangeRecord{0, 100, true});
    CHECK(log.records[3] == ChangeRecord{0, 300, false});
    CHECK(log.find("b") == 1);
}

TEST_CASE("change-log CSV round-trips, including label and injection headers") {
    ChangeLog log = sample_log();
    log.label = 3;
    log.inject_ms = 150;
    ChangeLog back = read_changelog_csv(write_changelog_csv(log));
    CHECK(back == log);

    log.label = -1;
    log.inject_ms.reset();
    CHECK(read_changelog_csv(write_changelog_csv(log)) == log);

    CHECK_THROWS_AS(read_changelog_csv("no headers here\n"), Error);
}

TEST_CASE("symptom detection: missing successor within the timeout") {
    // rule: after a rises, b must fall within 150 ms
    ChangeLog log = record({"a", "b"}, 100,
                           {{0, {0, 1}},
                            {100, {1, 1}},   // a+ at 100, b falls at 200 -> ok
                            {200, {1, 0}},
                            {300, {0, 1}},
                            {400, {1, 1}},   // a+ at 400, b never falls -> symptom
                            {500, {1, 1}}});
    SymptomRule rule{0, true, 1, false, 150};
    auto symptoms = detect_symptoms(log, {rule});
    REQUIRE(symptoms.size() == 1);
    CHECK(symptoms[0].antecedent_ms == 400);
    CHECK(symptoms[0].deadline_ms == 550);
}

TEST_CASE("symptom matching consumes the earliest unmatched antecedent first") {
    // two a+ edges, one b+ answer: the first antecedent is matched, the
    // second raises the symptom
    ChangeLog log = record({"a", "b"}, 100,
                           {{0, {0, 0}},
                            {100, {1, 0}},
                            {200, {0, 0}},
                            {300, {1, 0}},
                            {400, {1, 1}}});
    SymptomRule rule{0, true, 1, true, 1000};
    auto symptoms = detect_symptoms(log, {rule});
    REQUIRE(symptoms.size() == 1);
    CHECK(symptoms[0].antecedent_ms == 300);
}

TEST_CASE("per-signal statistics") {
    ChangeLog log = sample_log(); // duration 300
    auto st = stats(log);
    REQUIRE(st.size() == 2);
    CHECK(st[0].change_count == 2);
    CHECK(st[0].duty_cycle == doctest::Approx(200.0 / 300.0)); // high in [100,300)
    REQUIRE(st[0].mean_interchange_ms.has_value());
    CHECK(*st[0].mean_interchange_ms == doctest::Approx(150.0));
    CHECK(st[1].change_count == 0);
    CHECK(st[1].duty_cycle == doctest::Approx(1.0));
}

TEST_CASE("symptom-rule file parsing") {
    ChangeLog log = sample_log();
    auto rules = parse_symptom_rules("expect a+ -> b- within 250\n", log);
    REQUIRE(rules.size() == 1);
    CHECK(rules[0].antecedent_signal == 0);
    CHECK(rules[0].antecedent_rising);
    CHECK(rules[0].expected_signal == 1);
    CHECK_FALSE(rules[0].expected_rising);
    CHECK(rules[0].timeout_ms == 250);
    CHECK_THROWS_AS(parse_symptom_rules("expect zz+ -> b- within 250\n", log), Error);
    CHECK_THROWS_AS(parse_symptom_rules("expect a -> b within 250\n", log), Error);
}
