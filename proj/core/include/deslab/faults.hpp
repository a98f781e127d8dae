#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace deslab {

struct PlantDescription; // plant.hpp

enum class FaultKind : std::uint8_t {
    StuckAt0,
    StuckAt1,
    Spurious0to1, // transient unexpected 0 -> 1 pulse
    Spurious1to0, // transient unexpected 1 -> 0 pulse
};

const char* fault_kind_name(FaultKind k);

/// One injected fault: a kind bound to a signal and an injection time.
/// Spurious kinds additionally carry a positive pulse duration.
struct FaultSpec {
    std::string target;
    FaultKind kind = FaultKind::StuckAt0;
    std::int64_t inject_ms = 0;
    std::int64_t pulse_ms = 0; // > 0 for spurious kinds, 0 for stuck kinds

    bool operator==(const FaultSpec&) const = default;
};

struct ActiveFault {
    FaultKind kind;
    std::int64_t inject_ms;
    std::int64_t pulse_ms;
};

/// At most one active fault per signal index.
class ActiveFaultSet {
public:
    void activate(std::size_t signal, const FaultSpec& spec);
    const ActiveFault* find(std::size_t signal) const;
    bool empty() const { return by_signal_.empty(); }

private:
    std::unordered_map<std::size_t, ActiveFault> by_signal_;
};

/// Observed value of a signal under an (optional) active fault at time `now`.
bool mask(bool true_value, const ActiveFault* fault, std::int64_t now);

struct ClassLabel {
    int index = 0; // 0 = normal, 1..7 = fault classes

    bool operator==(const ClassLabel&) const = default;
};

inline constexpr int kNumClasses = 8;

/// Binds six (signal, stuck-at kind) pairs to classes C1..C6; any other
/// single fault maps to C7, no fault to C0.
class LabelCatalog {
public:
    LabelCatalog() = default;
    explicit LabelCatalog(std::vector<std::pair<std::string, FaultKind>> entries);

    // Catalog for the bundled import station: entry sensor stuck0/stuck1,
    // end sensor stuck0/stuck1, conveyor motor stuck0/stuck1 -> C1..C6.
    static LabelCatalog import_station();

    const std::vector<std::pair<std::string, FaultKind>>& entries() const { return entries_; }
    std::optional<int> class_of(const std::string& signal, FaultKind kind) const;
    bool empty() const { return entries_.empty(); }

private:
    std::vector<std::pair<std::string, FaultKind>> entries_;
};

/// Class of a scenario holding zero or one fault. Throws on multi-fault
/// scenarios.
ClassLabel label_for(const std::vector<FaultSpec>& scenario_faults, const LabelCatalog& catalog);

struct Scenario {
    std::optional<FaultSpec> fault; // nullopt = normal run
    ClassLabel label;
};

/// Generates per_class scenarios for each of C0..C7. C7 scenarios draw
/// seeded random non-catalog faults from the plant's signal set; injection
/// times are sampled within [horizon/4, 3*horizon/4].
std::vector<Scenario> scenario_suite(const LabelCatalog& catalog, const PlantDescription& plant,
                                     int per_class, std::int64_t horizon_ms, std::uint64_t seed);

/// Scenario file: one line per scenario,
///   none
///   <signal> <stuck0|stuck1|sp01|sp10> at <ms> [for <ms>]
std::vector<std::vector<FaultSpec>> parse_scenario_file(const std::string& text);
std::string format_scenario(const std::vector<FaultSpec>& faults);

} // namespace deslab
