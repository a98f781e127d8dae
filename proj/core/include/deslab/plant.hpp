#pragma once

#include "deslab/expr.hpp"
#include "deslab/faults.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace deslab {

struct ChangeLog; // acquisition.hpp

enum class SignalKind : std::uint8_t { Sensor, Actuator };

struct SignalDef {
    std::string name;
    SignalKind kind;
    bool initial = false;
};

/// Physical-process rule: when `guard` (over true values) becomes true,
/// schedule `effects` on sensors after `delay_ms` +- a seeded jitter draw.
struct ProcessRule {
    BoolExpr guard;
    std::int64_t delay_ms = 0;
    std::int64_t jitter_ms = 0;
    std::vector<std::pair<std::size_t, bool>> effects; // sensor index -> value
};

/// Control-program rule: when `guard` (over observed values) is true,
/// command `effects` on actuators. Rules run in order within one scan;
/// later rules see earlier commands of the same scan.
struct ControlRule {
    BoolExpr guard;
    std::vector<std::pair<std::size_t, bool>> effects; // actuator index -> value
};

struct PlantDescription {
    std::vector<SignalDef> signals; // declaration order fixes vector indices
    std::vector<ProcessRule> process;
    std::vector<ControlRule> program;
    std::int64_t scan_period_ms = 100;

    std::size_t width() const { return signals.size(); }
    std::optional<std::size_t> find(const std::string& name) const;
    std::size_t sensor_count() const;
    std::size_t actuator_count() const;
};

struct PendingEffect {
    std::int64_t fire_ms;
    std::uint64_t seq; // insertion order, tie-break for equal fire times
    std::vector<std::pair<std::size_t, bool>> effects;
};

struct PlantState {
    std::vector<std::uint8_t> true_values;
    std::vector<std::uint8_t> observed_values;
    std::vector<std::uint8_t> commanded; // PLC output memory, actuator slots only
    std::vector<std::uint8_t> guard_was_true; // per process rule, edge detection
    std::vector<PendingEffect> pending;
    std::int64_t clock_ms = 0;
    std::uint64_t next_seq = 0;
    std::mt19937_64 rng;
};

/// Parses the line-oriented plant-description format:
///   signal <name> sensor|actuator init 0|1
///   process when <expr> after <ms>[+-<jitter_ms>] set <name>=0|1[, ...]
///   control when <expr> set <name>=0|1[, ...]
///   scan <ms>
///   # comment
PlantDescription parse_plant(const std::string& text);

/// Initial state for a run; `seed` drives jitter draws.
PlantState initial_state(const PlantDescription& plant, std::uint64_t seed);

/// One PLC scan: (a) read inputs through the fault mask, (b) execute the
/// control program in rule order, (c) update outputs through the fault
/// mask; then the physical process advances by one scan period.
void scan_step(const PlantDescription& plant, PlantState& state, const ActiveFaultSet& faults);

/// Runs the plant for `horizon_ms`, activating each FaultSpec at its
/// injection time, and records observed-value changes. Deterministic under
/// (plant, horizon, faults, seed).
ChangeLog run_scenario(const PlantDescription& plant, std::int64_t horizon_ms,
                       const std::vector<FaultSpec>& faults, std::uint64_t seed);

/// Source text of the bundled import-station plant (core/data/import_station.plant).
const std::string& import_station_text();

} // namespace deslab
