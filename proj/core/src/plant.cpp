#include "deslab/plant.hpp"

#include "deslab/acquisition.hpp"
#include "deslab/error.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

namespace deslab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw Error("parse", "line " + std::to_string(line) + ": " + msg);
}

std::int64_t parse_ms(const std::string& s, int line, const char* what) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size() || v < 0) fail(line, std::string("invalid ") + what + " '" + s + "'");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail(line, std::string("invalid ") + what + " '" + s + "'");
    }
}

// `set <name>=0|1[, ...]` tail of a rule line.
std::vector<std::pair<std::size_t, bool>>
parse_effects(const std::string& text, int line,
              const std::unordered_map<std::string, std::size_t>& index) {
    std::vector<std::pair<std::size_t, bool>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        std::size_t eq = item.find('=');
        if (eq == std::string::npos) fail(line, "expected <name>=0|1 in effect list");
        std::string name = trim(item.substr(0, eq));
        std::string val = trim(item.substr(eq + 1));
        auto it = index.find(name);
        if (it == index.end()) fail(line, "rule references undeclared signal '" + name + "'");
        if (val != "0" && val != "1") fail(line, "effect value must be 0 or 1");
        out.emplace_back(it->second, val == "1");
    }
    if (out.empty()) fail(line, "empty effect list");
    return out;
}

} // namespace

std::optional<std::size_t> PlantDescription::find(const std::string& name) const {
    for (std::size_t i = 0; i < signals.size(); ++i)
        if (signals[i].name == name) return i;
    return std::nullopt;
}

std::size_t PlantDescription::sensor_count() const {
    return static_cast<std::size_t>(std::count_if(signals.begin(), signals.end(), [](const SignalDef& s) {
        return s.kind == SignalKind::Sensor;
    }));
}

std::size_t PlantDescription::actuator_count() const {
    return signals.size() - sensor_count();
}

PlantDescription parse_plant(const std::string& text) {
    PlantDescription plant;
    std::unordered_map<std::string, std::size_t> index;

    auto lookup = [&](const std::string& name) -> std::size_t {
        auto it = index.find(name);
        if (it == index.end())
            throw Error("parse", "rule references undeclared signal '" + name + "'");
        return it->second;
    };

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    bool scan_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;

        std::istringstream ls(line);
        std::string keyword;
        ls >> keyword;

        if (keyword == "signal") {
            std::string name, kind, init_kw, init_val;
            ls >> name >> kind >> init_kw >> init_val;
            if (name.empty() || (kind != "sensor" && kind != "actuator") || init_kw != "init" ||
                (init_val != "0" && init_val != "1"))
                fail(line_no, "expected: signal <name> sensor|actuator init 0|1");
            if (index.count(name)) fail(line_no, "duplicate signal name '" + name + "'");
            index[name] = plant.signals.size();
            plant.signals.push_back(
                {name, kind == "sensor" ? SignalKind::Sensor : SignalKind::Actuator,
                 init_val == "1"});
        } else if (keyword == "scan") {
            std::string ms;
            ls >> ms;
            plant.scan_period_ms = parse_ms(ms, line_no, "scan period");
            if (plant.scan_period_ms <= 0) fail(line_no, "scan period must be > 0");
            scan_seen = true;
        } else if (keyword == "process" || keyword == "control") {
            std::string when;
            ls >> when;
            if (when != "when") fail(line_no, "expected 'when' after '" + keyword + "'");
            std::string rest;
            std::getline(ls, rest);

            std::string expr_text, tail;
            if (keyword == "process") {
                std::size_t after = rest.find(" after ");
                if (after == std::string::npos) fail(line_no, "process rule missing 'after <ms>'");
                expr_text = trim(rest.substr(0, after));
                tail = trim(rest.substr(after + 7));
                std::size_t set_pos = tail.find(" set ");
                if (set_pos == std::string::npos) fail(line_no, "process rule missing 'set'");
                std::string delay_text = trim(tail.substr(0, set_pos));
                std::string effects_text = trim(tail.substr(set_pos + 5));

                ProcessRule rule;
                std::size_t pm = delay_text.find("+-");
                if (pm == std::string::npos) pm = delay_text.find("\xc2\xb1"); // UTF-8 +-
                if (pm != std::string::npos) {
                    rule.delay_ms = parse_ms(trim(delay_text.substr(0, pm)), line_no, "delay");
                    rule.jitter_ms = parse_ms(trim(delay_text.substr(pm + 2)), line_no, "jitter");
                } else {
                    rule.delay_ms = parse_ms(delay_text, line_no, "delay");
                }
                rule.guard = BoolExpr::parse(expr_text, lookup, line_no);
                rule.effects = parse_effects(effects_text, line_no, index);
                for (auto& [sig, _] : rule.effects)
                    if (plant.signals[sig].kind != SignalKind::Sensor)
                        fail(line_no, "process rule drives actuator '" + plant.signals[sig].name +
                                          "' (process effects target sensors)");
                plant.process.push_back(std::move(rule));
            } else {
                std::size_t set_pos = rest.find(" set ");
                if (set_pos == std::string::npos) fail(line_no, "control rule missing 'set'");
                expr_text = trim(rest.substr(0, set_pos));
                std::string effects_text = trim(rest.substr(set_pos + 5));

                ControlRule rule;
                rule.guard = BoolExpr::parse(expr_text, lookup, line_no);
                rule.effects = parse_effects(effects_text, line_no, index);
                for (auto& [sig, _] : rule.effects)
                    if (plant.signals[sig].kind != SignalKind::Actuator)
                        fail(line_no, "control rule drives sensor '" + plant.signals[sig].name +
                                          "' (control effects target actuators)");
                plant.program.push_back(std::move(rule));
            }
        } else {
            fail(line_no, "unknown keyword '" + keyword + "'");
        }
    }
    if (!scan_seen) plant.scan_period_ms = 100;
    if (plant.signals.empty()) throw Error("parse", "plant declares no signals");
    return plant;
}

PlantState initial_state(const PlantDescription& plant, std::uint64_t seed) {
    PlantState st;
    st.true_values.resize(plant.width());
    st.observed_values.resize(plant.width());
    st.commanded.resize(plant.width());
    for (std::size_t i = 0; i < plant.width(); ++i) {
        st.true_values[i] = plant.signals[i].initial ? 1 : 0;
        st.observed_values[i] = st.true_values[i];
        st.commanded[i] = st.true_values[i];
    }
    st.guard_was_true.assign(plant.process.size(), 0);
    st.rng.seed(seed);
    return st;
}

namespace {

const ActiveFault* fault_for(const ActiveFaultSet& faults, std::size_t signal) {
    return faults.find(signal);
}

std::int64_t draw_jitter(std::mt19937_64& rng, std::int64_t jitter_ms) {
    if (jitter_ms == 0) return 0;
    // uniform in [-jitter, +jitter]
    std::uint64_t span = static_cast<std::uint64_t>(2 * jitter_ms + 1);
    return static_cast<std::int64_t>(rng() % span) - jitter_ms;
}

} // namespace

void scan_step(const PlantDescription& plant, PlantState& state, const ActiveFaultSet& faults) {
    const std::int64_t now = state.clock_ms;

    // (a) read inputs: observed sensors through the fault mask
    for (std::size_t i = 0; i < plant.width(); ++i)
        if (plant.signals[i].kind == SignalKind::Sensor)
            state.observed_values[i] =
                mask(state.true_values[i] != 0, fault_for(faults, i), now) ? 1 : 0;

    // (b) execute the program; guards see phase-(a) sensor readings and the
    // PLC's own output memory, updated rule by rule
    std::vector<std::uint8_t> plc_view = state.observed_values;
    for (std::size_t i = 0; i < plant.width(); ++i)
        if (plant.signals[i].kind == SignalKind::Actuator) plc_view[i] = state.commanded[i];
    for (const ControlRule& rule : plant.program) {
        if (rule.guard.eval(plc_view)) {
            for (auto& [sig, val] : rule.effects) {
                state.commanded[sig] = val ? 1 : 0;
                plc_view[sig] = state.commanded[sig];
            }
        }
    }

    // (c) update outputs: a faulty actuator ignores the command
    for (std::size_t i = 0; i < plant.width(); ++i)
        if (plant.signals[i].kind == SignalKind::Actuator) {
            state.true_values[i] =
                mask(state.commanded[i] != 0, fault_for(faults, i), now) ? 1 : 0;
            state.observed_values[i] = state.true_values[i];
        }

    // physical process advances one scan period
    state.clock_ms += plant.scan_period_ms;

    std::vector<PendingEffect> still_pending;
    still_pending.reserve(state.pending.size());
    std::vector<const PendingEffect*> due;
    for (const PendingEffect& p : state.pending)
        (p.fire_ms <= state.clock_ms ? due.push_back(&p) : still_pending.push_back(p));
    std::sort(due.begin(), due.end(), [](const PendingEffect* a, const PendingEffect* b) {
        return std::tie(a->fire_ms, a->seq) < std::tie(b->fire_ms, b->seq);
    });
    for (const PendingEffect* p : due)
        for (auto& [sig, val] : p->effects) state.true_values[sig] = val ? 1 : 0;
    state.pending = std::move(still_pending);

    // newly enabled process rules enqueue their effects
    for (std::size_t r = 0; r < plant.process.size(); ++r) {
        const ProcessRule& rule = plant.process[r];
        bool enabled = rule.guard.eval(state.true_values);
        if (enabled && !state.guard_was_true[r]) {
            std::int64_t delay = rule.delay_ms + draw_jitter(state.rng, rule.jitter_ms);
            if (delay < 0) delay = 0;
            state.pending.push_back({state.clock_ms + delay, state.next_seq++, rule.effects});
        }
        state.guard_was_true[r] = enabled ? 1 : 0;
    }
}

ChangeLog run_scenario(const PlantDescription& plant, std::int64_t horizon_ms,
                       const std::vector<FaultSpec>& faults, std::uint64_t seed) {
    if (horizon_ms < plant.scan_period_ms)
        throw Error("usage", "horizon shorter than one scan period");

    struct Timed {
        std::size_t signal;
        FaultSpec spec;
    };
    std::vector<Timed> to_inject;
    for (const FaultSpec& f : faults) {
        auto idx = plant.find(f.target);
        if (!idx) throw Error("usage", "fault targets undeclared signal '" + f.target + "'");
        to_inject.push_back({*idx, f});
    }
    std::sort(to_inject.begin(), to_inject.end(),
              [](const Timed& a, const Timed& b) { return a.spec.inject_ms < b.spec.inject_ms; });

    std::vector<std::string> names;
    names.reserve(plant.width());
    for (const SignalDef& s : plant.signals) names.push_back(s.name);

    PlantState state = initial_state(plant, seed);
    ActiveFaultSet active;
    std::size_t next_fault = 0;

    ChangeLogBuilder builder(names, plant.scan_period_ms);
    builder.push(0, state.observed_values);
    while (state.clock_ms + plant.scan_period_ms <= horizon_ms) {
        while (next_fault < to_inject.size() &&
               to_inject[next_fault].spec.inject_ms <= state.clock_ms) {
            active.activate(to_inject[next_fault].signal, to_inject[next_fault].spec);
            ++next_fault;
        }
        scan_step(plant, state, active);
        builder.push(state.clock_ms, state.observed_values);
    }
    return builder.finish();
}

} // namespace deslab
