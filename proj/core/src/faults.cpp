#include "deslab/faults.hpp"

#include "deslab/error.hpp"
#include "deslab/plant.hpp"

#include <algorithm>
#include <sstream>

namespace deslab {

const char* fault_kind_name(FaultKind k) {
    switch (k) {
    case FaultKind::StuckAt0: return "stuck0";
    case FaultKind::StuckAt1: return "stuck1";
    case FaultKind::Spurious0to1: return "sp01";
    case FaultKind::Spurious1to0: return "sp10";
    }
    return "?";
}

void ActiveFaultSet::activate(std::size_t signal, const FaultSpec& spec) {
    by_signal_[signal] = ActiveFault{spec.kind, spec.inject_ms, spec.pulse_ms};
}

const ActiveFault* ActiveFaultSet::find(std::size_t signal) const {
    auto it = by_signal_.find(signal);
    return it == by_signal_.end() ? nullptr : &it->second;
}

bool mask(bool true_value, const ActiveFault* fault, std::int64_t now) {
    if (!fault) return true_value;
    switch (fault->kind) {
    case FaultKind::StuckAt0: return false;
    case FaultKind::StuckAt1: return true;
    case FaultKind::Spurious0to1:
        return (now >= fault->inject_ms && now < fault->inject_ms + fault->pulse_ms) ? true
                                                                                     : true_value;
    case FaultKind::Spurious1to0:
        return (now >= fault->inject_ms && now < fault->inject_ms + fault->pulse_ms) ? false
                                                                                     : true_value;
    }
    return true_value;
}

LabelCatalog::LabelCatalog(std::vector<std::pair<std::string, FaultKind>> entries)
    : entries_(std::move(entries)) {
    if (entries_.size() != 6)
        throw Error("usage", "label catalog must hold exactly 6 (signal, kind) entries");
}

LabelCatalog LabelCatalog::import_station() {
    return LabelCatalog({
        {"k_entry", FaultKind::StuckAt0},
        {"k_entry", FaultKind::StuckAt1},
        {"k_end", FaultKind::StuckAt0},
        {"k_end", FaultKind::StuckAt1},
        {"m_conv", FaultKind::StuckAt0},
        {"m_conv", FaultKind::StuckAt1},
    });
}

std::optional<int> LabelCatalog::class_of(const std::string& signal, FaultKind kind) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].first == signal && entries_[i].second == kind)
            return static_cast<int>(i) + 1;
    return std::nullopt;
}

ClassLabel label_for(const std::vector<FaultSpec>& scenario_faults, const LabelCatalog& catalog) {
    if (scenario_faults.size() > 1)
        throw Error("usage", "multi-fault scenarios are not supported (single-fault diagnosis)");
    if (scenario_faults.empty()) return ClassLabel{0};
    const FaultSpec& f = scenario_faults.front();
    if (auto cls = catalog.class_of(f.target, f.kind)) return ClassLabel{*cls};
    return ClassLabel{7};
}

std::vector<Scenario> scenario_suite(const LabelCatalog& catalog, const PlantDescription& plant,
                                     int per_class, std::int64_t horizon_ms, std::uint64_t seed) {
    if (catalog.empty()) throw Error("usage", "label catalog is empty");
    if (per_class < 1) throw Error("usage", "per_class must be >= 1");

    std::mt19937_64 rng(seed);
    auto draw_inject = [&]() {
        // within [horizon/4, 3*horizon/4]: spread over the run, with enough
        // pre-fault data to label and enough post-fault data to learn from
        std::int64_t lo = horizon_ms / 4, hi = 3 * horizon_ms / 4;
        return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };

    // non-catalog (signal, kind) pool for C7
    std::vector<std::pair<std::string, FaultKind>> other;
    for (const SignalDef& s : plant.signals)
        for (FaultKind k : {FaultKind::StuckAt0, FaultKind::StuckAt1, FaultKind::Spurious0to1,
                            FaultKind::Spurious1to0})
            if (!catalog.class_of(s.name, k)) other.emplace_back(s.name, k);

    std::vector<Scenario> out;
    for (int rep = 0; rep < per_class; ++rep) {
        out.push_back({std::nullopt, ClassLabel{0}});
        for (const auto& [signal, kind] : catalog.entries()) {
            FaultSpec spec{signal, kind, draw_inject(), 0};
            out.push_back({spec, label_for({spec}, catalog)});
        }
        auto [signal, kind] = other[rng() % other.size()];
        FaultSpec spec{signal, kind, draw_inject(), 0};
        if (kind == FaultKind::Spurious0to1 || kind == FaultKind::Spurious1to0)
            spec.pulse_ms = 2 * plant.scan_period_ms;
        out.push_back({spec, ClassLabel{7}});
    }
    return out;
}

std::vector<std::vector<FaultSpec>> parse_scenario_file(const std::string& text) {
    std::vector<std::vector<FaultSpec>> out;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "none") {
            out.push_back({});
            continue;
        }
        std::string kind_s, at_kw, ms_s;
        if (!(ls >> kind_s >> at_kw >> ms_s) || at_kw != "at")
            throw Error("parse", "scenario line " + std::to_string(line_no) +
                                     ": expected '<signal> <kind> at <ms> [for <ms>]'");
        FaultSpec spec;
        spec.target = first;
        if (kind_s == "stuck0") spec.kind = FaultKind::StuckAt0;
        else if (kind_s == "stuck1") spec.kind = FaultKind::StuckAt1;
        else if (kind_s == "sp01") spec.kind = FaultKind::Spurious0to1;
        else if (kind_s == "sp10") spec.kind = FaultKind::Spurious1to0;
        else
            throw Error("parse", "scenario line " + std::to_string(line_no) +
                                     ": unknown fault kind '" + kind_s + "'");
        spec.inject_ms = std::stoll(ms_s);
        std::string for_kw, dur_s;
        if (ls >> for_kw >> dur_s) {
            if (for_kw != "for")
                throw Error("parse",
                            "scenario line " + std::to_string(line_no) + ": expected 'for <ms>'");
            spec.pulse_ms = std::stoll(dur_s);
        }
        bool spurious =
            spec.kind == FaultKind::Spurious0to1 || spec.kind == FaultKind::Spurious1to0;
        if (spurious && spec.pulse_ms <= 0)
            throw Error("parse", "scenario line " + std::to_string(line_no) +
                                     ": spurious faults need a positive 'for <ms>' duration");
        if (!spurious && spec.pulse_ms != 0)
            throw Error("parse", "scenario line " + std::to_string(line_no) +
                                     ": stuck faults take no pulse duration");
        out.push_back({spec});
    }
    return out;
}

std::string format_scenario(const std::vector<FaultSpec>& faults) {
    if (faults.empty()) return "none";
    std::ostringstream out;
    for (std::size_t i = 0; i < faults.size(); ++i) {
        const FaultSpec& f = faults[i];
        if (i) out << "; ";
        out << f.target << ' ' << fault_kind_name(f.kind) << " at " << f.inject_ms;
        if (f.pulse_ms > 0) out << " for " << f.pulse_ms;
    }
    return out.str();
}

} // namespace deslab
