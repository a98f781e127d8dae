#include "deslab/acquisition.hpp"

#include "deslab/error.hpp"
#include "deslab/manifest.hpp"

#include <algorithm>
#include <sstream>

namespace deslab {

std::optional<std::size_t> ChangeLog::find(const std::string& name) const {
    for (std::size_t i = 0; i < signal_names.size(); ++i)
        if (signal_names[i] == name) return i;
    return std::nullopt;
}

ChangeLogBuilder::ChangeLogBuilder(std::vector<std::string> signal_names, std::int64_t scan_ms) {
    log_.signal_names = std::move(signal_names);
    log_.scan_ms = scan_ms;
}

void ChangeLogBuilder::push(std::int64_t time_ms, const std::vector<std::uint8_t>& snapshot) {
    if (snapshot.size() != log_.signal_names.size())
        throw Error("usage", "snapshot width " + std::to_string(snapshot.size()) +
                                 " does not match header width " +
                                 std::to_string(log_.signal_names.size()));
    if (first_) {
        for (std::size_t i = 0; i < snapshot.size(); ++i)
            log_.records.push_back({i, time_ms, snapshot[i] != 0});
        last_ = snapshot;
        first_ = false;
        return;
    }
    for (std::size_t i = 0; i < snapshot.size(); ++i)
        if (snapshot[i] != last_[i]) log_.records.push_back({i, time_ms, snapshot[i] != 0});
    last_ = snapshot;
}

ChangeLog ChangeLogBuilder::finish() { return std::move(log_); }

ChangeLog record(const std::vector<std::string>& signal_names, std::int64_t scan_ms,
                 const std::vector<std::pair<std::int64_t, std::vector<std::uint8_t>>>& snapshots) {
    ChangeLogBuilder builder(signal_names, scan_ms);
    for (const auto& [t, snap] : snapshots) builder.push(t, snap);
    return builder.finish();
}

namespace {

struct Edge {
    std::int64_t time_ms;
    bool rising;
};

std::vector<Edge> edges_of(const ChangeLog& log, std::size_t signal) {
    std::vector<Edge> out;
    std::optional<bool> prev;
    for (const ChangeRecord& r : log.records) {
        if (r.signal != signal) continue;
        if (prev && *prev != r.value) out.push_back({r.time_ms, r.value});
        prev = r.value;
    }
    return out;
}

} // namespace

std::vector<Symptom> detect_symptoms(const ChangeLog& log, const std::vector<SymptomRule>& rules) {
    std::vector<Symptom> out;
    for (const SymptomRule& rule : rules) {
        if (rule.antecedent_signal >= log.signal_names.size() ||
            rule.expected_signal >= log.signal_names.size())
            throw Error("usage", "symptom rule references undeclared signal");
        std::vector<Edge> ants = edges_of(log, rule.antecedent_signal);
        std::vector<Edge> exps = edges_of(log, rule.expected_signal);
        std::vector<bool> used(exps.size(), false);
        for (const Edge& a : ants) {
            if (a.rising != rule.antecedent_rising) continue;
            bool matched = false;
            for (std::size_t j = 0; j < exps.size(); ++j) {
                if (used[j] || exps[j].rising != rule.expected_rising) continue;
                if (exps[j].time_ms > a.time_ms && exps[j].time_ms <= a.time_ms + rule.timeout_ms) {
                    used[j] = true;
                    matched = true;
                    break;
                }
            }
            if (!matched) out.push_back({rule, a.time_ms, a.time_ms + rule.timeout_ms});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Symptom& a, const Symptom& b) { return a.antecedent_ms < b.antecedent_ms; });
    return out;
}

std::vector<SignalStats> stats(const ChangeLog& log) {
    if (log.records.empty()) throw Error("usage", "stats of an empty change log");
    std::int64_t duration = log.records.back().time_ms;

    std::vector<SignalStats> out;
    for (std::size_t s = 0; s < log.signal_names.size(); ++s) {
        std::vector<const ChangeRecord*> recs;
        for (const ChangeRecord& r : log.records)
            if (r.signal == s) recs.push_back(&r);
        SignalStats st{s, recs.empty() ? 0 : recs.size() - 1, 0.0, std::nullopt};
        if (!recs.empty()) {
            std::int64_t at_one = 0;
            for (std::size_t i = 0; i < recs.size(); ++i) {
                std::int64_t end = i + 1 < recs.size() ? recs[i + 1]->time_ms : duration;
                if (recs[i]->value) at_one += end - recs[i]->time_ms;
            }
            st.duty_cycle = duration > 0
                                ? static_cast<double>(at_one) / static_cast<double>(duration)
                                : (recs.front()->value ? 1.0 : 0.0);
            if (recs.size() >= 2)
                st.mean_interchange_ms =
                    static_cast<double>(recs.back()->time_ms - recs.front()->time_ms) /
                    static_cast<double>(recs.size() - 1);
        }
        out.push_back(st);
    }
    return out;
}

std::vector<SymptomRule> parse_symptom_rules(const std::string& text, const ChangeLog& log) {
    std::vector<SymptomRule> out;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;

    auto parse_edge = [&](const std::string& tok) -> std::pair<std::size_t, bool> {
        if (tok.size() < 2 || (tok.back() != '+' && tok.back() != '-'))
            throw Error("parse", "symptom rule line " + std::to_string(line_no) +
                                     ": expected <signal>+ or <signal>-");
        std::string name = tok.substr(0, tok.size() - 1);
        auto idx = log.find(name);
        if (!idx)
            throw Error("usage", "symptom rule line " + std::to_string(line_no) +
                                     ": undeclared signal '" + name + "'");
        return {*idx, tok.back() == '+'};
    };

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string kw, ant, arrow, exp, within_kw, ms_s;
        if (!(ls >> kw)) continue;
        if (kw != "expect" || !(ls >> ant >> arrow >> exp >> within_kw >> ms_s) ||
            arrow != "->" || within_kw != "within")
            throw Error("parse", "symptom rule line " + std::to_string(line_no) +
                                     ": expected 'expect <sig>+|- -> <sig>+|- within <ms>'");
        auto [a_sig, a_rise] = parse_edge(ant);
        auto [e_sig, e_rise] = parse_edge(exp);
        std::int64_t timeout = std::stoll(ms_s);
        if (timeout <= 0)
            throw Error("parse",
                        "symptom rule line " + std::to_string(line_no) + ": timeout must be > 0");
        out.push_back({a_sig, a_rise, e_sig, e_rise, timeout});
    }
    return out;
}

std::string write_changelog_csv(const ChangeLog& log) {
    std::ostringstream out;
    out << "# signals: ";
    for (std::size_t i = 0; i < log.signal_names.size(); ++i)
        out << (i ? "," : "") << log.signal_names[i];
    out << "\n# scan_ms: " << log.scan_ms << "\n# label: ";
    if (log.label < 0) out << "unlabeled";
    else out << log.label;
    out << "\n";
    if (log.inject_ms) out << "# inject_ms: " << *log.inject_ms << "\n";
    out << "time_ms,variable,value\n";
    for (const ChangeRecord& r : log.records)
        out << r.time_ms << ',' << log.signal_names[r.signal] << ',' << (r.value ? 1 : 0) << "\n";
    return out.str();
}

ChangeLog read_changelog_csv(const std::string& text) {
    ChangeLog log;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool header_done = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# signals: ", 0) == 0) {
            std::stringstream names(line.substr(11));
            std::string name;
            while (std::getline(names, name, ',')) log.signal_names.push_back(name);
            continue;
        }
        if (line.rfind("# scan_ms: ", 0) == 0) {
            log.scan_ms = std::stoll(line.substr(11));
            continue;
        }
        if (line.rfind("# label: ", 0) == 0) {
            std::string v = line.substr(9);
            log.label = v == "unlabeled" ? -1 : std::stoi(v);
            continue;
        }
        if (line.rfind("# inject_ms: ", 0) == 0) {
            log.inject_ms = std::stoll(line.substr(13));
            continue;
        }
        if (line.rfind("#", 0) == 0) continue;
        if (!header_done && line == "time_ms,variable,value") {
            header_done = true;
            continue;
        }
        std::size_t c1 = line.find(','), c2 = line.rfind(',');
        if (c1 == std::string::npos || c2 == c1)
            throw Error("parse", "change-log line " + std::to_string(line_no) + ": bad row");
        std::string name = line.substr(c1 + 1, c2 - c1 - 1);
        auto idx = log.find(name);
        if (!idx)
            throw Error("parse", "change-log line " + std::to_string(line_no) +
                                     ": variable '" + name + "' not in header");
        std::string value = line.substr(c2 + 1);
        if (value != "0" && value != "1")
            throw Error("parse", "change-log line " + std::to_string(line_no) +
                                     ": value must be 0 or 1");
        log.records.push_back({*idx, std::stoll(line.substr(0, c1)), value == "1"});
    }
    if (log.signal_names.empty())
        throw Error("parse", "change-log is missing its '# signals:' header");
    return log;
}

void save_changelog(const ChangeLog& log, const std::string& path) {
    write_file(path, write_changelog_csv(log));
}

ChangeLog load_changelog(const std::string& path) { return read_changelog_csv(read_file(path)); }

} // namespace deslab
