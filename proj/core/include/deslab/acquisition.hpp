#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace deslab {

/// One logged value change.
struct ChangeRecord {
    std::size_t signal; // declaration index
    std::int64_t time_ms;
    bool value;

    bool operator==(const ChangeRecord&) const = default;
};

/// Time-ordered change log with the signal header it was recorded against.
/// Records at equal times are ordered by signal declaration index.
struct ChangeLog {
    std::vector<std::string> signal_names;
    std::int64_t scan_ms = 0;
    int label = -1;                         // -1 = unlabeled
    std::optional<std::int64_t> inject_ms;  // set for fault runs
    std::vector<ChangeRecord> records;

    std::optional<std::size_t> find(const std::string& name) const;
    bool operator==(const ChangeLog&) const = default;
};

/// Folds time-ordered snapshots into a change log: a record is emitted
/// exactly when a signal's value differs from its previous value; the
/// initial snapshot is emitted in full.
class ChangeLogBuilder {
public:
    explicit ChangeLogBuilder(std::vector<std::string> signal_names, std::int64_t scan_ms);

    void push(std::int64_t time_ms, const std::vector<std::uint8_t>& snapshot);
    ChangeLog finish();

private:
    ChangeLog log_;
    std::vector<std::uint8_t> last_;
    bool first_ = true;
};

ChangeLog record(const std::vector<std::string>& signal_names, std::int64_t scan_ms,
                 const std::vector<std::pair<std::int64_t, std::vector<std::uint8_t>>>& snapshots);

/// "event B expected within timeout after event A". Edges are value
/// transitions in the log; rising = 0 -> 1.
struct SymptomRule {
    std::size_t antecedent_signal;
    bool antecedent_rising;
    std::size_t expected_signal;
    bool expected_rising;
    std::int64_t timeout_ms;
};

struct Symptom {
    SymptomRule rule;
    std::int64_t antecedent_ms;
    std::int64_t deadline_ms; // antecedent_ms + timeout
};

/// One symptom per antecedent edge with no matching expected edge in
/// (antecedent, antecedent + timeout]. Matching consumes the earliest
/// unmatched antecedent first.
std::vector<Symptom> detect_symptoms(const ChangeLog& log, const std::vector<SymptomRule>& rules);

struct SignalStats {
    std::size_t signal;
    std::size_t change_count;                    // changes after the initial record
    double duty_cycle;                           // fraction of log duration at value 1
    std::optional<double> mean_interchange_ms;   // absent with fewer than 2 records
};

std::vector<SignalStats> stats(const ChangeLog& log);

/// Symptom-rule file: `expect <sig><+|-> -> <sig><+|-> within <ms>` per line.
std::vector<SymptomRule> parse_symptom_rules(const std::string& text, const ChangeLog& log);

// Change-log CSV: `# signals: a,b,...`, `# scan_ms: <int>`,
// `# label: <0-7|unlabeled>`, optionally `# inject_ms: <int>`, then rows
// `time_ms,variable,value`.
std::string write_changelog_csv(const ChangeLog& log);
ChangeLog read_changelog_csv(const std::string& text);
void save_changelog(const ChangeLog& log, const std::string& path);
ChangeLog load_changelog(const std::string& path);

} // namespace deslab
