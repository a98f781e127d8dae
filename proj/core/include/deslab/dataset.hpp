#pragma once

#include "deslab/acquisition.hpp"
#include "deslab/faults.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace deslab {

/// Full boolean snapshot of all signals plus the duration since the
/// previous change instant.
struct TimedIOVector {
    double t_rel = 0.0; // ms, or a scaled value after normalize_time
    std::vector<std::uint8_t> values; // declaration order

    bool operator==(const TimedIOVector&) const = default;
};

struct WindowSample {
    std::vector<TimedIOVector> window; // exactly N, chronological
    ClassLabel label;
};

struct TimeScaling {
    enum class Kind { None, Divide, Log1p };
    Kind kind = Kind::Divide;
    double divisor = 1000.0; // Divide only, must be > 0

    static TimeScaling none() { return {Kind::None, 1.0}; }
    static TimeScaling divide(double c) { return {Kind::Divide, c}; }
    static TimeScaling log1p() { return {Kind::Log1p, 1.0}; }

    double apply(double t_rel) const;
    bool operator==(const TimeScaling&) const = default;
};

struct Dataset {
    int window_length = 0; // N
    int width = 0;         // signal count
    TimeScaling scaling = TimeScaling::none(); // already applied to t_rel
    std::vector<WindowSample> samples;
    std::vector<int> run_ids; // provenance, parallel to samples
};

struct FoldSplit {
    int k = 0;
    std::vector<int> assignment; // fold index in [0,k) per sample
};

TimeScaling parse_time_scaling(const std::string& text); // "none"|"div<ms>"|"log1p"
std::string format_time_scaling(const TimeScaling& s);

/// One vector per distinct change time: last-value-hold snapshot of all
/// signals, t_rel = time since the previous distinct change time.
std::vector<TimedIOVector> vectorize(const ChangeLog& log);

/// Contiguous slices of length N at the given stride, all carrying `label`.
/// Sample count = floor((|vectors| - N)/stride) + 1.
std::vector<WindowSample> windows(const std::vector<TimedIOVector>& vectors, int n, int stride,
                                  ClassLabel label);

/// Like `windows`, but labels each slice by its end time relative to the
/// fault's injection: windows ending before inject_ms are C0, the rest
/// carry label_for(fault). With `keep_preinject` false, pre-injection
/// windows are dropped instead of labeled C0.
std::vector<WindowSample> label_windows_for_fault(const std::vector<TimedIOVector>& vectors, int n,
                                                  int stride, const FaultSpec& fault,
                                                  const LabelCatalog& catalog,
                                                  bool keep_preinject = true);

/// Transforms only t_rel; boolean values untouched.
std::vector<TimedIOVector> normalize_time(std::vector<TimedIOVector> vectors,
                                          const TimeScaling& scale);

/// Stratified k-fold split: per class, fold sizes differ by at most 1.
/// Deterministic under seed.
FoldSplit kfold(const Dataset& dataset, int k, std::uint64_t seed);

/// Windows one log into dataset samples (labeling by header label and
/// inject_ms when present), applies the time scaling, and appends to `out`.
void append_log_to_dataset(Dataset& out, const ChangeLog& log, int n, int stride,
                           const TimeScaling& scale, const LabelCatalog& catalog, int run_id,
                           bool keep_preinject = true);

// Dataset file: header `N=<int> width=<int> count=<int>`; per sample
// `label=<0-7>` then N lines of `t_rel,<bit...bit>`.
std::string write_dataset(const Dataset& ds);
Dataset read_dataset(const std::string& text);
void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

} // namespace deslab
