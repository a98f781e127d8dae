#include "deslab/dataset.hpp"

#include "deslab/error.hpp"
#include "deslab/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace deslab {

double TimeScaling::apply(double t_rel) const {
    switch (kind) {
    case Kind::None: return t_rel;
    case Kind::Divide: return t_rel / divisor;
    case Kind::Log1p: return std::log1p(t_rel);
    }
    return t_rel;
}

TimeScaling parse_time_scaling(const std::string& text) {
    if (text == "none") return TimeScaling::none();
    if (text == "log1p") return TimeScaling::log1p();
    if (text.rfind("div", 0) == 0) {
        double c = std::stod(text.substr(3));
        if (!(c > 0)) throw Error("usage", "time scaling divisor must be > 0");
        return TimeScaling::divide(c);
    }
    throw Error("usage", "unknown time scaling '" + text + "' (none|div<c>|log1p)");
}

std::string format_time_scaling(const TimeScaling& s) {
    switch (s.kind) {
    case TimeScaling::Kind::None: return "none";
    case TimeScaling::Kind::Log1p: return "log1p";
    case TimeScaling::Kind::Divide: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "div%.17g", s.divisor);
        return buf;
    }
    }
    return "none";
}

std::vector<TimedIOVector> vectorize(const ChangeLog& log) {
    if (log.records.empty()) throw Error("usage", "cannot vectorize an empty change log");
    std::vector<TimedIOVector> out;
    std::vector<std::uint8_t> values(log.signal_names.size(), 0);
    std::int64_t prev_time = 0;
    bool open = false;
    std::int64_t open_time = 0;

    auto flush = [&](std::int64_t time) {
        out.push_back({out.empty() ? 0.0 : static_cast<double>(time - prev_time), values});
        prev_time = time;
    };

    for (const ChangeRecord& r : log.records) {
        if (open && r.time_ms != open_time) {
            flush(open_time);
            open = false;
        }
        values[r.signal] = r.value ? 1 : 0;
        open = true;
        open_time = r.time_ms;
    }
    if (open) flush(open_time);
    return out;
}

std::vector<WindowSample> windows(const std::vector<TimedIOVector>& vectors, int n, int stride,
                                  ClassLabel label) {
    if (n < 1 || stride < 1) throw Error("usage", "window length and stride must be >= 1");
    if (static_cast<int>(vectors.size()) < n)
        throw Error("usage", "run too short for window length (" +
                                 std::to_string(vectors.size()) + " < " + std::to_string(n) + ")");
    std::vector<WindowSample> out;
    for (std::size_t start = 0; start + n <= vectors.size(); start += stride)
        out.push_back({{vectors.begin() + start, vectors.begin() + start + n}, label});
    return out;
}

std::vector<WindowSample> label_windows_for_fault(const std::vector<TimedIOVector>& vectors, int n,
                                                  int stride, const FaultSpec& fault,
                                                  const LabelCatalog& catalog,
                                                  bool keep_preinject) {
    ClassLabel fault_label = label_for({fault}, catalog);
    std::vector<WindowSample> all = windows(vectors, n, stride, fault_label);

    // absolute end time of each vector = cumulative t_rel
    std::vector<double> abs_time(vectors.size());
    double acc = 0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        acc += vectors[i].t_rel;
        abs_time[i] = acc;
    }

    std::vector<WindowSample> out;
    for (std::size_t w = 0; w < all.size(); ++w) {
        std::size_t end_idx = w * stride + n - 1;
        if (abs_time[end_idx] < static_cast<double>(fault.inject_ms)) {
            if (!keep_preinject) continue;
            all[w].label = ClassLabel{0};
        }
        out.push_back(std::move(all[w]));
    }
    return out;
}

std::vector<TimedIOVector> normalize_time(std::vector<TimedIOVector> vectors,
                                          const TimeScaling& scale) {
    if (scale.kind == TimeScaling::Kind::Divide && !(scale.divisor > 0))
        throw Error("usage", "time scaling divisor must be > 0");
    for (TimedIOVector& v : vectors) v.t_rel = scale.apply(v.t_rel);
    return vectors;
}

FoldSplit kfold(const Dataset& dataset, int k, std::uint64_t seed) {
    if (k < 2) throw Error("usage", "k must be >= 2");
    if (static_cast<int>(dataset.samples.size()) < k)
        throw Error("usage", "fewer samples than folds");

    std::vector<std::vector<std::size_t>> by_class(kNumClasses);
    for (std::size_t i = 0; i < dataset.samples.size(); ++i)
        by_class[static_cast<std::size_t>(dataset.samples[i].label.index)].push_back(i);

    FoldSplit split{k, std::vector<int>(dataset.samples.size(), 0)};
    std::mt19937_64 rng(seed);
    int next_fold = 0; // rotates across classes so small classes spread out
    for (auto& members : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        for (std::size_t pos = 0; pos < members.size(); ++pos) {
            split.assignment[members[pos]] = next_fold;
            next_fold = (next_fold + 1) % k;
        }
    }
    return split;
}

void append_log_to_dataset(Dataset& out, const ChangeLog& log, int n, int stride,
                           const TimeScaling& scale, const LabelCatalog& catalog, int run_id,
                           bool keep_preinject) {
    (void)catalog;
    if (out.window_length == 0) {
        out.window_length = n;
        out.width = static_cast<int>(log.signal_names.size());
        out.scaling = scale;
    }
    if (!(out.scaling == scale))
        throw Error("usage", "all logs of a dataset must share one time scaling");
    if (out.width != static_cast<int>(log.signal_names.size()))
        throw Error("usage", "log width does not match dataset width");

    std::vector<TimedIOVector> vecs = vectorize(log);
    int label = std::max(log.label, 0);
    std::vector<WindowSample> samples;
    if (label > 0 && log.inject_ms) {
        // same split as label_windows_for_fault, driven by the log header
        std::vector<double> abs_time(vecs.size());
        double acc = 0;
        for (std::size_t i = 0; i < vecs.size(); ++i) {
            acc += vecs[i].t_rel;
            abs_time[i] = acc;
        }
        std::vector<WindowSample> all = windows(vecs, n, stride, ClassLabel{label});
        for (std::size_t w = 0; w < all.size(); ++w) {
            std::size_t end_idx = w * stride + static_cast<std::size_t>(n) - 1;
            if (abs_time[end_idx] < static_cast<double>(*log.inject_ms)) {
                if (!keep_preinject) continue;
                all[w].label = ClassLabel{0};
            }
            samples.push_back(std::move(all[w]));
        }
    } else {
        samples = windows(vecs, n, stride, ClassLabel{label});
    }
    for (WindowSample& s : samples) {
        s.window = normalize_time(std::move(s.window), scale);
        out.samples.push_back(std::move(s));
        out.run_ids.push_back(run_id);
    }
}

std::string write_dataset(const Dataset& ds) {
    std::ostringstream out;
    out << "N=" << ds.window_length << " width=" << ds.width << " count=" << ds.samples.size()
        << " scale=" << format_time_scaling(ds.scaling) << "\n";
    char buf[40];
    for (const WindowSample& s : ds.samples) {
        out << "label=" << s.label.index << "\n";
        for (const TimedIOVector& v : s.window) {
            std::snprintf(buf, sizeof buf, "%.17g", v.t_rel);
            out << buf << ',';
            for (std::uint8_t b : v.values) out << (b ? '1' : '0');
            out << "\n";
        }
    }
    return out.str();
}

Dataset read_dataset(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error("parse", "empty dataset file");
    Dataset ds;
    std::size_t count = 0;
    {
        std::istringstream hs(line);
        std::string tok;
        while (hs >> tok) {
            if (tok.rfind("N=", 0) == 0) ds.window_length = std::stoi(tok.substr(2));
            else if (tok.rfind("width=", 0) == 0) ds.width = std::stoi(tok.substr(6));
            else if (tok.rfind("count=", 0) == 0) count = std::stoul(tok.substr(6));
            else if (tok.rfind("scale=", 0) == 0) ds.scaling = parse_time_scaling(tok.substr(6));
            else throw Error("parse", "dataset header: unknown field '" + tok + "'");
        }
    }
    if (ds.window_length < 1 || ds.width < 1)
        throw Error("parse", "dataset header missing N= or width=");

    int run_id = 0;
    for (std::size_t s = 0; s < count; ++s) {
        if (!std::getline(in, line) || line.rfind("label=", 0) != 0)
            throw Error("parse", "dataset sample " + std::to_string(s) + ": expected label= line");
        int label = std::stoi(line.substr(6));
        if (label < 0 || label >= kNumClasses)
            throw Error("parse", "dataset sample " + std::to_string(s) + ": label out of range");
        WindowSample sample;
        sample.label = ClassLabel{label};
        for (int v = 0; v < ds.window_length; ++v) {
            if (!std::getline(in, line))
                throw Error("parse", "dataset sample " + std::to_string(s) + ": truncated window");
            std::size_t comma = line.find(',');
            if (comma == std::string::npos ||
                line.size() - comma - 1 != static_cast<std::size_t>(ds.width))
                throw Error("parse", "dataset sample " + std::to_string(s) + ": bad vector row");
            TimedIOVector vec;
            vec.t_rel = std::stod(line.substr(0, comma));
            vec.values.reserve(static_cast<std::size_t>(ds.width));
            for (std::size_t i = comma + 1; i < line.size(); ++i) {
                if (line[i] != '0' && line[i] != '1')
                    throw Error("parse",
                                "dataset sample " + std::to_string(s) + ": bits must be 0/1");
                vec.values.push_back(line[i] == '1');
            }
            sample.window.push_back(std::move(vec));
        }
        ds.samples.push_back(std::move(sample));
        ds.run_ids.push_back(run_id++);
    }
    return ds;
}

void save_dataset(const Dataset& ds, const std::string& path) {
    write_file(path, write_dataset(ds));
}

Dataset load_dataset(const std::string& path) { return read_dataset(read_file(path)); }

} // namespace deslab
