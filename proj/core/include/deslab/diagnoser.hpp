#pragma once

#include "deslab/acquisition.hpp"
#include "deslab/dataset.hpp"
#include "deslab/nn.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

namespace deslab {

struct Verdict {
    enum class Kind { Warmup, Normal, Fault, Uncertain } kind = Kind::Warmup;
    int fault_class = 0;              // meaningful for Kind::Fault only, in 1..7
    std::array<double, 8> distribution{}; // all-zero while warming up
    double top_confidence = 0.0;
};

const char* verdict_kind_name(Verdict::Kind k);

/// Sliding last-N buffer over a live event stream. Vectors are pushed with
/// raw t_rel in ms; the model's time scaling is applied internally.
class Diagnoser {
public:
    Diagnoser(const Model& model, double tau);

    Verdict push(const TimedIOVector& vector);
    std::size_t buffered() const { return buffer_.size(); }

private:
    const Model* model_;
    double tau_;
    std::deque<TimedIOVector> buffer_;
};

/// Vectorizes the log and pushes each vector in order; one verdict per
/// vector, tagged with the vector's absolute time.
std::vector<std::pair<std::int64_t, Verdict>> replay(const ChangeLog& log, const Model& model,
                                                     double tau);

/// Time of the first post-injection Fault verdict with the expected class,
/// minus inject_ms; absent if never achieved.
std::optional<std::int64_t> latency(const std::vector<std::pair<std::int64_t, Verdict>>& verdicts,
                                    std::int64_t inject_ms, int expected_class);

} // namespace deslab
