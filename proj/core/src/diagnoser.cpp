#include "deslab/diagnoser.hpp"

#include "deslab/error.hpp"

namespace deslab {

const char* verdict_kind_name(Verdict::Kind k) {
    switch (k) {
    case Verdict::Kind::Warmup: return "warmup";
    case Verdict::Kind::Normal: return "normal";
    case Verdict::Kind::Fault: return "fault";
    case Verdict::Kind::Uncertain: return "uncertain";
    }
    return "?";
}

Diagnoser::Diagnoser(const Model& model, double tau) : model_(&model), tau_(tau) {
    if (!(tau > 0.0) || tau > 1.0) throw Error("usage", "tau must be in (0, 1]");
}

Verdict Diagnoser::push(const TimedIOVector& vector) {
    if (static_cast<int>(vector.values.size()) != model_->config.input_dim - 1)
        throw Error("usage", "vector width does not match the model input");

    TimedIOVector scaled = vector;
    scaled.t_rel = model_->scaling.apply(scaled.t_rel);
    buffer_.push_back(std::move(scaled));
    const std::size_t n = static_cast<std::size_t>(model_->config.window_length);
    if (buffer_.size() > n) buffer_.pop_front();

    Verdict v;
    if (buffer_.size() < n) return v; // Warmup

    WindowSample sample;
    sample.window.assign(buffer_.begin(), buffer_.end());
    Prediction p = predict(*model_, sample);
    for (int i = 0; i < kNumClasses; ++i)
        v.distribution[static_cast<std::size_t>(i)] = p.distribution(i);
    v.top_confidence = p.distribution(p.cls);
    if (v.top_confidence < tau_) v.kind = Verdict::Kind::Uncertain;
    else if (p.cls == 0) v.kind = Verdict::Kind::Normal;
    else {
        v.kind = Verdict::Kind::Fault;
        v.fault_class = p.cls;
    }
    return v;
}

std::vector<std::pair<std::int64_t, Verdict>> replay(const ChangeLog& log, const Model& model,
                                                     double tau) {
    Diagnoser diag(model, tau);
    std::vector<std::pair<std::int64_t, Verdict>> out;
    double abs_time = 0;
    for (const TimedIOVector& v : vectorize(log)) {
        abs_time += v.t_rel;
        out.emplace_back(static_cast<std::int64_t>(abs_time), diag.push(v));
    }
    return out;
}

std::optional<std::int64_t> latency(const std::vector<std::pair<std::int64_t, Verdict>>& verdicts,
                                    std::int64_t inject_ms, int expected_class) {
    for (const auto& [time, v] : verdicts)
        if (time >= inject_ms && v.kind == Verdict::Kind::Fault && v.fault_class == expected_class)
            return time - inject_ms;
    return std::nullopt;
}

} // namespace deslab
