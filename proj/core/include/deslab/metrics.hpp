#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace deslab {

/// Prediction-count matrix. Orientation: rows = true class, columns =
/// predicted class (stated in every report header).
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::size_t num_classes = 8);

    std::size_t size() const { return n_; }
    std::int64_t& at(std::size_t truth, std::size_t predicted);
    std::int64_t at(std::size_t truth, std::size_t predicted) const;
    std::int64_t total() const;
    std::int64_t row_sum(std::size_t truth) const;
    std::int64_t col_sum(std::size_t predicted) const;

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::size_t n_;
    std::vector<std::int64_t> cells_; // row-major
};

ConfusionMatrix confusion(const std::vector<int>& truths, const std::vector<int>& predictions,
                          std::size_t num_classes = 8);

struct PerClassCounts {
    std::size_t cls;
    std::int64_t tp, tn, fp, fn;
};

PerClassCounts per_class(const ConfusionMatrix& cm, std::size_t i);

/// Mean over classes of (TP_i + TN_i) / (TP_i + TN_i + FP_i + FN_i).
double average_accuracy(const ConfusionMatrix& cm);

/// TP_i / (TP_i + FP_i); nullopt when class i was never predicted.
std::optional<double> precision(const ConfusionMatrix& cm, std::size_t i);

/// TP_i / (TP_i + FN_i); nullopt when class i is absent from the truth.
std::optional<double> recall(const ConfusionMatrix& cm, std::size_t i);

/// Row-normalized matrix (row-major); empty rows become all-zero rows.
std::vector<double> normalize(const ConfusionMatrix& cm);

/// Cellwise mean of the normalized matrices.
std::vector<double> fold_average(const std::vector<ConfusionMatrix>& cms);

/// Human-readable report: orientation, raw counts, normalized matrix to 4
/// decimals, AC, per-class precision/recall with `undefined` spelled out.
std::string metrics_report(const ConfusionMatrix& cm);
std::string metrics_report(const std::vector<ConfusionMatrix>& fold_cms);

/// CSV export: class,tp,tn,fp,fn,precision,recall rows plus an AC line.
std::string metrics_csv(const ConfusionMatrix& cm);

} // namespace deslab
