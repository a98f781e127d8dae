#include "deslab/metrics.hpp"

#include "deslab/error.hpp"

#include <cstdio>
#include <numeric>
#include <sstream>

namespace deslab {

ConfusionMatrix::ConfusionMatrix(std::size_t num_classes)
    : n_(num_classes), cells_(num_classes * num_classes, 0) {
    if (num_classes == 0) throw Error("usage", "confusion matrix needs at least one class");
}

std::int64_t& ConfusionMatrix::at(std::size_t truth, std::size_t predicted) {
    if (truth >= n_ || predicted >= n_) throw Error("usage", "class index out of range");
    return cells_[truth * n_ + predicted];
}

std::int64_t ConfusionMatrix::at(std::size_t truth, std::size_t predicted) const {
    if (truth >= n_ || predicted >= n_) throw Error("usage", "class index out of range");
    return cells_[truth * n_ + predicted];
}

std::int64_t ConfusionMatrix::total() const {
    return std::accumulate(cells_.begin(), cells_.end(), std::int64_t{0});
}

std::int64_t ConfusionMatrix::row_sum(std::size_t truth) const {
    std::int64_t s = 0;
    for (std::size_t p = 0; p < n_; ++p) s += at(truth, p);
    return s;
}

std::int64_t ConfusionMatrix::col_sum(std::size_t predicted) const {
    std::int64_t s = 0;
    for (std::size_t t = 0; t < n_; ++t) s += at(t, predicted);
    return s;
}

ConfusionMatrix confusion(const std::vector<int>& truths, const std::vector<int>& predictions,
                          std::size_t num_classes) {
    if (truths.size() != predictions.size())
        throw Error("usage", "truth/prediction length mismatch");
    if (truths.empty()) throw Error("usage", "cannot build a confusion matrix from no samples");
    ConfusionMatrix cm(num_classes);
    for (std::size_t i = 0; i < truths.size(); ++i) {
        if (truths[i] < 0 || predictions[i] < 0)
            throw Error("usage", "negative class label");
        cm.at(static_cast<std::size_t>(truths[i]), static_cast<std::size_t>(predictions[i]))++;
    }
    return cm;
}

PerClassCounts per_class(const ConfusionMatrix& cm, std::size_t i) {
    if (i >= cm.size()) throw Error("usage", "class index out of range");
    std::int64_t tp = cm.at(i, i);
    std::int64_t fn = cm.row_sum(i) - tp;
    std::int64_t fp = cm.col_sum(i) - tp;
    std::int64_t tn = cm.total() - tp - fn - fp;
    return {i, tp, tn, fp, fn};
}

double average_accuracy(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw Error("usage", "average accuracy of an empty matrix");
    double sum = 0;
    for (std::size_t i = 0; i < cm.size(); ++i) {
        PerClassCounts c = per_class(cm, i);
        sum += static_cast<double>(c.tp + c.tn) / static_cast<double>(c.tp + c.tn + c.fp + c.fn);
    }
    return sum / static_cast<double>(cm.size());
}

std::optional<double> precision(const ConfusionMatrix& cm, std::size_t i) {
    PerClassCounts c = per_class(cm, i);
    if (c.tp + c.fp == 0) return std::nullopt;
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

std::optional<double> recall(const ConfusionMatrix& cm, std::size_t i) {
    PerClassCounts c = per_class(cm, i);
    if (c.tp + c.fn == 0) return std::nullopt;
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

std::vector<double> normalize(const ConfusionMatrix& cm) {
    std::vector<double> out(cm.size() * cm.size(), 0.0);
    for (std::size_t t = 0; t < cm.size(); ++t) {
        std::int64_t row = cm.row_sum(t);
        if (row == 0) continue;
        for (std::size_t p = 0; p < cm.size(); ++p)
            out[t * cm.size() + p] = static_cast<double>(cm.at(t, p)) / static_cast<double>(row);
    }
    return out;
}

std::vector<double> fold_average(const std::vector<ConfusionMatrix>& cms) {
    if (cms.empty()) throw Error("usage", "fold_average of no matrices");
    std::size_t n = cms.front().size();
    for (const ConfusionMatrix& cm : cms)
        if (cm.size() != n) throw Error("usage", "fold_average shape mismatch");
    std::vector<double> out(n * n, 0.0);
    for (const ConfusionMatrix& cm : cms) {
        std::vector<double> norm = normalize(cm);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += norm[i];
    }
    for (double& v : out) v /= static_cast<double>(cms.size());
    return out;
}

namespace {

std::string format_opt(const std::optional<double>& v) {
    if (!v) return "undefined";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return buf;
}

void print_counts(std::ostringstream& out, const ConfusionMatrix& cm) {
    out << "raw counts:\n";
    for (std::size_t t = 0; t < cm.size(); ++t) {
        for (std::size_t p = 0; p < cm.size(); ++p) out << (p ? " " : "  ") << cm.at(t, p);
        out << "\n";
    }
}

void print_normalized(std::ostringstream& out, const std::vector<double>& norm, std::size_t n) {
    char buf[32];
    for (std::size_t t = 0; t < n; ++t) {
        out << "  ";
        for (std::size_t p = 0; p < n; ++p) {
            std::snprintf(buf, sizeof buf, "%.4f", norm[t * n + p]);
            out << (p ? " " : "") << buf;
        }
        out << "\n";
    }
}

} // namespace

std::string metrics_report(const ConfusionMatrix& cm) {
    std::ostringstream out;
    out << "orientation: rows = true class, columns = predicted class\n";
    out << "samples: " << cm.total() << "\n";
    print_counts(out, cm);
    out << "normalized (per true-class row):\n";
    print_normalized(out, normalize(cm), cm.size());
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", average_accuracy(cm));
    out << "average_accuracy: " << buf << "\n";
    out << "class precision recall\n";
    for (std::size_t i = 0; i < cm.size(); ++i)
        out << "C" << i << " " << format_opt(precision(cm, i)) << " " << format_opt(recall(cm, i))
            << "\n";
    return out.str();
}

std::string metrics_report(const std::vector<ConfusionMatrix>& fold_cms) {
    std::ostringstream out;
    for (std::size_t f = 0; f < fold_cms.size(); ++f) {
        out << "=== fold " << f << " ===\n" << metrics_report(fold_cms[f]) << "\n";
    }
    if (!fold_cms.empty()) {
        out << "=== fold-averaged normalized confusion matrix ===\n";
        out << "orientation: rows = true class, columns = predicted class\n";
        print_normalized(out, fold_average(fold_cms), fold_cms.front().size());
        double ac = 0;
        for (const ConfusionMatrix& cm : fold_cms) ac += average_accuracy(cm);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", ac / static_cast<double>(fold_cms.size()));
        out << "mean_average_accuracy: " << buf << "\n";
    }
    return out.str();
}

std::string metrics_csv(const ConfusionMatrix& cm) {
    std::ostringstream out;
    out << "class,tp,tn,fp,fn,precision,recall\n";
    for (std::size_t i = 0; i < cm.size(); ++i) {
        PerClassCounts c = per_class(cm, i);
        out << i << ',' << c.tp << ',' << c.tn << ',' << c.fp << ',' << c.fn << ','
            << format_opt(precision(cm, i)) << ',' << format_opt(recall(cm, i)) << "\n";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", average_accuracy(cm));
    out << "average_accuracy,,,,,," << buf << "\n";
    return out.str();
}

} // namespace deslab
