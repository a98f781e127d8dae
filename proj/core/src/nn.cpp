#include "deslab/nn.hpp"

#include "deslab/error.hpp"
#include "deslab/manifest.hpp"
#include "deslab/seed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

namespace deslab {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void fill_uniform(Eigen::MatrixXd& m, std::mt19937_64& rng, double scale) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            m(i, j) = (2.0 * uniform01(rng) - 1.0) * scale;
}

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& x) {
    return (1.0 / (1.0 + (-x.array()).exp())).matrix();
}

} // namespace

std::vector<Model::TensorRef> Model::tensors() {
    std::vector<TensorRef> out;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        std::string p = "lstm" + std::to_string(l) + ".";
        out.push_back({p + "w", layers[l].w.data(), layers[l].w.rows(), layers[l].w.cols()});
        out.push_back({p + "u", layers[l].u.data(), layers[l].u.rows(), layers[l].u.cols()});
        out.push_back({p + "b", layers[l].b.data(), layers[l].b.rows(), 1});
    }
    out.push_back({"head.w", head_w.data(), head_w.rows(), head_w.cols()});
    out.push_back({"head.b", head_b.data(), head_b.rows(), 1});
    return out;
}

std::size_t Model::parameter_count() const {
    std::size_t n = 0;
    for (const LstmLayer& l : layers)
        n += static_cast<std::size_t>(l.w.size() + l.u.size() + l.b.size());
    return n + static_cast<std::size_t>(head_w.size() + head_b.size());
}

Model init_model(const ModelConfig& config, std::uint64_t seed, const TimeScaling& scaling) {
    if (config.hidden < 1 || config.window_length < 1 || config.lstm_layers < 1 ||
        config.num_classes != kNumClasses)
        throw Error("usage", "invalid model configuration");

    Model m;
    m.config = config;
    m.scaling = scaling;
    std::mt19937_64 rng(mix_seed(seed, 0xd15ea5e));
    const int h = config.hidden;
    for (int l = 0; l < config.lstm_layers; ++l) {
        int in = l == 0 ? config.input_dim : h;
        LstmLayer layer;
        layer.w.resize(4 * h, in);
        layer.u.resize(4 * h, h);
        layer.b = Eigen::VectorXd::Zero(4 * h);
        fill_uniform(layer.w, rng, 1.0 / std::sqrt(static_cast<double>(in)));
        fill_uniform(layer.u, rng, 1.0 / std::sqrt(static_cast<double>(h)));
        layer.b.segment(h, h).setOnes(); // forget-gate bias
        m.layers.push_back(std::move(layer));
    }
    m.head_w.resize(config.num_classes, h);
    fill_uniform(m.head_w, rng, 1.0 / std::sqrt(static_cast<double>(h)));
    m.head_b = Eigen::VectorXd::Zero(config.num_classes);
    return m;
}

Batch make_batch(const Model& model, const std::vector<const WindowSample*>& samples) {
    const int n = model.config.window_length;
    const int dim = model.config.input_dim;
    const Eigen::Index b = static_cast<Eigen::Index>(samples.size());

    Batch batch;
    batch.steps.assign(static_cast<std::size_t>(n), Eigen::MatrixXd(dim, b));
    for (Eigen::Index j = 0; j < b; ++j) {
        const WindowSample& s = *samples[static_cast<std::size_t>(j)];
        if (static_cast<int>(s.window.size()) != n)
            throw Error("usage", "window length does not match the model");
        for (int t = 0; t < n; ++t) {
            const TimedIOVector& v = s.window[static_cast<std::size_t>(t)];
            if (static_cast<int>(v.values.size()) != dim - 1)
                throw Error("usage", "vector width does not match the model input");
            auto col = batch.steps[static_cast<std::size_t>(t)].col(j);
            for (int i = 0; i < dim - 1; ++i) col(i) = v.values[static_cast<std::size_t>(i)];
            col(dim - 1) = v.t_rel;
        }
        batch.labels.push_back(s.label.index);
    }
    return batch;
}

ForwardCache forward_batch(const Model& model, const Batch& batch) {
    const int n = model.config.window_length;
    const int h = model.config.hidden;
    const Eigen::Index b = batch.size();
    if (static_cast<int>(batch.steps.size()) != n)
        throw Error("usage", "batch step count does not match the model window length");

    ForwardCache cache;
    cache.inputs = batch.steps;
    cache.layers.resize(model.layers.size());

    const std::vector<Eigen::MatrixXd>* below = &cache.inputs;
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        const LstmLayer& prm = model.layers[l];
        auto& lc = cache.layers[l];
        lc.i.resize(n); lc.f.resize(n); lc.g.resize(n); lc.o.resize(n);
        lc.c.resize(n); lc.tanh_c.resize(n); lc.h.resize(n);

        Eigen::MatrixXd h_prev = Eigen::MatrixXd::Zero(h, b);
        Eigen::MatrixXd c_prev = Eigen::MatrixXd::Zero(h, b);
        for (int t = 0; t < n; ++t) {
            Eigen::MatrixXd z = prm.w * (*below)[static_cast<std::size_t>(t)] + prm.u * h_prev;
            z.colwise() += prm.b;
            auto& lt = lc;
            lt.i[t] = sigmoid(z.topRows(h));
            lt.f[t] = sigmoid(z.middleRows(h, h));
            lt.g[t] = z.middleRows(2 * h, h).array().tanh().matrix();
            lt.o[t] = sigmoid(z.bottomRows(h));
            lt.c[t] = lt.f[t].cwiseProduct(c_prev) + lt.i[t].cwiseProduct(lt.g[t]);
            lt.tanh_c[t] = lt.c[t].array().tanh().matrix();
            lt.h[t] = lt.o[t].cwiseProduct(lt.tanh_c[t]);
            h_prev = lt.h[t];
            c_prev = lt.c[t];
        }
        below = &lc.h;
    }

    const Eigen::MatrixXd& top = cache.layers.back().h[static_cast<std::size_t>(n - 1)];
    cache.logits = model.head_w * top;
    cache.logits.colwise() += model.head_b;

    cache.probs.resize(cache.logits.rows(), b);
    for (Eigen::Index j = 0; j < b; ++j) {
        Eigen::VectorXd col = cache.logits.col(j);
        double m = col.maxCoeff();
        Eigen::VectorXd e = (col.array() - m).exp();
        cache.probs.col(j) = e / e.sum();
    }
    return cache;
}

Eigen::VectorXd forward(const Model& model, const WindowSample& sample) {
    Batch batch = make_batch(model, {&sample});
    return forward_batch(model, batch).probs.col(0);
}

double cce_loss(const Eigen::VectorXd& probs, int label) {
    if (label < 0 || label >= probs.size()) throw Error("usage", "label out of range");
    return -std::log(std::max(probs(label), 1e-12));
}

double batch_loss(const ForwardCache& cache, const std::vector<int>& labels,
                  const std::vector<double>* class_weights) {
    const Eigen::Index b = static_cast<Eigen::Index>(labels.size());
    double total = 0;
    for (Eigen::Index j = 0; j < b; ++j) {
        Eigen::VectorXd col = cache.logits.col(j);
        double m = col.maxCoeff();
        double lse = m + std::log((col.array() - m).exp().sum());
        double w = class_weights ? (*class_weights)[static_cast<std::size_t>(labels[j])] : 1.0;
        total += w * (lse - col(labels[static_cast<std::size_t>(j)]));
    }
    return total / static_cast<double>(b);
}

namespace {

Gradients zero_gradients(const Model& model) {
    Gradients g;
    for (const LstmLayer& l : model.layers)
        g.layers.push_back({Eigen::MatrixXd::Zero(l.w.rows(), l.w.cols()),
                            Eigen::MatrixXd::Zero(l.u.rows(), l.u.cols()),
                            Eigen::VectorXd::Zero(l.b.size())});
    g.head_w = Eigen::MatrixXd::Zero(model.head_w.rows(), model.head_w.cols());
    g.head_b = Eigen::VectorXd::Zero(model.head_b.size());
    return g;
}

} // namespace

Gradients backward_batch(const Model& model, const Batch& batch, const ForwardCache& cache,
                         const std::vector<double>* class_weights) {
    const int n = model.config.window_length;
    const int h = model.config.hidden;
    const Eigen::Index b = batch.size();
    if (b == 0) throw Error("usage", "backward over an empty batch");

    Gradients grad = zero_gradients(model);

    // softmax + CCE head: dLogits = (p - y) * w / B
    Eigen::MatrixXd dlogits = cache.probs;
    for (Eigen::Index j = 0; j < b; ++j) {
        dlogits(batch.labels[static_cast<std::size_t>(j)], j) -= 1.0;
        if (class_weights)
            dlogits.col(j) *=
                (*class_weights)[static_cast<std::size_t>(batch.labels[static_cast<std::size_t>(j)])];
    }
    dlogits /= static_cast<double>(b);

    const Eigen::MatrixXd& top = cache.layers.back().h[static_cast<std::size_t>(n - 1)];
    grad.head_w = dlogits * top.transpose();
    grad.head_b = dlogits.rowwise().sum();

    // dH[t] per layer: gradient arriving at the layer's output at step t
    std::vector<Eigen::MatrixXd> dh_out(static_cast<std::size_t>(n),
                                        Eigen::MatrixXd::Zero(h, b));
    dh_out[static_cast<std::size_t>(n - 1)] = model.head_w.transpose() * dlogits;

    for (int l = static_cast<int>(model.layers.size()) - 1; l >= 0; --l) {
        const LstmLayer& prm = model.layers[static_cast<std::size_t>(l)];
        const auto& lc = cache.layers[static_cast<std::size_t>(l)];
        const std::vector<Eigen::MatrixXd>& inputs =
            l == 0 ? cache.inputs : cache.layers[static_cast<std::size_t>(l - 1)].h;
        LstmLayer& g = grad.layers[static_cast<std::size_t>(l)];

        std::vector<Eigen::MatrixXd> dx(static_cast<std::size_t>(n));
        Eigen::MatrixXd dh_next = Eigen::MatrixXd::Zero(h, b);
        Eigen::MatrixXd dc_next = Eigen::MatrixXd::Zero(h, b);
        for (int t = n - 1; t >= 0; --t) {
            const auto ts = static_cast<std::size_t>(t);
            Eigen::MatrixXd dh = dh_out[ts] + dh_next;
            Eigen::MatrixXd dc =
                dh.cwiseProduct(lc.o[ts])
                    .cwiseProduct((1.0 - lc.tanh_c[ts].array().square()).matrix()) +
                dc_next;
            Eigen::MatrixXd c_prev =
                t == 0 ? Eigen::MatrixXd::Zero(h, b) : lc.c[ts - 1];

            Eigen::MatrixXd da(4 * h, b);
            // order matches the forward gate stacking: i, f, g, o
            da.topRows(h) = dc.cwiseProduct(lc.g[ts])
                                .cwiseProduct(lc.i[ts])
                                .cwiseProduct((1.0 - lc.i[ts].array()).matrix());
            da.middleRows(h, h) = dc.cwiseProduct(c_prev)
                                      .cwiseProduct(lc.f[ts])
                                      .cwiseProduct((1.0 - lc.f[ts].array()).matrix());
            da.middleRows(2 * h, h) =
                dc.cwiseProduct(lc.i[ts])
                    .cwiseProduct((1.0 - lc.g[ts].array().square()).matrix());
            da.bottomRows(h) = dh.cwiseProduct(lc.tanh_c[ts])
                                   .cwiseProduct(lc.o[ts])
                                   .cwiseProduct((1.0 - lc.o[ts].array()).matrix());

            g.w.noalias() += da * inputs[ts].transpose();
            if (t > 0) g.u.noalias() += da * lc.h[ts - 1].transpose();
            g.b += da.rowwise().sum();

            dx[ts] = prm.w.transpose() * da;
            dh_next = prm.u.transpose() * da;
            dc_next = dc.cwiseProduct(lc.f[ts]);
        }
        dh_out = std::move(dx); // becomes the output gradient of the layer below
    }

    for (const LstmLayer& g : grad.layers)
        if (!g.w.allFinite() || !g.u.allFinite() || !g.b.allFinite())
            throw Error("numeric", "non-finite gradient detected");
    if (!grad.head_w.allFinite() || !grad.head_b.allFinite())
        throw Error("numeric", "non-finite gradient detected");
    return grad;
}

double grad_check(Model& model, const WindowSample& sample, double eps) {
    if (!(eps > 0)) throw Error("usage", "grad_check eps must be > 0");
    Batch batch = make_batch(model, {&sample});
    ForwardCache cache = forward_batch(model, batch);
    Gradients analytic = backward_batch(model, batch, cache);

    std::vector<double*> grads;
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        grads.push_back(analytic.layers[l].w.data());
        grads.push_back(analytic.layers[l].u.data());
        grads.push_back(analytic.layers[l].b.data());
    }
    grads.push_back(analytic.head_w.data());
    grads.push_back(analytic.head_b.data());

    double worst = 0;
    auto refs = model.tensors();
    for (std::size_t t = 0; t < refs.size(); ++t) {
        Eigen::Index count = refs[t].rows * refs[t].cols;
        for (Eigen::Index idx = 0; idx < count; ++idx) {
            double saved = refs[t].data[idx];
            refs[t].data[idx] = saved + eps;
            double up = batch_loss(forward_batch(model, batch), batch.labels);
            refs[t].data[idx] = saved - eps;
            double down = batch_loss(forward_batch(model, batch), batch.labels);
            refs[t].data[idx] = saved;
            double numeric = (up - down) / (2 * eps);
            double a = grads[t][idx];
            double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
            worst = std::max(worst, rel);
        }
    }
    return worst;
}

namespace {

struct AdamState {
    Gradients m, v;
    long step = 0;
};

double global_norm(const Gradients& g) {
    double sq = 0;
    for (const LstmLayer& l : g.layers)
        sq += l.w.squaredNorm() + l.u.squaredNorm() + l.b.squaredNorm();
    sq += g.head_w.squaredNorm() + g.head_b.squaredNorm();
    return std::sqrt(sq);
}

void scale_gradients(Gradients& g, double s) {
    for (LstmLayer& l : g.layers) {
        l.w *= s;
        l.u *= s;
        l.b *= s;
    }
    g.head_w *= s;
    g.head_b *= s;
}

template <typename M>
void adam_update_tensor(M& param, const M& grad, M& m, M& v, const TrainConfig& cfg,
                        double bias1, double bias2) {
    m = cfg.beta1 * m + (1 - cfg.beta1) * grad;
    v.array() = cfg.beta2 * v.array() + (1 - cfg.beta2) * grad.array().square();
    param.array() -= cfg.learning_rate * (m.array() / bias1) /
                     ((v.array() / bias2).sqrt() + cfg.adam_eps);
}

void apply_update(Model& model, Gradients& grad, const TrainConfig& cfg, AdamState& adam) {
    if (cfg.gradient_clip) {
        double norm = global_norm(grad);
        if (norm > *cfg.gradient_clip) scale_gradients(grad, *cfg.gradient_clip / norm);
    }
    if (cfg.optimizer == TrainConfig::Optimizer::Sgd) {
        for (std::size_t l = 0; l < model.layers.size(); ++l) {
            model.layers[l].w -= cfg.learning_rate * grad.layers[l].w;
            model.layers[l].u -= cfg.learning_rate * grad.layers[l].u;
            model.layers[l].b -= cfg.learning_rate * grad.layers[l].b;
        }
        model.head_w -= cfg.learning_rate * grad.head_w;
        model.head_b -= cfg.learning_rate * grad.head_b;
        return;
    }
    ++adam.step;
    double bias1 = 1 - std::pow(cfg.beta1, adam.step);
    double bias2 = 1 - std::pow(cfg.beta2, adam.step);
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        adam_update_tensor(model.layers[l].w, grad.layers[l].w, adam.m.layers[l].w,
                           adam.v.layers[l].w, cfg, bias1, bias2);
        adam_update_tensor(model.layers[l].u, grad.layers[l].u, adam.m.layers[l].u,
                           adam.v.layers[l].u, cfg, bias1, bias2);
        adam_update_tensor(model.layers[l].b, grad.layers[l].b, adam.m.layers[l].b,
                           adam.v.layers[l].b, cfg, bias1, bias2);
    }
    adam_update_tensor(model.head_w, grad.head_w, adam.m.head_w, adam.v.head_w, cfg, bias1, bias2);
    adam_update_tensor(model.head_b, grad.head_b, adam.m.head_b, adam.v.head_b, cfg, bias1, bias2);
}

std::vector<double> inverse_frequency_weights(const Dataset& ds,
                                              const std::vector<std::size_t>& indices) {
    std::vector<double> counts(kNumClasses, 0.0);
    for (std::size_t i : indices) counts[static_cast<std::size_t>(ds.samples[i].label.index)] += 1;
    std::vector<double> w(kNumClasses, 0.0);
    for (std::size_t c = 0; c < w.size(); ++c)
        if (counts[c] > 0)
            w[c] = static_cast<double>(indices.size()) /
                   (static_cast<double>(w.size()) * counts[c]);
    return w;
}

// Mean CCE + confusion matrix over `indices`, in evaluation batches.
struct EvalResult {
    double cce = 0;
    ConfusionMatrix cm{8};
};

EvalResult evaluate_with_loss(const Model& model, const Dataset& ds,
                              const std::vector<std::size_t>& indices) {
    EvalResult res;
    std::vector<int> truths, preds;
    double total = 0;
    const std::size_t chunk = 256;
    for (std::size_t start = 0; start < indices.size(); start += chunk) {
        std::size_t end = std::min(indices.size(), start + chunk);
        std::vector<const WindowSample*> ptrs;
        for (std::size_t i = start; i < end; ++i) ptrs.push_back(&ds.samples[indices[i]]);
        Batch batch = make_batch(model, ptrs);
        ForwardCache cache = forward_batch(model, batch);
        total += batch_loss(cache, batch.labels) * static_cast<double>(batch.size());
        for (Eigen::Index j = 0; j < batch.size(); ++j) {
            Eigen::Index best = 0;
            cache.probs.col(j).maxCoeff(&best);
            truths.push_back(batch.labels[static_cast<std::size_t>(j)]);
            preds.push_back(static_cast<int>(best));
        }
    }
    res.cce = total / static_cast<double>(indices.size());
    res.cm = confusion(truths, preds, kNumClasses);
    return res;
}

struct FoldOutcome {
    Model model;
    std::vector<EpochRecord> curve;
};

FoldOutcome train_fold(const Dataset& ds, const std::vector<std::size_t>& train_idx,
                       const std::vector<std::size_t>& val_idx, int fold,
                       const ModelConfig& model_cfg, const TrainConfig& cfg,
                       const TimeScaling& scaling) {
    FoldOutcome out;
    std::uint64_t fold_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(fold));
    out.model = init_model(model_cfg, fold_seed, scaling);
    std::mt19937_64 shuffle_rng(mix_seed(fold_seed, 0x51ULL));

    std::vector<double> weights;
    const std::vector<double>* weights_ptr = nullptr;
    if (cfg.class_weighting) {
        weights = inverse_frequency_weights(ds, train_idx);
        weights_ptr = &weights;
    }

    AdamState adam{zero_gradients(out.model), zero_gradients(out.model), 0};
    std::vector<std::size_t> order = train_idx;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double loss_sum = 0;
        std::size_t seen = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size)) {
            std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            std::vector<const WindowSample*> ptrs;
            for (std::size_t i = start; i < end; ++i) ptrs.push_back(&ds.samples[order[i]]);
            Batch batch = make_batch(out.model, ptrs);
            ForwardCache cache = forward_batch(out.model, batch);
            double loss = batch_loss(cache, batch.labels, weights_ptr);
            if (!std::isfinite(loss))
                throw Error("numeric", "non-finite loss in fold " + std::to_string(fold) +
                                           ", epoch " + std::to_string(epoch));
            loss_sum += loss * static_cast<double>(batch.size());
            seen += ptrs.size();
            Gradients grad = backward_batch(out.model, batch, cache, weights_ptr);
            apply_update(out.model, grad, cfg, adam);
        }

        EpochRecord rec;
        rec.fold = fold;
        rec.epoch = epoch;
        rec.train_cce = loss_sum / static_cast<double>(seen);
        if (!val_idx.empty()) {
            EvalResult ev = evaluate_with_loss(out.model, ds, val_idx);
            rec.val_cce = ev.cce;
            rec.val_ac = average_accuracy(ev.cm);
            for (std::size_t c = 0; c < kNumClasses; ++c) {
                rec.precision[c] = precision(ev.cm, c);
                rec.recall[c] = recall(ev.cm, c);
            }
        }
        out.curve.push_back(rec);
    }
    return out;
}

} // namespace

TrainResult train(const Dataset& dataset, const FoldSplit& folds, const ModelConfig& model_cfg,
                  const TrainConfig& train_cfg) {
    if (dataset.samples.empty()) throw Error("usage", "cannot train on an empty dataset");
    if (folds.assignment.size() != dataset.samples.size())
        throw Error("usage", "fold split does not match the dataset");
    if (train_cfg.epochs < 1 || train_cfg.batch_size < 1 || !(train_cfg.learning_rate > 0))
        throw Error("usage", "invalid training configuration");
    if (model_cfg.input_dim != dataset.width + 1)
        throw Error("usage", "model input_dim must be dataset width + 1");
    if (model_cfg.window_length != dataset.window_length)
        throw Error("usage", "model window length must match the dataset");

    std::vector<std::vector<std::size_t>> fold_members(static_cast<std::size_t>(folds.k));
    for (std::size_t i = 0; i < folds.assignment.size(); ++i)
        fold_members[static_cast<std::size_t>(folds.assignment[i])].push_back(i);

    std::vector<FoldOutcome> outcomes(static_cast<std::size_t>(folds.k));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(folds.k));

    unsigned hw = std::thread::hardware_concurrency();
    unsigned cap = train_cfg.max_threads > 0 ? static_cast<unsigned>(train_cfg.max_threads)
                                             : (hw ? hw : 1);
    cap = std::max(1u, std::min(cap, static_cast<unsigned>(folds.k)));

    auto run_fold = [&](int j) {
        try {
            std::vector<std::size_t> train_idx, val_idx;
            for (int f = 0; f < folds.k; ++f)
                for (std::size_t i : fold_members[static_cast<std::size_t>(f)])
                    (f == j ? val_idx : train_idx).push_back(i);
            outcomes[static_cast<std::size_t>(j)] =
                train_fold(dataset, train_idx, val_idx, j, model_cfg, train_cfg, dataset.scaling);
        } catch (...) {
            errors[static_cast<std::size_t>(j)] = std::current_exception();
        }
    };

    for (int base = 0; base < folds.k; base += static_cast<int>(cap)) {
        std::vector<std::thread> pool;
        for (int j = base; j < std::min(folds.k, base + static_cast<int>(cap)); ++j)
            pool.emplace_back(run_fold, j);
        for (std::thread& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    TrainResult result;
    for (FoldOutcome& o : outcomes) {
        result.models.push_back(std::move(o.model));
        for (EpochRecord& r : o.curve) result.curves.push_back(r);
    }
    return result;
}

Model train_single(const Dataset& dataset, const ModelConfig& model_cfg,
                   const TrainConfig& train_cfg, std::vector<double>* epoch_cce) {
    if (dataset.samples.empty()) throw Error("usage", "cannot train on an empty dataset");
    std::vector<std::size_t> all(dataset.samples.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    FoldOutcome out = train_fold(dataset, all, {}, 0, model_cfg, train_cfg, dataset.scaling);
    if (epoch_cce)
        for (const EpochRecord& r : out.curve) epoch_cce->push_back(r.train_cce);
    return std::move(out.model);
}

Prediction predict(const Model& model, const WindowSample& sample) {
    Prediction p;
    p.distribution = forward(model, sample);
    // argmax with lowest-index tie-breaking
    p.cls = 0;
    for (int i = 1; i < p.distribution.size(); ++i)
        if (p.distribution(i) > p.distribution(p.cls)) p.cls = i;
    return p;
}

ConfusionMatrix evaluate(const Model& model, const Dataset& dataset,
                         const std::vector<std::size_t>& indices) {
    return evaluate_with_loss(model, dataset, indices).cm;
}

std::string write_checkpoint(const Model& model) {
    std::ostringstream out;
    out << "format=1\n";
    out << "input_dim=" << model.config.input_dim << "\n";
    out << "hidden=" << model.config.hidden << "\n";
    out << "layers=" << model.config.lstm_layers << "\n";
    out << "classes=" << model.config.num_classes << "\n";
    out << "window=" << model.config.window_length << "\n";
    out << "time_scale=" << format_time_scaling(model.scaling) << "\n";
    char buf[40];
    Model& m = const_cast<Model&>(model);
    for (const Model::TensorRef& t : m.tensors()) {
        out << "tensor " << t.name << ' ' << t.rows << ' ' << t.cols;
        Eigen::Index count = t.rows * t.cols;
        for (Eigen::Index i = 0; i < count; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", t.data[i]);
            out << ' ' << buf;
        }
        out << "\n";
    }
    return out.str();
}

Model read_checkpoint(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    ModelConfig cfg;
    TimeScaling scaling = TimeScaling::none();
    bool format_seen = false;

    std::vector<std::pair<std::string, std::vector<double>>> tensors;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> shapes;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("format=", 0) == 0) {
            if (line != "format=1") throw Error("parse", "unsupported checkpoint format");
            format_seen = true;
        } else if (line.rfind("input_dim=", 0) == 0) cfg.input_dim = std::stoi(line.substr(10));
        else if (line.rfind("hidden=", 0) == 0) cfg.hidden = std::stoi(line.substr(7));
        else if (line.rfind("layers=", 0) == 0) cfg.lstm_layers = std::stoi(line.substr(7));
        else if (line.rfind("classes=", 0) == 0) cfg.num_classes = std::stoi(line.substr(8));
        else if (line.rfind("window=", 0) == 0) cfg.window_length = std::stoi(line.substr(7));
        else if (line.rfind("time_scale=", 0) == 0) scaling = parse_time_scaling(line.substr(11));
        else if (line.rfind("tensor ", 0) == 0) {
            std::istringstream ls(line.substr(7));
            std::string name;
            Eigen::Index rows, cols;
            ls >> name >> rows >> cols;
            std::vector<double> values;
            values.reserve(static_cast<std::size_t>(rows * cols));
            double v;
            while (ls >> v) values.push_back(v);
            if (static_cast<Eigen::Index>(values.size()) != rows * cols)
                throw Error("parse", "checkpoint tensor '" + name + "': value count mismatch");
            tensors.emplace_back(name, std::move(values));
            shapes.emplace_back(rows, cols);
        } else
            throw Error("parse", "unknown checkpoint line: " + line);
    }
    if (!format_seen) throw Error("parse", "checkpoint missing format= header");

    Model model = init_model(cfg, 0, scaling);
    auto refs = model.tensors();
    if (refs.size() != tensors.size())
        throw Error("parse", "checkpoint tensor count does not match the config");
    for (std::size_t i = 0; i < refs.size(); ++i) {
        if (refs[i].name != tensors[i].first || refs[i].rows != shapes[i].first ||
            refs[i].cols != shapes[i].second)
            throw Error("parse", "checkpoint tensor '" + tensors[i].first +
                                     "' does not match the expected shape/order");
        std::copy(tensors[i].second.begin(), tensors[i].second.end(), refs[i].data);
    }
    return model;
}

void save_checkpoint(const Model& model, const std::string& path) {
    write_file(path, write_checkpoint(model));
}

Model load_checkpoint(const std::string& path) { return read_checkpoint(read_file(path)); }

namespace {

std::string opt_field(const std::optional<double>& v) {
    if (!v) return "undefined";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", *v);
    return buf;
}

} // namespace

std::string write_curves_csv(const std::vector<EpochRecord>& curves) {
    std::ostringstream out;
    out << "fold,epoch,train_cce,val_cce,val_ac";
    for (int i = 0; i < kNumClasses; ++i) out << ",p_" << i;
    for (int i = 0; i < kNumClasses; ++i) out << ",r_" << i;
    out << "\n";
    char buf[32];
    for (const EpochRecord& r : curves) {
        out << r.fold << ',' << r.epoch;
        for (double v : {r.train_cce, r.val_cce, r.val_ac}) {
            std::snprintf(buf, sizeof buf, "%.9g", v);
            out << ',' << buf;
        }
        for (const auto& v : r.precision) out << ',' << opt_field(v);
        for (const auto& v : r.recall) out << ',' << opt_field(v);
        out << "\n";
    }
    return out.str();
}

std::vector<EpochRecord> read_curves_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("fold,epoch,", 0) != 0)
        throw Error("parse", "curves CSV missing its header row");
    std::vector<EpochRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f);
        if (fields.size() != 5 + 2 * kNumClasses)
            throw Error("parse", "curves CSV row has wrong field count");
        EpochRecord r;
        r.fold = std::stoi(fields[0]);
        r.epoch = std::stoi(fields[1]);
        r.train_cce = std::stod(fields[2]);
        r.val_cce = std::stod(fields[3]);
        r.val_ac = std::stod(fields[4]);
        for (int i = 0; i < kNumClasses; ++i) {
            if (fields[5 + i] != "undefined")
                r.precision[static_cast<std::size_t>(i)] = std::stod(fields[5 + i]);
            if (fields[5 + kNumClasses + i] != "undefined")
                r.recall[static_cast<std::size_t>(i)] = std::stod(fields[5 + kNumClasses + i]);
        }
        out.push_back(r);
    }
    return out;
}

} // namespace deslab
