#include "deslab/error.hpp"
#include "deslab/nn.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace deslab;

namespace {

WindowSample random_sample(std::mt19937_64& rng, int n, int width) {
    WindowSample s;
    s.label.index = static_cast<int>(rng() % 8);
    for (int t = 0; t < n; ++t) {
        TimedIOVector v;
        v.t_rel = static_cast<double>(rng() % 2000) / 1000.0;
        for (int j = 0; j < width; ++j) v.values.push_back(rng() & 1);
        s.window.push_back(std::move(v));
    }
    return s;
}

Dataset random_dataset(std::mt19937_64& rng, int count, int n, int width) {
    Dataset ds;
    ds.window_length = n;
    ds.width = width;
    ds.scaling = TimeScaling::none();
    for (int i = 0; i < count; ++i) {
        ds.samples.push_back(random_sample(rng, n, width));
        ds.run_ids.push_back(i);
    }
    return ds;
}

double sigmoid_scalar(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Independent scalar-by-scalar LSTM recurrence, no linear algebra library:
// gate order i, f, g, o, head on the final hidden state, stable softmax.
std::vector<double> scalar_forward(const Model& m, const WindowSample& s) {
    const int H = m.config.hidden;
    std::vector<std::vector<double>> h(m.layers.size(), std::vector<double>(H, 0.0));
    std::vector<std::vector<double>> c(m.layers.size(), std::vector<double>(H, 0.0));

    for (const TimedIOVector& vec : s.window) {
        std::vector<double> x;
        for (std::uint8_t b : vec.values) x.push_back(b ? 1.0 : 0.0);
        x.push_back(m.scaling.apply(vec.t_rel));

        for (std::size_t l = 0; l < m.layers.size(); ++l) {
            const LstmLayer& L = m.layers[l];
            std::vector<double> nh(H), nc(H);
            for (int j = 0; j < H; ++j) {
                auto pre = [&](int block) {
                    double a = L.b(block * H + j);
                    for (int k = 0; k < static_cast<int>(x.size()); ++k)
                        a += L.w(block * H + j, k) * x[static_cast<std::size_t>(k)];
                    for (int k = 0; k < H; ++k)
                        a += L.u(block * H + j, k) * h[l][static_cast<std::size_t>(k)];
                    return a;
                };
                double gi = sigmoid_scalar(pre(0));
                double gf = sigmoid_scalar(pre(1));
                double gg = std::tanh(pre(2));
                double go = sigmoid_scalar(pre(3));
                nc[static_cast<std::size_t>(j)] = gf * c[l][static_cast<std::size_t>(j)] + gi * gg;
                nh[static_cast<std::size_t>(j)] =
                    go * std::tanh(nc[static_cast<std::size_t>(j)]);
            }
            h[l] = nh;
            c[l] = nc;
            x = h[l];
        }
    }

    std::vector<double> logits(static_cast<std::size_t>(m.config.num_classes));
    for (int i = 0; i < m.config.num_classes; ++i) {
        double a = m.head_b(i);
        for (int k = 0; k < H; ++k) a += m.head_w(i, k) * h.back()[static_cast<std::size_t>(k)];
        logits[static_cast<std::size_t>(i)] = a;
    }
    double mx = *std::max_element(logits.begin(), logits.end());
    double z = 0;
    for (double& v : logits) {
        v = std::exp(v - mx);
        z += v;
    }
    for (double& v : logits) v /= z;
    return logits;
}

} // namespace

TEST_CASE("parameter shapes follow the gate stacking") {
    ModelConfig cfg;
    cfg.input_dim = 34;
    cfg.hidden = 4;
    cfg.lstm_layers = 2;
    Model m = init_model(cfg, 1);
    REQUIRE(m.layers.size() == 2);
    CHECK(m.layers[0].w.rows() == 16);
    CHECK(m.layers[0].w.cols() == 34);
    CHECK(m.layers[1].w.cols() == 4); // stacked layer consumes h of the layer below
    CHECK(m.layers[0].u.rows() == 16);
    CHECK(m.layers[0].u.cols() == 4);
    CHECK(m.head_w.rows() == 8);
    CHECK(m.head_w.cols() == 4);
    // forget-gate bias block initialized to 1, the rest to 0
    for (int j = 0; j < 4; ++j) {
        CHECK(m.layers[0].b(j) == 0.0);
        CHECK(m.layers[0].b(4 + j) == 1.0);
        CHECK(m.layers[0].b(8 + j) == 0.0);
        CHECK(m.layers[0].b(12 + j) == 0.0);
    }
    CHECK(m.parameter_count() ==
          16 * 34 + 16 * 4 + 16    // layer 0
              + 16 * 4 + 16 * 4 + 16 // layer 1
              + 8 * 4 + 8);           // head
}

TEST_CASE("forward matches an independent scalar recurrence") {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        ModelConfig cfg;
        cfg.input_dim = 3; // width 2 + t_rel
        cfg.hidden = 3;
        cfg.lstm_layers = 1 + static_cast<int>(trial % 2);
        cfg.window_length = 2;
        Model m = init_model(cfg, 1000 + static_cast<std::uint64_t>(trial), TimeScaling::none());
        WindowSample s = random_sample(rng, 2, 2);

        Eigen::VectorXd probs = forward(m, s);
        std::vector<double> oracle = scalar_forward(m, s);
        REQUIRE(probs.size() == 8);
        for (int i = 0; i < 8; ++i)
            CHECK(probs(i) == doctest::Approx(oracle[static_cast<std::size_t>(i)]).epsilon(1e-12));
    }
}

TEST_CASE("softmax and CCE invariants over random forwards") {
    std::mt19937_64 rng(77);
    ModelConfig cfg;
    cfg.input_dim = 4;
    cfg.hidden = 5;
    cfg.window_length = 3;
    for (int trial = 0; trial < 1000; ++trial) {
        Model m = init_model(cfg, rng(), TimeScaling::none());
        WindowSample s = random_sample(rng, 3, 3);
        Eigen::VectorXd p = forward(m, s);
        CHECK(std::abs(p.sum() - 1.0) < 1e-9);
        for (int i = 0; i < p.size(); ++i) {
            CHECK(p(i) > 0.0);
            CHECK(p(i) < 1.0);
        }

        // argmax invariant under a constant shift of the dense bias
        Eigen::Index argmax_before;
        p.maxCoeff(&argmax_before);
        Model shifted = m;
        shifted.head_b.array() += 3.7;
        Eigen::Index argmax_after;
        forward(shifted, s).maxCoeff(&argmax_after);
        CHECK(argmax_before == argmax_after);
    }

    Eigen::VectorXd uniform = Eigen::VectorXd::Constant(8, 1.0 / 8.0);
    CHECK(std::abs(cce_loss(uniform, 3) - std::log(8.0)) < 1e-12);

    Eigen::VectorXd tiny = Eigen::VectorXd::Zero(8);
    CHECK(std::isfinite(cce_loss(tiny, 0))); // clamped, no -inf
}

TEST_CASE("dense-layer gradient equals the softmax-CCE closed form") {
    std::mt19937_64 rng(91);
    ModelConfig cfg;
    cfg.input_dim = 4;
    cfg.hidden = 4;
    cfg.window_length = 3;
    Model m = init_model(cfg, 5, TimeScaling::none());

    std::vector<WindowSample> samples;
    for (int i = 0; i < 6; ++i) samples.push_back(random_sample(rng, 3, 3));
    std::vector<const WindowSample*> ptrs;
    for (const auto& s : samples) ptrs.push_back(&s);
    Batch batch = make_batch(m, ptrs);
    ForwardCache cache = forward_batch(m, batch);
    Gradients g = backward_batch(m, batch, cache);

    // d head_w = mean over batch of (p - y) h_final^T
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(8, 4);
    Eigen::VectorXd expected_b = Eigen::VectorXd::Zero(8);
    const Eigen::MatrixXd& h_final = cache.layers.back().h.back();
    for (int j = 0; j < batch.size(); ++j) {
        Eigen::VectorXd d = cache.probs.col(j);
        d(batch.labels[static_cast<std::size_t>(j)]) -= 1.0;
        expected += d * h_final.col(j).transpose();
        expected_b += d;
    }
    expected /= static_cast<double>(batch.size());
    expected_b /= static_cast<double>(batch.size());
    CHECK((g.head_w - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((g.head_b - expected_b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("finite-difference gradient check on small models") {
    std::mt19937_64 rng(303);
    for (int trial = 0; trial < 3; ++trial) {
        ModelConfig cfg;
        cfg.input_dim = 4; // width 3 + t_rel
        cfg.hidden = 4;
        cfg.window_length = 3;
        Model m = init_model(cfg, 400 + static_cast<std::uint64_t>(trial), TimeScaling::none());
        WindowSample s = random_sample(rng, 3, 3);
        CHECK(grad_check(m, s, 1e-5) < 1e-4);
    }
}

TEST_CASE("prediction breaks argmax ties at the lowest index") {
    ModelConfig cfg;
    cfg.input_dim = 3;
    cfg.hidden = 2;
    cfg.window_length = 1;
    Model m = init_model(cfg, 9, TimeScaling::none());
    // zero head weights and bias -> exactly uniform output
    m.head_w.setZero();
    m.head_b.setZero();
    std::mt19937_64 rng(1);
    Prediction p = predict(m, random_sample(rng, 1, 2));
    CHECK(p.cls == 0);
    CHECK(p.distribution(0) == doctest::Approx(0.125));
}

TEST_CASE("training a single model overfits a tiny dataset") {
    std::mt19937_64 rng(121);
    Dataset ds = random_dataset(rng, 12, 3, 3);
    ModelConfig mcfg;
    mcfg.input_dim = 4;
    mcfg.hidden = 16;
    mcfg.window_length = 3;
    TrainConfig tcfg;
    tcfg.epochs = 500;
    tcfg.batch_size = 12;
    tcfg.seed = 2;

    std::vector<double> epoch_cce;
    Model m = train_single(ds, mcfg, tcfg, &epoch_cce);
    REQUIRE(epoch_cce.size() == 500);
    CHECK(epoch_cce.back() < epoch_cce.front());

    std::vector<std::size_t> all(ds.samples.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    CHECK(average_accuracy(evaluate(m, ds, all)) == 1.0);
}

TEST_CASE("k-fold training is deterministic and fold-count shaped") {
    std::mt19937_64 rng(131);
    Dataset ds = random_dataset(rng, 40, 3, 3);
    ModelConfig mcfg;
    mcfg.input_dim = 4;
    mcfg.hidden = 6;
    mcfg.window_length = 3;
    TrainConfig tcfg;
    tcfg.epochs = 3;
    tcfg.batch_size = 8;
    tcfg.seed = 77;
    tcfg.max_threads = 2;

    FoldSplit folds = kfold(ds, 3, 77);
    TrainResult a = train(ds, folds, mcfg, tcfg);
    TrainResult b = train(ds, folds, mcfg, tcfg);
    REQUIRE(a.models.size() == 3);
    REQUIRE(a.curves.size() == 9);
    for (std::size_t f = 0; f < 3; ++f)
        CHECK(write_checkpoint(a.models[f]) == write_checkpoint(b.models[f]));
    for (std::size_t i = 0; i < a.curves.size(); ++i) {
        CHECK(a.curves[i].train_cce == b.curves[i].train_cce);
        CHECK(a.curves[i].val_ac == b.curves[i].val_ac);
    }
}

TEST_CASE("checkpoint round-trips bit-exactly") {
    ModelConfig cfg;
    cfg.input_dim = 5;
    cfg.hidden = 7;
    cfg.lstm_layers = 2;
    cfg.window_length = 4;
    Model m = init_model(cfg, 424242, TimeScaling::log1p());
    std::string text = write_checkpoint(m);
    Model back = read_checkpoint(text);
    CHECK(back.config == cfg);
    CHECK(back.scaling == m.scaling);
    CHECK(write_checkpoint(back) == text);

    std::mt19937_64 rng(3);
    WindowSample s = random_sample(rng, 4, 4);
    Eigen::VectorXd pa = forward(m, s), pb = forward(back, s);
    CHECK((pa - pb).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(read_checkpoint("format=2\n"), Error);
}

TEST_CASE("curves CSV round-trips, undefined markers included") {
    std::vector<EpochRecord> curves(2);
    curves[0] = {0, 0, 2.07, 2.0, 0.5, {}, {}};
    curves[0].precision[1] = 0.25;
    curves[0].recall[1] = 0.75;
    curves[1] = {1, 0, 1.9, 1.8, 0.625, {}, {}};
    std::string csv = write_curves_csv(curves);
    CHECK(csv.find("undefined") != std::string::npos);
    auto back = read_curves_csv(csv);
    REQUIRE(back.size() == 2);
    CHECK(back[0].train_cce == curves[0].train_cce);
    CHECK(back[0].precision[1] == curves[0].precision[1]);
    CHECK_FALSE(back[0].precision[0].has_value());
    CHECK(back[1].fold == 1);
}

TEST_CASE("train validates dataset/model dimension agreement") {
    std::mt19937_64 rng(5);
    Dataset ds = random_dataset(rng, 10, 3, 3);
    ModelConfig bad;
    bad.input_dim = 9;
    bad.window_length = 3;
    bad.hidden = 4;
    CHECK_THROWS_AS(train(ds, kfold(ds, 2, 1), bad, TrainConfig{}), Error);
}
