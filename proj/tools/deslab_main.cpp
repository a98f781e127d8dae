// deslab: simulate a boolean-signal plant, inject faults, build windowed
// datasets, train/evaluate an LSTM diagnoser, and replay diagnoses.
#include "deslab/diagnoser.hpp"
#include "deslab/error.hpp"
#include "deslab/manifest.hpp"
#include "deslab/metrics.hpp"
#include "deslab/nn.hpp"
#include "deslab/plant.hpp"
#include "deslab/plot.hpp"
#include "deslab/seed.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace deslab;

namespace {

PlantDescription load_plant(const std::string& path) {
    if (path.empty()) return parse_plant(import_station_text());
    return parse_plant(read_file(path));
}

std::string plant_label(const std::string& path) { return path.empty() ? "<builtin>" : path; }

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("io", "cannot create directory '" + dir + "': " + ec.message());
}

int env_threads() {
    if (const char* v = std::getenv("DESLAB_THREADS")) {
        int n = std::atoi(v);
        if (n > 0) return n;
    }
    return 0;
}

std::string run_file_name(std::size_t index, int label) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "run_%03zu_C%d.csv", index, label);
    return buf;
}

void print_histogram(const Dataset& ds) {
    std::map<int, std::size_t> hist;
    for (const WindowSample& s : ds.samples) hist[s.label.index]++;
    std::cout << "samples: " << ds.samples.size() << " (N=" << ds.window_length
              << ", width=" << ds.width << ")\n";
    for (const auto& [label, count] : hist)
        std::cout << "  C" << label << ": " << count << "\n";
}

// --- subcommand bodies ---------------------------------------------------

struct CommonOpts {
    std::string plant_path;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
};

void cmd_simulate(const CommonOpts& common, std::int64_t horizon_ms) {
    PlantDescription plant = load_plant(common.plant_path);
    ChangeLog log = run_scenario(plant, horizon_ms, {}, common.seed);
    log.label = 0;

    ensure_dir(common.out_dir);
    std::string log_path = (fs::path(common.out_dir) / "normal.csv").string();
    save_changelog(log, log_path);

    RunManifest manifest{"simulate", plant_label(common.plant_path), "", common.seed,
                         horizon_ms,  common.out_dir,                {}};
    manifest.add_artifact(log_path);
    save_manifest(manifest, (fs::path(common.out_dir) / "manifest.json").string());
    std::cout << "wrote " << log_path << " (" << log.records.size() << " records, "
              << plant.width() << " signals)\n";
}

void write_scenario_logs(const PlantDescription& plant, const std::vector<Scenario>& suite,
                         std::int64_t horizon_ms, const CommonOpts& common,
                         const std::string& scenario_path, RunManifest& manifest) {
    for (std::size_t i = 0; i < suite.size(); ++i) {
        const Scenario& sc = suite[i];
        std::vector<FaultSpec> faults;
        if (sc.fault) faults.push_back(*sc.fault);
        ChangeLog log = run_scenario(plant, horizon_ms, faults, mix_seed(common.seed, i));
        log.label = sc.label.index;
        if (sc.fault) log.inject_ms = sc.fault->inject_ms;
        std::string path =
            (fs::path(common.out_dir) / run_file_name(i, sc.label.index)).string();
        save_changelog(log, path);
        manifest.add_artifact(path);
    }
    manifest.command = "inject";
    manifest.scenario_path = scenario_path;
    manifest.horizon_ms = horizon_ms;
    save_manifest(manifest, (fs::path(common.out_dir) / "manifest.json").string());
    std::cout << "wrote " << suite.size() << " labeled logs to " << common.out_dir << "\n";
}

void cmd_inject(const CommonOpts& common, const std::string& scenario_path, int per_class,
                std::int64_t horizon_ms) {
    PlantDescription plant = load_plant(common.plant_path);
    LabelCatalog catalog = LabelCatalog::import_station();
    ensure_dir(common.out_dir);

    RunManifest manifest{"inject", plant_label(common.plant_path), "", common.seed,
                         horizon_ms, common.out_dir,               {}};

    std::vector<Scenario> suite;
    std::string scenario_label = scenario_path;
    if (!scenario_path.empty()) {
        for (const auto& faults : parse_scenario_file(read_file(scenario_path)))
            suite.push_back({faults.empty() ? std::nullopt : std::optional<FaultSpec>(faults[0]),
                             label_for(faults, catalog)});
    } else {
        suite = scenario_suite(catalog, plant, per_class, horizon_ms, common.seed);
        // keep the generated suite next to the logs for the record
        std::ostringstream text;
        for (const Scenario& sc : suite)
            text << format_scenario(sc.fault ? std::vector<FaultSpec>{*sc.fault}
                                             : std::vector<FaultSpec>{})
                 << "\n";
        scenario_label = (fs::path(common.out_dir) / "scenarios.txt").string();
        write_file(scenario_label, text.str());
        manifest.add_artifact(scenario_label);
    }
    write_scenario_logs(plant, suite, horizon_ms, common, scenario_label, manifest);
}

void cmd_dataset(const std::vector<std::string>& log_paths, int n, int stride,
                 const std::string& scale_text, bool drop_preinject, const std::string& out_path) {
    if (log_paths.empty()) throw Error("usage", "no change logs given");
    TimeScaling scale = parse_time_scaling(scale_text);
    LabelCatalog catalog = LabelCatalog::import_station();

    Dataset ds;
    int run_id = 0;
    for (const std::string& path : log_paths)
        append_log_to_dataset(ds, load_changelog(path), n, stride, scale, catalog, run_id++,
                              !drop_preinject);
    save_dataset(ds, out_path);
    print_histogram(ds);
    std::cout << "wrote " << out_path << "\n";
}

void cmd_train(const CommonOpts& common, const std::string& dataset_path, int k, int hidden,
               int lstm_layers, double lr, int epochs, int batch, const std::string& optimizer,
               double clip, bool class_weighting) {
    Dataset ds = load_dataset(dataset_path);

    ModelConfig model_cfg;
    model_cfg.input_dim = ds.width + 1;
    model_cfg.hidden = hidden;
    model_cfg.lstm_layers = lstm_layers;
    model_cfg.window_length = ds.window_length;

    TrainConfig train_cfg;
    train_cfg.learning_rate = lr;
    train_cfg.epochs = epochs;
    train_cfg.batch_size = batch;
    train_cfg.seed = common.seed;
    train_cfg.class_weighting = class_weighting;
    train_cfg.max_threads = env_threads();
    if (optimizer == "sgd") train_cfg.optimizer = TrainConfig::Optimizer::Sgd;
    else if (optimizer != "adam") throw Error("usage", "optimizer must be adam or sgd");
    if (clip > 0) train_cfg.gradient_clip = clip;
    else train_cfg.gradient_clip.reset();

    FoldSplit folds = kfold(ds, k, common.seed);
    TrainResult result = train(ds, folds, model_cfg, train_cfg);

    ensure_dir(common.out_dir);
    RunManifest manifest{"train", "", dataset_path, common.seed, 0, common.out_dir, {}};
    for (int j = 0; j < k; ++j) {
        std::string path =
            (fs::path(common.out_dir) / ("fold_" + std::to_string(j) + ".ckpt")).string();
        save_checkpoint(result.models[static_cast<std::size_t>(j)], path);
        manifest.add_artifact(path);
    }
    std::string curves_path = (fs::path(common.out_dir) / "curves.csv").string();
    write_file(curves_path, write_curves_csv(result.curves));
    manifest.add_artifact(curves_path);

    std::ostringstream folds_csv;
    folds_csv << "sample,fold\n";
    for (std::size_t i = 0; i < folds.assignment.size(); ++i)
        folds_csv << i << ',' << folds.assignment[i] << "\n";
    std::string folds_path = (fs::path(common.out_dir) / "folds.csv").string();
    write_file(folds_path, folds_csv.str());
    manifest.add_artifact(folds_path);

    std::ostringstream summary;
    double mean_ac = 0;
    for (int j = 0; j < k; ++j) {
        const EpochRecord& last =
            result.curves[static_cast<std::size_t>(j) * static_cast<std::size_t>(epochs) +
                          static_cast<std::size_t>(epochs - 1)];
        summary << "fold " << j << ": final train_cce=" << last.train_cce
                << " val_cce=" << last.val_cce << " val_ac=" << last.val_ac << "\n";
        mean_ac += last.val_ac;
    }
    summary << "mean val_ac: " << mean_ac / k << "\n";
    std::string summary_path = (fs::path(common.out_dir) / "summary.txt").string();
    write_file(summary_path, summary.str());
    manifest.add_artifact(summary_path);
    save_manifest(manifest, (fs::path(common.out_dir) / "manifest.json").string());
    std::cout << summary.str();
}

std::vector<ConfusionMatrix> eval_checkpoints(const std::vector<std::string>& checkpoint_paths,
                                              const Dataset& ds, const std::string& folds_path) {
    std::vector<int> assignment;
    if (!folds_path.empty()) {
        std::istringstream in(read_file(folds_path));
        std::string line;
        std::getline(in, line); // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::size_t comma = line.find(',');
            if (comma == std::string::npos) throw Error("parse", "bad folds.csv row: " + line);
            assignment.push_back(std::stoi(line.substr(comma + 1)));
        }
        if (assignment.size() != ds.samples.size())
            throw Error("usage", "folds.csv does not match the dataset");
    }

    std::vector<ConfusionMatrix> cms;
    for (std::size_t j = 0; j < checkpoint_paths.size(); ++j) {
        Model model = load_checkpoint(checkpoint_paths[j]);
        if (model.config.input_dim != ds.width + 1 ||
            model.config.window_length != ds.window_length)
            throw Error("usage", "checkpoint '" + checkpoint_paths[j] +
                                     "' does not match the dataset dimensions");
        std::vector<std::size_t> indices;
        for (std::size_t i = 0; i < ds.samples.size(); ++i)
            if (assignment.empty() || assignment[i] == static_cast<int>(j)) indices.push_back(i);
        if (indices.empty())
            throw Error("usage", "no samples to evaluate for checkpoint " + std::to_string(j));
        cms.push_back(evaluate(model, ds, indices));
    }
    return cms;
}

void write_confusion_avg_csv(const std::vector<ConfusionMatrix>& cms, const std::string& path) {
    std::vector<double> avg = fold_average(cms);
    std::size_t n = cms.front().size();
    std::ostringstream out;
    char buf[32];
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            std::snprintf(buf, sizeof buf, "%.9g", avg[r * n + c]);
            out << (c ? "," : "") << buf;
        }
        out << "\n";
    }
    write_file(path, out.str());
}

void cmd_eval(const CommonOpts& common, const std::vector<std::string>& checkpoint_paths,
              const std::string& dataset_path, const std::string& folds_path) {
    Dataset ds = load_dataset(dataset_path);
    std::vector<ConfusionMatrix> cms = eval_checkpoints(checkpoint_paths, ds, folds_path);

    ensure_dir(common.out_dir);
    RunManifest manifest{"eval", "", dataset_path, common.seed, 0, common.out_dir, {}};
    std::string report_path = (fs::path(common.out_dir) / "report.txt").string();
    write_file(report_path, metrics_report(cms));
    manifest.add_artifact(report_path);
    for (std::size_t j = 0; j < cms.size(); ++j) {
        std::string path =
            (fs::path(common.out_dir) / ("metrics_fold_" + std::to_string(j) + ".csv")).string();
        write_file(path, metrics_csv(cms[j]));
        manifest.add_artifact(path);
    }
    std::string avg_path = (fs::path(common.out_dir) / "confusion_avg.csv").string();
    write_confusion_avg_csv(cms, avg_path);
    manifest.add_artifact(avg_path);
    save_manifest(manifest, (fs::path(common.out_dir) / "manifest.json").string());
    std::cout << metrics_report(cms);
}

void cmd_plot(const std::string& input_path, const std::string& series_name,
              const std::string& out_path) {
    if (series_name == "heatmap") {
        std::istringstream in(read_file(input_path));
        std::vector<double> cells;
        std::string line;
        std::size_t n = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::stringstream ls(line);
            std::string f;
            std::size_t row_cells = 0;
            while (std::getline(ls, f, ',')) {
                cells.push_back(std::stod(f));
                ++row_cells;
            }
            n = row_cells;
        }
        if (n == 0 || cells.size() != n * n)
            throw Error("parse", "heatmap input must be a square CSV matrix");
        write_file(out_path, heatmap_svg("fold-averaged normalized confusion matrix", cells, n));
        std::cout << "wrote " << out_path << "\n";
        return;
    }

    std::vector<EpochRecord> curves = read_curves_csv(read_file(input_path));
    int max_fold = 0;
    for (const EpochRecord& r : curves) max_fold = std::max(max_fold, r.fold);

    auto fold_series = [&](const std::string& prefix,
                           auto&& getter) -> std::vector<Series> {
        std::vector<Series> out;
        for (int f = 0; f <= max_fold; ++f) {
            Series s{prefix + " fold " + std::to_string(f), {}, {}};
            for (const EpochRecord& r : curves)
                if (r.fold == f) {
                    s.x.push_back(r.epoch);
                    s.y.push_back(getter(r));
                }
            out.push_back(std::move(s));
        }
        return out;
    };

    std::vector<Series> series;
    std::string title, ylabel;
    if (series_name == "loss") {
        title = "cross-entropy loss";
        ylabel = "CCE";
        auto train = fold_series("train", [](const EpochRecord& r) {
            return std::optional<double>(r.train_cce);
        });
        auto val = fold_series("val", [](const EpochRecord& r) {
            return std::optional<double>(r.val_cce);
        });
        series.insert(series.end(), train.begin(), train.end());
        series.insert(series.end(), val.begin(), val.end());
    } else if (series_name == "ac") {
        title = "average accuracy";
        ylabel = "AC";
        series = fold_series("val AC", [](const EpochRecord& r) {
            return std::optional<double>(r.val_ac);
        });
    } else if (series_name.rfind("pr", 0) == 0 && series_name.size() == 3 &&
               series_name[2] >= '0' && series_name[2] <= '7') {
        std::size_t cls = static_cast<std::size_t>(series_name[2] - '0');
        title = "precision/recall of C" + std::to_string(cls);
        ylabel = "value";
        auto p = fold_series("precision", [cls](const EpochRecord& r) { return r.precision[cls]; });
        auto rec = fold_series("recall", [cls](const EpochRecord& r) { return r.recall[cls]; });
        series.insert(series.end(), p.begin(), p.end());
        series.insert(series.end(), rec.begin(), rec.end());
    } else {
        throw Error("usage", "unknown series '" + series_name +
                                 "' (available: loss, ac, pr0..pr7, heatmap)");
    }
    write_file(out_path, line_chart_svg(title, "epoch", ylabel, series));
    std::cout << "wrote " << out_path << "\n";
}

void cmd_diagnose(const std::string& checkpoint_path, const std::string& log_path, double tau) {
    Model model = load_checkpoint(checkpoint_path);
    ChangeLog log = load_changelog(log_path);
    std::cout << "time_ms,kind,class,confidence\n";
    char buf[32];
    for (const auto& [time, v] : replay(log, model, tau)) {
        std::snprintf(buf, sizeof buf, "%.6f", v.top_confidence);
        std::cout << time << ',' << verdict_kind_name(v.kind) << ','
                  << (v.kind == Verdict::Kind::Fault ? v.fault_class
                      : v.kind == Verdict::Kind::Normal ? 0 : -1)
                  << ',' << buf << "\n";
    }
}

void cmd_demo(const CommonOpts& common, int per_class, std::int64_t horizon_ms, int n, int stride,
              int k, int hidden, int epochs) {
    std::cout << "[demo] simulating " << per_class << " runs per class\n";
    CommonOpts inject_opts = common;
    inject_opts.out_dir = (fs::path(common.out_dir) / "logs").string();
    cmd_inject(inject_opts, "", per_class, horizon_ms);

    std::vector<std::string> log_paths;
    for (const auto& entry : fs::directory_iterator(inject_opts.out_dir)) {
        std::string name = entry.path().filename().string();
        if (name.rfind("run_", 0) == 0 && entry.path().extension() == ".csv")
            log_paths.push_back(entry.path().string());
    }
    std::sort(log_paths.begin(), log_paths.end());

    std::cout << "[demo] building dataset (N=" << n << ", stride=" << stride << ")\n";
    std::string dataset_path = (fs::path(common.out_dir) / "dataset.txt").string();
    cmd_dataset(log_paths, n, stride, "div1000", false, dataset_path);

    std::cout << "[demo] training (k=" << k << ", H=" << hidden << ", epochs=" << epochs << ")\n";
    CommonOpts train_opts = common;
    train_opts.out_dir = (fs::path(common.out_dir) / "model").string();
    cmd_train(train_opts, dataset_path, k, hidden, 1, 1e-3, epochs, 32, "adam", 5.0, false);

    std::cout << "[demo] evaluating\n";
    CommonOpts eval_opts = common;
    eval_opts.out_dir = (fs::path(common.out_dir) / "eval").string();
    std::vector<std::string> ckpts;
    for (int j = 0; j < k; ++j)
        ckpts.push_back((fs::path(train_opts.out_dir) / ("fold_" + std::to_string(j) + ".ckpt"))
                            .string());
    cmd_eval(eval_opts, ckpts, dataset_path, (fs::path(train_opts.out_dir) / "folds.csv").string());

    std::cout << "[demo] plotting\n";
    std::string curves = (fs::path(train_opts.out_dir) / "curves.csv").string();
    std::string plots = (fs::path(common.out_dir) / "plots").string();
    ensure_dir(plots);
    cmd_plot(curves, "loss", (fs::path(plots) / "loss.svg").string());
    cmd_plot(curves, "ac", (fs::path(plots) / "ac.svg").string());
    for (int c = 0; c < kNumClasses; ++c)
        cmd_plot(curves, "pr" + std::to_string(c),
                 (fs::path(plots) / ("pr_" + std::to_string(c) + ".svg")).string());
    cmd_plot((fs::path(eval_opts.out_dir) / "confusion_avg.csv").string(), "heatmap",
             (fs::path(plots) / "confusion.svg").string());

    // one manifest covering the whole chain
    RunManifest manifest{"demo", plant_label(common.plant_path), "", common.seed, horizon_ms,
                         common.out_dir, {}};
    for (const std::string& dir : {inject_opts.out_dir, train_opts.out_dir, eval_opts.out_dir,
                                   plots}) {
        std::vector<std::string> files;
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.is_regular_file() && entry.path().filename() != "manifest.json")
                files.push_back(entry.path().string());
        std::sort(files.begin(), files.end());
        for (const std::string& f : files) manifest.add_artifact(f);
    }
    manifest.add_artifact(dataset_path);
    save_manifest(manifest, (fs::path(common.out_dir) / "manifest.json").string());
    std::cout << "[demo] done; manifest at " << common.out_dir << "/manifest.json\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deslab: fault-diagnosis workbench for boolean-signal plants"};
    app.require_subcommand(1);

    CommonOpts common;
    app.add_option("--plant", common.plant_path, "plant description file (default: bundled import station)");
    app.add_option("--seed", common.seed, "master seed");
    app.add_option("--out", common.out_dir, "output directory");

    // simulate
    std::int64_t horizon_ms = 60000;
    auto* sim = app.add_subcommand("simulate", "record a normal-mode change log");
    sim->add_option("--horizon", horizon_ms, "run horizon in ms");

    // inject
    std::string scenario_path;
    int per_class = 1;
    auto* inj = app.add_subcommand("inject", "run fault scenarios, one labeled log each");
    inj->add_option("--scenarios", scenario_path, "scenario file (omit to generate a suite)");
    inj->add_option("--per-class", per_class, "generated scenarios per class");
    inj->add_option("--horizon", horizon_ms, "run horizon in ms");

    // dataset
    std::vector<std::string> log_paths;
    int window_n = 50, stride = 1;
    std::string scale_text = "div1000", dataset_out = "dataset.txt";
    bool drop_preinject = false;
    auto* dsc = app.add_subcommand("dataset", "window change logs into a labeled dataset");
    dsc->add_option("--logs", log_paths, "change-log CSV files")->required();
    dsc->add_option("-N,--window", window_n, "window length");
    dsc->add_option("--stride", stride, "window stride");
    dsc->add_option("--scale", scale_text, "t_rel scaling: none|div<c>|log1p");
    dsc->add_flag("--drop-preinject", drop_preinject, "drop pre-injection windows of fault runs");
    dsc->add_option("--dataset-out", dataset_out, "output dataset file");

    // train
    std::string dataset_path;
    int k = 3, hidden = 64, lstm_layers = 1, epochs = 30, batch = 32;
    double lr = 1e-3, clip = 5.0;
    std::string optimizer = "adam";
    bool class_weighting = false;
    auto* trn = app.add_subcommand("train", "k-fold cross-validated training");
    trn->add_option("--dataset", dataset_path, "dataset file")->required();
    trn->add_option("-k,--folds", k, "fold count");
    trn->add_option("--hidden", hidden, "LSTM hidden size");
    trn->add_option("--layers", lstm_layers, "LSTM layer count");
    trn->add_option("--lr", lr, "learning rate");
    trn->add_option("--epochs", epochs, "epoch count");
    trn->add_option("--batch", batch, "batch size");
    trn->add_option("--optimizer", optimizer, "adam|sgd");
    trn->add_option("--clip", clip, "gradient-norm clip (<=0 disables)");
    trn->add_flag("--class-weights", class_weighting, "inverse-frequency loss weighting");

    // eval
    std::vector<std::string> checkpoint_paths;
    std::string folds_path;
    auto* evl = app.add_subcommand("eval", "metrics report for trained checkpoints");
    evl->add_option("--checkpoints", checkpoint_paths, "fold checkpoints, in fold order")
        ->required();
    evl->add_option("--dataset", dataset_path, "dataset file")->required();
    evl->add_option("--folds", folds_path, "folds.csv from train (evaluate each fold's own "
                                           "validation split)");

    // plot
    std::string plot_input, plot_series = "loss", plot_out = "plot.svg";
    auto* plt = app.add_subcommand("plot", "render curves or a confusion heatmap as SVG");
    plt->add_option("--input", plot_input, "curves CSV or confusion_avg CSV")->required();
    plt->add_option("--series", plot_series, "loss|ac|pr0..pr7|heatmap");
    plt->add_option("--svg-out", plot_out, "output SVG path");

    // diagnose
    std::string diag_ckpt, diag_log;
    double tau = 0.5;
    auto* dgn = app.add_subcommand("diagnose", "replay a change log through a model");
    dgn->add_option("--model", diag_ckpt, "checkpoint file")->required();
    dgn->add_option("--log", diag_log, "change-log CSV")->required();
    dgn->add_option("--tau", tau, "confidence threshold in (0,1]");

    // demo
    int demo_per_class = 20, demo_epochs = 30, demo_hidden = 64, demo_n = 50, demo_stride = 1,
        demo_k = 3;
    std::int64_t demo_horizon = 22000;
    auto* dmo = app.add_subcommand("demo", "full experiment: inject, dataset, train, eval, plots");
    dmo->add_option("--per-class", demo_per_class, "runs per class");
    dmo->add_option("--horizon", demo_horizon, "run horizon in ms");
    dmo->add_option("-N,--window", demo_n, "window length");
    dmo->add_option("--stride", demo_stride, "window stride");
    dmo->add_option("-k,--folds", demo_k, "fold count");
    dmo->add_option("--hidden", demo_hidden, "LSTM hidden size");
    dmo->add_option("--epochs", demo_epochs, "epoch count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) cmd_simulate(common, horizon_ms);
        else if (inj->parsed()) cmd_inject(common, scenario_path, per_class, horizon_ms);
        else if (dsc->parsed())
            cmd_dataset(log_paths, window_n, stride, scale_text, drop_preinject, dataset_out);
        else if (trn->parsed())
            cmd_train(common, dataset_path, k, hidden, lstm_layers, lr, epochs, batch, optimizer,
                      clip, class_weighting);
        else if (evl->parsed()) cmd_eval(common, checkpoint_paths, dataset_path, folds_path);
        else if (plt->parsed()) cmd_plot(plot_input, plot_series, plot_out);
        else if (dgn->parsed()) cmd_diagnose(diag_ckpt, diag_log, tau);
        else if (dmo->parsed())
            cmd_demo(common, demo_per_class, demo_horizon, demo_n, demo_stride, demo_k,
                     demo_hidden, demo_epochs);
    } catch (const Error& e) {
        std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
