#include "qsvm/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"

#include "qsvm/data.hpp"
#include "qsvm/errors.hpp"
#include "qsvm/format.hpp"
#include "qsvm/hybrid.hpp"
#include "qsvm/kernels.hpp"
#include "qsvm/metrics.hpp"
#include "qsvm/svm.hpp"
#include "qsvm/variational.hpp"

#ifndef QSVM_LAB_DEFAULT_DATASET
#define QSVM_LAB_DEFAULT_DATASET "data/iris.csv"
#endif

namespace qsvm::cli {

namespace fs = std::filesystem;

namespace {

struct Prepared {
    data::Split split;
    variational::LabeledSet train;
    variational::LabeledSet test;
};

struct ModelResult {
    std::string name;
    io::Json model;
    std::optional<variational::TrainingTrace> trace;
    std::vector<double> test_scores;
    std::vector<int> predictions;
    metrics::ConfusionMatrix confusion;
};

Prepared prepare(const RunConfig &cfg) {
    const auto all = data::load_iris(cfg.dataset);
    const auto binary = data::select_binary(all, cfg.positive_class, cfg.negative_class);
    Prepared p;
    p.split = data::split(binary, cfg.test_fraction, cfg.seed);
    if (cfg.expected_split &&
        (cfg.expected_split->train != p.split.train || cfg.expected_split->test != p.split.test)) {
        throw DataError("recorded split manifest does not match the split recomputed from the seed");
    }
    const auto train = data::subset(binary, p.split.train);
    const auto test = data::subset(binary, p.split.test);
    const auto mode = cfg.scaling == "minmax" ? data::ScalingMode::MinMax : data::ScalingMode::Standardize;
    const auto scaler = data::fit_scaler(train.X, mode, cfg.angle_scale);
    p.train = {data::apply_scaler(scaler, train.X), train.y};
    p.test = {data::apply_scaler(scaler, test.X), test.y};
    return p;
}

kernels::KernelSpec kernel_spec(const RunConfig &cfg) {
    kernels::KernelSpec spec;
    spec.kind = kernels::parse_kernel_kind(cfg.kernel);
    spec.degree = cfg.degree;
    spec.coef0 = cfg.coef0;
    spec.gamma = cfg.gamma;
    spec.slope = cfg.sigmoid_slope;
    spec.intercept = cfg.sigmoid_intercept;
    spec.sigmoid_exponent = cfg.sigmoid_exponent;
    spec.validate();
    return spec;
}

svm::TrainConfig svm_config(const RunConfig &cfg) {
    svm::TrainConfig t;
    t.C = cfg.C;
    t.tolerance = cfg.tolerance;
    t.max_passes = cfg.max_passes;
    t.seed = cfg.seed;
    return t;
}

variational::FitConfig fit_config(const RunConfig &cfg) {
    variational::FitConfig f;
    f.learning_rate = cfg.learning_rate;
    f.epochs = cfg.epochs;
    f.layers = cfg.layers;
    f.batch_size = cfg.batch_size;
    f.seed = cfg.seed;
    f.init_scale = cfg.init_scale;
    f.validate();
    return f;
}

std::vector<int> labels_of(const std::vector<double> &scores) {
    std::vector<int> out;
    for (const double s : scores) {
        out.push_back(svm::sign_label(s));
    }
    return out;
}

std::vector<double> svm_scores(const svm::SvmModel &model, const Matrix &X) {
    const auto rows = kernels::cross_kernel(X, model.training_X, model.kernel);
    std::vector<double> out;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        out.push_back(svm::decision_from_kernel_row(model, rows.row(i)));
    }
    return out;
}

void finish(ModelResult &r, const Prepared &p) {
    r.predictions = labels_of(r.test_scores);
    r.confusion = metrics::confusion(p.test.y, r.predictions);
}

ModelResult run_svm_model(const std::string &name, const kernels::KernelSpec &spec, const RunConfig &cfg,
                          const Prepared &p) {
    ModelResult r;
    r.name = name;
    const auto model = svm::fit(p.train.X, p.train.y, spec, svm_config(cfg));
    r.model = io::to_json(model);
    r.test_scores = svm_scores(model, p.test.X);
    finish(r, p);
    return r;
}

ModelResult run_model(const std::string &kind, const RunConfig &cfg, const Prepared &p) {
    if (kind == "qk") {
        return run_svm_model("QK-SVM", kernels::KernelSpec::quantum(cfg.swap_test), cfg, p);
    }
    if (kind == "classical") {
        return run_svm_model("SVM-" + cfg.kernel, kernel_spec(cfg), cfg, p);
    }
    if (kind == "qv") {
        ModelResult r;
        r.name = "QV-SVM";
        auto [model, trace] = variational::train_qv(p.train, p.test, fit_config(cfg));
        r.model = io::to_json(model);
        r.trace = std::move(trace);
        for (std::size_t i = 0; i < p.test.size(); ++i) {
            r.test_scores.push_back(variational::qv_score(model, p.test.X.row(i)));
        }
        finish(r, p);
        return r;
    }
    if (kind == "qvk") {
        ModelResult r;
        r.name = "QVK-SVM";
        auto [model, trace] = hybrid::train_qvk(p.train, p.test, fit_config(cfg));
        r.trace = std::move(trace);
        if (cfg.refit_svm) {
            const auto refit = hybrid::refit_svm(model, p.train, svm_config(cfg));
            r.model = io::to_json(refit);
            r.test_scores = svm_scores(refit, p.test.X);
        } else {
            r.model = io::to_json(model);
            r.test_scores = hybrid::qvk_scores(model, p.test.X);
        }
        finish(r, p);
        return r;
    }
    throw ConfigError("unknown model '" + kind + "'");
}

void ensure_out_dir(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
}

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << text;
}

void write_trace(const fs::path &path, const variational::TrainingTrace &trace) {
    std::ostringstream buffer;
    variational::write_trace_csv(buffer, trace);
    write_text(path, buffer.str());
}

void write_scores(const fs::path &path, const Prepared &p, const ModelResult &r) {
    std::ostringstream buffer;
    buffer << "index,label,score,predicted\n";
    for (std::size_t i = 0; i < r.test_scores.size(); ++i) {
        buffer << p.split.test[i] << ',' << p.test.y[i] << ',' << format_double(r.test_scores[i]) << ','
               << r.predictions[i] << '\n';
    }
    write_text(path, buffer.str());
}

void write_config(const RunConfig &cfg, const Prepared &p) {
    auto j = to_json(cfg);
    j["split"] = io::to_json(p.split);
    io::write_json(cfg.out / "config.json", j);
    io::write_json(cfg.out / "split.json", io::to_json(p.split));
}

std::pair<std::string, std::string> parse_classes(const std::string &text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
        throw ConfigError("--classes expects exactly two names 'A,B', got '" + text + "'");
    }
    return {text.substr(0, comma), text.substr(comma + 1)};
}

} // namespace

fs::path default_dataset() { return QSVM_LAB_DEFAULT_DATASET; }

void RunConfig::resolve() {
    if (command != "train" && command != "kernel-matrix" && command != "compare") {
        throw ConfigError("unknown command '" + command + "'");
    }
    if (model != "qk" && model != "qv" && model != "qvk" && model != "classical") {
        throw ConfigError("unknown model '" + model + "' (expected qk, qv, qvk or classical)");
    }
    if (scaling != "standardize" && scaling != "minmax") {
        throw ConfigError("unknown scaling '" + scaling + "' (expected standardize or minmax)");
    }
    if (kernel.empty()) {
        kernel = (model == "classical" && command == "train") ? "rbf" : (swap_test ? "quantum_swap" : "quantum_inversion");
    }
    const auto kind = kernels::parse_kernel_kind(kernel);
    if (kind == kernels::KernelKind::QuantumTrainable) {
        throw ConfigError("the trainable kernel is produced by --model qvk, not selected directly");
    }
    kernels::KernelSpec probe;
    probe.kind = kind;
    if (model == "classical" && command == "train" && probe.is_quantum()) {
        throw ConfigError("--model classical needs a classical --kernel");
    }
    if (dataset.empty()) {
        dataset = default_dataset();
    }
    std::error_code ec;
    const auto absolute = fs::absolute(dataset, ec);
    if (!ec) {
        dataset = absolute.lexically_normal();
    }
}

io::Json to_json(const RunConfig &cfg) {
    return io::Json{{"command", cfg.command},
                    {"dataset", cfg.dataset.string()},
                    {"classes", {cfg.positive_class, cfg.negative_class}},
                    {"test_fraction", cfg.test_fraction},
                    {"seed", cfg.seed},
                    {"model", cfg.model},
                    {"kernel", cfg.kernel},
                    {"degree", cfg.degree},
                    {"coef0", cfg.coef0},
                    {"gamma", cfg.gamma},
                    {"sigmoid_slope", cfg.sigmoid_slope},
                    {"sigmoid_intercept", cfg.sigmoid_intercept},
                    {"sigmoid_exponent", cfg.sigmoid_exponent},
                    {"swap_test", cfg.swap_test},
                    {"layers", cfg.layers},
                    {"learning_rate", cfg.learning_rate},
                    {"epochs", cfg.epochs},
                    {"batch_size", cfg.batch_size},
                    {"init_scale", cfg.init_scale},
                    {"refit_svm", cfg.refit_svm},
                    {"C", cfg.C},
                    {"tolerance", cfg.tolerance},
                    {"max_passes", cfg.max_passes},
                    {"scaling", cfg.scaling},
                    {"angle_scale", cfg.angle_scale},
                    {"rows", cfg.rows},
                    {"out", cfg.out.string()}};
}

RunConfig config_from_json(const io::Json &j) {
    try {
        RunConfig cfg;
        cfg.command = j.at("command").get<std::string>();
        cfg.dataset = j.at("dataset").get<std::string>();
        const auto classes = j.at("classes").get<std::vector<std::string>>();
        if (classes.size() != 2) {
            throw ConfigError("config 'classes' must list two species");
        }
        cfg.positive_class = classes[0];
        cfg.negative_class = classes[1];
        cfg.test_fraction = j.at("test_fraction").get<double>();
        cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.model = j.at("model").get<std::string>();
        cfg.kernel = j.at("kernel").get<std::string>();
        cfg.degree = j.at("degree").get<int>();
        cfg.coef0 = j.at("coef0").get<double>();
        cfg.gamma = j.at("gamma").get<double>();
        cfg.sigmoid_slope = j.at("sigmoid_slope").get<double>();
        cfg.sigmoid_intercept = j.at("sigmoid_intercept").get<double>();
        cfg.sigmoid_exponent = j.at("sigmoid_exponent").get<int>();
        cfg.swap_test = j.at("swap_test").get<bool>();
        cfg.layers = j.at("layers").get<std::size_t>();
        cfg.learning_rate = j.at("learning_rate").get<double>();
        cfg.epochs = j.at("epochs").get<std::size_t>();
        cfg.batch_size = j.at("batch_size").get<std::size_t>();
        cfg.init_scale = j.at("init_scale").get<double>();
        cfg.refit_svm = j.at("refit_svm").get<bool>();
        cfg.C = j.at("C").get<double>();
        cfg.tolerance = j.at("tolerance").get<double>();
        cfg.max_passes = j.at("max_passes").get<std::size_t>();
        cfg.scaling = j.at("scaling").get<std::string>();
        cfg.angle_scale = j.at("angle_scale").get<double>();
        cfg.rows = j.at("rows").get<std::size_t>();
        cfg.out = j.at("out").get<std::string>();
        return cfg;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

void run_train(const RunConfig &cfg) {
    const auto p = prepare(cfg);
    auto result = run_model(cfg.model, cfg, p);
    ensure_out_dir(cfg.out);
    write_config(cfg, p);
    io::write_json(cfg.out / "model.json", result.model);
    io::write_json(cfg.out / "report.json", io::make_report(result.name, cfg.seed, result.confusion));
    write_scores(cfg.out / "scores.csv", p, result);
    if (result.trace) {
        write_trace(cfg.out / "trace.csv", *result.trace);
    }
}

void run_kernel_matrix(const RunConfig &cfg) {
    const auto p = prepare(cfg);
    auto spec = kernel_spec(cfg);
    const std::size_t m = cfg.rows == 0 ? p.train.size() : std::min(cfg.rows, p.train.size());
    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < m; ++i) {
        picked.push_back(i);
    }
    auto gram = kernels::gram_matrix(select_rows(p.train.X, picked), spec);
    gram.set_sample_ids(std::vector<std::size_t>(p.split.train.begin(), p.split.train.begin() + static_cast<std::ptrdiff_t>(m)));

    ensure_out_dir(cfg.out);
    write_config(cfg, p);
    std::ostringstream csv;
    kernels::write_csv(csv, gram);
    write_text(cfg.out / "gram.csv", csv.str());
    io::write_json(cfg.out / "psd.json", io::Json{{"kernel", io::to_json(spec)},
                                                  {"size", gram.size()},
                                                  {"sample_ids", gram.sample_ids()},
                                                  {"min_eigenvalue", kernels::min_eigenvalue(gram)},
                                                  {"symmetry_residual", gram.symmetry_residual()}});
}

void run_compare(const RunConfig &cfg) {
    const auto p = prepare(cfg);
    io::Json models = io::Json::array();
    std::vector<ModelResult> results;
    for (const std::string kind : {"qk", "qv", "qvk"}) {
        results.push_back(run_model(kind, cfg, p));
    }
    ensure_out_dir(cfg.out);
    write_config(cfg, p);
    for (const auto &r : results) {
        const auto report = io::make_report(r.name, cfg.seed, r.confusion);
        models.push_back(io::Json{{"model", r.name}, {"indicators", report["indicators"]}, {"confusion", report["confusion"]}});
        if (r.trace) {
            write_trace(cfg.out / ("trace_" + r.name + ".csv"), *r.trace);
        }
    }
    io::write_json(cfg.out / "comparison.json",
                   io::Json{{"split_seed", cfg.seed},
                            {"columns", {"accuracy", "precision", "recall", "specificity", "f1"}},
                            {"models", models}});
}

int execute(RunConfig cfg, std::ostream &err) {
    try {
        cfg.resolve();
        if (cfg.command == "train") {
            run_train(cfg);
        } else if (cfg.command == "kernel-matrix") {
            run_kernel_matrix(cfg);
        } else {
            run_compare(cfg);
        }
        return kExitOk;
    } catch (const ConfigError &e) {
        err << "qsvm_lab: error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError &e) {
        err << "qsvm_lab: error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "qsvm_lab: internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

int main_entry(int argc, char **argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Quantum SVM laboratory: quantum-kernel, variational and hybrid classifiers on Iris", "qsvm_lab"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string classes = cfg.positive_class + "," + cfg.negative_class;
    std::string dataset;
    std::string out_dir = cfg.out.string();

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--dataset", dataset, "Iris CSV file")->capture_default_str();
        sub->add_option("--classes", classes, "Positive and negative species, 'A,B'")->capture_default_str();
        sub->add_option("--test-fraction", cfg.test_fraction, "Fraction of each class held out")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "Seed for split, initialization and SMO")->capture_default_str();
        sub->add_option("--model", cfg.model, "qk | qv | qvk | classical")->capture_default_str();
        sub->add_option("--kernel", cfg.kernel,
                        "quantum_inversion | quantum_swap | linear | poly_homogeneous | poly_inhomogeneous | rbf | "
                        "sigmoid");
        sub->add_option("--degree", cfg.degree, "Polynomial degree")->capture_default_str();
        sub->add_option("--coef0", cfg.coef0, "Inhomogeneous polynomial constant")->capture_default_str();
        sub->add_option("--gamma", cfg.gamma, "RBF width")->capture_default_str();
        sub->add_option("--sigmoid-k", cfg.sigmoid_slope, "Sigmoid slope")->capture_default_str();
        sub->add_option("--sigmoid-c", cfg.sigmoid_intercept, "Sigmoid intercept")->capture_default_str();
        sub->add_option("--sigmoid-exponent", cfg.sigmoid_exponent, "Power applied to the sigmoid kernel")
            ->capture_default_str();
        sub->add_flag("--swap-test", cfg.swap_test, "Evaluate the quantum kernel with a SWAP test");
        sub->add_option("--layers", cfg.layers, "Ansatz layers")->capture_default_str();
        sub->add_option("--lr", cfg.learning_rate, "Learning rate")->capture_default_str();
        sub->add_option("--epochs", cfg.epochs, "Training epochs")->capture_default_str();
        sub->add_option("--batch", cfg.batch_size, "Mini-batch size, 0 for full batch")->capture_default_str();
        sub->add_option("--init-scale", cfg.init_scale, "Half-width of the initial angle distribution")
            ->capture_default_str();
        sub->add_flag("--refit-svm", cfg.refit_svm, "QVK: freeze the trained kernel and fit an SMO model on it");
        sub->add_option("--c", cfg.C, "SVM box constraint")->capture_default_str();
        sub->add_option("--tolerance", cfg.tolerance, "SMO KKT tolerance")->capture_default_str();
        sub->add_option("--max-passes", cfg.max_passes, "SMO quiet passes before stopping")->capture_default_str();
        sub->add_option("--scaling", cfg.scaling, "standardize | minmax")->capture_default_str();
        sub->add_option("--angle-scale", cfg.angle_scale, "Multiplier after standardization")->capture_default_str();
        sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    };

    auto *train = app.add_subcommand("train", "Train one model and write model, trace and report");
    add_common(train);
    auto *kernel_matrix = app.add_subcommand("kernel-matrix", "Write a Gram matrix and its PSD diagnostics");
    add_common(kernel_matrix);
    kernel_matrix->add_option("--rows", cfg.rows, "Use the first N training rows (0 = all)")->capture_default_str();
    auto *compare = app.add_subcommand("compare", "Train QK, QV and QVK on one split and compare indicators");
    add_common(compare);
    auto *replay = app.add_subcommand("replay", "Re-run an experiment from its config.json");
    std::string replay_config;
    std::string replay_out;
    replay->add_option("config", replay_config, "config.json of a previous run")->required();
    replay->add_option("--out", replay_out, "Output directory (default: the recorded one)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "qsvm_lab: error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (replay->parsed()) {
            auto recorded_json = io::read_json(replay_config);
            RunConfig recorded = config_from_json(recorded_json);
            if (recorded_json.contains("split")) {
                recorded.expected_split = io::split_from_json(recorded_json.at("split"));
            }
            if (!replay_out.empty()) {
                recorded.out = replay_out;
            }
            return execute(recorded, err);
        }
        cfg.command = train->parsed() ? "train" : (kernel_matrix->parsed() ? "kernel-matrix" : "compare");
        std::tie(cfg.positive_class, cfg.negative_class) = parse_classes(classes);
        cfg.dataset = dataset;
        cfg.out = out_dir;
    } catch (const Error &e) {
        err << "qsvm_lab: error: " << e.what() << '\n';
        return kExitUsage;
    }
    return execute(cfg, err);
}

} // namespace qsvm::cli
