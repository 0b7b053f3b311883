#include "qsvm/io.hpp"

#include <fstream>

#include "qsvm/errors.hpp"

namespace qsvm::io {

namespace {

std::string axis_name(circuits::Axis axis) {
    switch (axis) {
    case circuits::Axis::X:
        return "X";
    case circuits::Axis::Y:
        return "Y";
    case circuits::Axis::Z:
        return "Z";
    }
    return "?";
}

circuits::Axis parse_axis(const std::string &name) {
    if (name == "X") {
        return circuits::Axis::X;
    }
    if (name == "Y") {
        return circuits::Axis::Y;
    }
    if (name == "Z") {
        return circuits::Axis::Z;
    }
    throw DataError("unknown rotation axis '" + name + "'");
}

Json matrix_json(const Matrix &m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
    }
    return rows;
}

Matrix matrix_from_json(const Json &j) {
    Matrix m;
    for (const auto &row : j) {
        m.push_row(row.get<std::vector<double>>());
    }
    return m;
}

Json ansatz_json(const circuits::AnsatzSpec &a) {
    return Json{{"layers", a.n_layers}, {"qubits", a.n_qubits}, {"entangler_ranges", a.entangler_ranges}};
}

circuits::AnsatzSpec ansatz_from_json(const Json &j) {
    circuits::AnsatzSpec a;
    a.n_layers = j.at("layers").get<std::size_t>();
    a.n_qubits = j.at("qubits").get<std::size_t>();
    a.entangler_ranges = j.at("entangler_ranges").get<std::vector<std::size_t>>();
    a.validate();
    return a;
}

Json embedding_json(const circuits::EmbeddingSpec &e) {
    return Json{{"n_features", e.n_features}, {"axis", axis_name(e.axis)}};
}

circuits::EmbeddingSpec embedding_from_json(const Json &j) {
    return {j.at("n_features").get<std::size_t>(), parse_axis(j.at("axis").get<std::string>())};
}

circuits::AngleTensor theta_from_json(const Json &j, const circuits::AnsatzSpec &a) {
    return circuits::AngleTensor(a.n_layers, a.n_qubits, j.get<std::vector<double>>());
}

Json optional_value(const std::optional<double> &v) { return v ? Json(*v) : Json("undefined"); }

// nlohmann raises its own exception types on schema problems.
template <typename F> auto guarded(const char *what, F &&parse) {
    try {
        return parse();
    } catch (const nlohmann::json::exception &e) {
        throw DataError(std::string(what) + ": " + e.what());
    }
}

} // namespace

Json to_json(const kernels::KernelSpec &spec) {
    Json j{{"kind", std::string(kernels::to_string(spec.kind))}};
    switch (spec.kind) {
    case kernels::KernelKind::QuantumInversion:
    case kernels::KernelKind::QuantumSwap:
        j["axis"] = axis_name(spec.axis);
        break;
    case kernels::KernelKind::QuantumTrainable:
        j["axis"] = axis_name(spec.axis);
        j["ansatz"] = ansatz_json(spec.ansatz);
        j["theta"] = std::vector<double>(spec.theta.flat().begin(), spec.theta.flat().end());
        break;
    case kernels::KernelKind::PolyHomogeneous:
        j["degree"] = spec.degree;
        break;
    case kernels::KernelKind::PolyInhomogeneous:
        j["degree"] = spec.degree;
        j["coef0"] = spec.coef0;
        break;
    case kernels::KernelKind::Rbf:
        j["gamma"] = spec.gamma;
        break;
    case kernels::KernelKind::Sigmoid:
        j["slope"] = spec.slope;
        j["intercept"] = spec.intercept;
        j["exponent"] = spec.sigmoid_exponent;
        break;
    case kernels::KernelKind::Linear:
        break;
    }
    return j;
}

kernels::KernelSpec kernel_from_json(const Json &j) {
    return guarded("kernel spec", [&] {
        kernels::KernelSpec spec;
        spec.kind = kernels::parse_kernel_kind(j.at("kind").get<std::string>());
        if (j.contains("axis")) {
            spec.axis = parse_axis(j.at("axis").get<std::string>());
        }
        spec.degree = j.value("degree", spec.degree);
        spec.coef0 = j.value("coef0", spec.coef0);
        spec.gamma = j.value("gamma", spec.gamma);
        spec.slope = j.value("slope", spec.slope);
        spec.intercept = j.value("intercept", spec.intercept);
        spec.sigmoid_exponent = j.value("exponent", spec.sigmoid_exponent);
        if (spec.kind == kernels::KernelKind::QuantumTrainable) {
            spec.ansatz = ansatz_from_json(j.at("ansatz"));
            spec.theta = theta_from_json(j.at("theta"), spec.ansatz);
        }
        spec.validate();
        return spec;
    });
}

Json to_json(const svm::SvmModel &model) {
    return Json{{"type", "svm"},
                {"C", model.C},
                {"bias", model.bias},
                {"kernel", to_json(model.kernel)},
                {"alphas", model.alphas},
                {"labels", model.labels},
                {"support_indices", model.support_indices},
                {"training_X", matrix_json(model.training_X)},
                {"warnings", model.warnings}};
}

svm::SvmModel svm_model_from_json(const Json &j) {
    return guarded("svm model", [&] {
        svm::SvmModel model;
        model.C = j.at("C").get<double>();
        model.bias = j.at("bias").get<double>();
        model.kernel = kernel_from_json(j.at("kernel"));
        model.alphas = j.at("alphas").get<std::vector<double>>();
        model.labels = j.at("labels").get<std::vector<int>>();
        model.support_indices = j.at("support_indices").get<std::vector<std::size_t>>();
        model.training_X = matrix_from_json(j.at("training_X"));
        model.warnings = j.value("warnings", std::vector<std::string>{});
        if (model.alphas.size() != model.labels.size() || model.alphas.size() != model.training_X.rows()) {
            throw DataError("svm model: alphas, labels and training samples disagree in count");
        }
        for (const auto i : model.support_indices) {
            if (i >= model.alphas.size()) {
                throw DataError("svm model: support index out of range");
            }
        }
        return model;
    });
}

Json to_json(const variational::VarModel &model) {
    return Json{{"type", "qv"},
                {"embedding", embedding_json(model.emb)},
                {"ansatz", ansatz_json(model.ansatz)},
                {"theta", std::vector<double>(model.theta.flat().begin(), model.theta.flat().end())},
                {"bias", model.bias}};
}

variational::VarModel var_model_from_json(const Json &j) {
    return guarded("variational model", [&] {
        variational::VarModel model;
        model.emb = embedding_from_json(j.at("embedding"));
        model.ansatz = ansatz_from_json(j.at("ansatz"));
        model.theta = theta_from_json(j.at("theta"), model.ansatz);
        model.bias = j.at("bias").get<double>();
        return model;
    });
}

Json to_json(const hybrid::QvkModel &model) {
    return Json{{"type", "qvk"},
                {"embedding", embedding_json(model.emb)},
                {"ansatz", ansatz_json(model.ansatz)},
                {"theta", std::vector<double>(model.theta.flat().begin(), model.theta.flat().end())},
                {"weights", model.weights},
                {"bias", model.bias},
                {"train_y", model.train_y},
                {"train_X", matrix_json(model.train_X)}};
}

hybrid::QvkModel qvk_model_from_json(const Json &j) {
    return guarded("hybrid model", [&] {
        hybrid::QvkModel model;
        model.emb = embedding_from_json(j.at("embedding"));
        model.ansatz = ansatz_from_json(j.at("ansatz"));
        model.theta = theta_from_json(j.at("theta"), model.ansatz);
        model.weights = j.at("weights").get<std::vector<double>>();
        model.bias = j.at("bias").get<double>();
        model.train_y = j.at("train_y").get<std::vector<int>>();
        model.train_X = matrix_from_json(j.at("train_X"));
        model.validate();
        return model;
    });
}

Json to_json(const data::Split &split) {
    return Json{{"seed", split.seed}, {"test_fraction", split.test_fraction}, {"train", split.train},
                {"test", split.test}};
}

data::Split split_from_json(const Json &j) {
    return guarded("split manifest", [&] {
        data::Split s;
        s.seed = j.at("seed").get<std::uint64_t>();
        s.test_fraction = j.at("test_fraction").get<double>();
        s.train = j.at("train").get<std::vector<std::size_t>>();
        s.test = j.at("test").get<std::vector<std::size_t>>();
        return s;
    });
}

Json to_json(const metrics::Indicators &ind) {
    return Json{{"accuracy", ind.accuracy},
                {"precision", optional_value(ind.precision)},
                {"recall", optional_value(ind.recall)},
                {"specificity", optional_value(ind.specificity)},
                {"f1", optional_value(ind.f1)}};
}

Json to_json(const metrics::ConfusionMatrix &cm) {
    return Json{{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
}

Json make_report(const std::string &model_name, std::uint64_t split_seed, const metrics::ConfusionMatrix &cm) {
    return Json{{"model", model_name},
                {"split_seed", split_seed},
                {"indicators", to_json(metrics::indicators(cm))},
                {"confusion", to_json(cm)}};
}

void write_json(const std::filesystem::path &path, const Json &j) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
    if (!out) {
        throw Error("failed writing " + path.string());
    }
}

Json read_json(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IngestionError(path.string() + ": cannot open file");
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw IngestionError(path.string() + ": " + e.what());
    }
}

} // namespace qsvm::io
