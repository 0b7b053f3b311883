#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "qsvm/data.hpp"
#include "qsvm/hybrid.hpp"
#include "qsvm/kernels.hpp"
#include "qsvm/metrics.hpp"
#include "qsvm/svm.hpp"
#include "qsvm/variational.hpp"

/// JSON documents for models, manifests and reports. Doubles are written in
/// their shortest exact round-trip form.
namespace qsvm::io {

using Json = nlohmann::ordered_json;

Json to_json(const kernels::KernelSpec &spec);
kernels::KernelSpec kernel_from_json(const Json &j);

Json to_json(const svm::SvmModel &model);
svm::SvmModel svm_model_from_json(const Json &j);

Json to_json(const variational::VarModel &model);
variational::VarModel var_model_from_json(const Json &j);

Json to_json(const hybrid::QvkModel &model);
hybrid::QvkModel qvk_model_from_json(const Json &j);

Json to_json(const data::Split &split);
data::Split split_from_json(const Json &j);

/// Five indicators in the order accuracy, precision, recall, specificity,
/// f1. A 0/0 indicator is written as the string "undefined".
Json to_json(const metrics::Indicators &ind);
Json to_json(const metrics::ConfusionMatrix &cm);

/// {model, split_seed, indicators{...}, confusion{tp, fp, fn, tn}}
Json make_report(const std::string &model_name, std::uint64_t split_seed, const metrics::ConfusionMatrix &cm);

/// Pretty-printed with a trailing newline. Throws Error on I/O failure.
void write_json(const std::filesystem::path &path, const Json &j);
/// Throws IngestionError on a missing or malformed file.
Json read_json(const std::filesystem::path &path);

} // namespace qsvm::io
