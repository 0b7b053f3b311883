#include "qsvm/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "qsvm/errors.hpp"

namespace qsvm::data {

namespace {

std::vector<std::string> split_fields(const std::string &line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) {
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

} // namespace

Dataset load_iris(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IngestionError(path.string() + ": cannot open file");
    }
    const std::string where = path.string() + ":";
    std::string line;
    if (!std::getline(in, line)) {
        throw IngestionError(where + " file is empty");
    }
    if (trim(line) != kIrisHeader) {
        throw IngestionError(where + "1: expected header '" + std::string(kIrisHeader) + "'");
    }

    Dataset ds;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != 5) {
            throw IngestionError(where + std::to_string(line_no) + ": expected 5 columns, found " +
                                 std::to_string(fields.size()));
        }
        std::vector<double> row(4);
        for (std::size_t c = 0; c < 4; ++c) {
            const std::string text = trim(fields[c]);
            const char *end = text.data() + text.size();
            auto [ptr, ec] = std::from_chars(text.data(), end, row[c]);
            if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(row[c])) {
                throw IngestionError(where + std::to_string(line_no) + ": column " + std::to_string(c + 1) +
                                     " value '" + text + "' is not a finite number");
            }
        }
        const std::string species = trim(fields[4]);
        if (species.empty()) {
            throw IngestionError(where + std::to_string(line_no) + ": missing species name");
        }
        ds.X.push_row(row);
        ds.species.push_back(species);
    }
    if (ds.size() == 0) {
        throw IngestionError(where + " no data rows");
    }
    return ds;
}

Dataset select_binary(const Dataset &ds, const std::string &positive, const std::string &negative) {
    if (positive == negative) {
        throw ConfigError("class pair needs two distinct species, got '" + positive + "' twice");
    }
    for (const auto &name : {positive, negative}) {
        if (std::find(ds.species.begin(), ds.species.end(), name) == ds.species.end()) {
            throw ConfigError("unknown species '" + name + "'");
        }
    }
    Dataset out;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (ds.species[i] == positive || ds.species[i] == negative) {
            out.X.push_row(ds.X.row(i));
            out.species.push_back(ds.species[i]);
            out.y.push_back(ds.species[i] == positive ? 1 : -1);
        }
    }
    return out;
}

Split split(const Dataset &ds, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ConfigError("test fraction must lie in (0, 1)");
    }
    if (ds.y.size() != ds.size()) {
        throw DataError("dataset has no binary labels; select a class pair first");
    }
    std::map<int, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        by_label[ds.y[i]].push_back(i);
    }

    Split out;
    out.seed = seed;
    out.test_fraction = test_fraction;
    std::mt19937_64 rng(seed);
    for (auto &[label, indices] : by_label) {
        std::shuffle(indices.begin(), indices.end(), rng);
        const auto n_test = static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(indices.size())));
        out.test.insert(out.test.end(), indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(n_test));
        out.train.insert(out.train.end(), indices.begin() + static_cast<std::ptrdiff_t>(n_test), indices.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

Dataset subset(const Dataset &ds, const std::vector<std::size_t> &indices) {
    Dataset out;
    out.X = select_rows(ds.X, indices);
    for (const auto i : indices) {
        out.species.push_back(ds.species.at(i));
        if (!ds.y.empty()) {
            out.y.push_back(ds.y.at(i));
        }
    }
    return out;
}

Scaler fit_scaler(const Matrix &train, ScalingMode mode, double angle_scale) {
    if (train.rows() == 0) {
        throw DataError("cannot fit a scaler on an empty training split");
    }
    const std::size_t n = train.rows();
    const std::size_t f = train.cols();
    Scaler s;
    s.mode = mode;
    s.angle_scale = angle_scale;
    s.mean.assign(f, 0.0);
    s.stddev.assign(f, 0.0);
    s.minimum.assign(f, 0.0);
    s.maximum.assign(f, 0.0);
    for (std::size_t c = 0; c < f; ++c) {
        double total = 0.0;
        double lo = train(0, c);
        double hi = train(0, c);
        for (std::size_t r = 0; r < n; ++r) {
            total += train(r, c);
            lo = std::min(lo, train(r, c));
            hi = std::max(hi, train(r, c));
        }
        const double mean = total / static_cast<double>(n);
        double squares = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            squares += (train(r, c) - mean) * (train(r, c) - mean);
        }
        s.mean[c] = mean;
        s.stddev[c] = std::sqrt(squares / static_cast<double>(n));
        s.minimum[c] = lo;
        s.maximum[c] = hi;
        if (!(s.stddev[c] > 0.0)) {
            throw DataError("feature " + std::to_string(c) + " is constant on the training split");
        }
    }
    return s;
}

Matrix apply_scaler(const Scaler &scaler, const Matrix &X) {
    if (X.cols() != scaler.mean.size()) {
        throw DataError("scaler fitted on " + std::to_string(scaler.mean.size()) + " features, got " +
                        std::to_string(X.cols()));
    }
    Matrix out(X.rows(), X.cols());
    for (std::size_t r = 0; r < X.rows(); ++r) {
        for (std::size_t c = 0; c < X.cols(); ++c) {
            if (scaler.mode == ScalingMode::Standardize) {
                out(r, c) = (X(r, c) - scaler.mean[c]) / scaler.stddev[c] * scaler.angle_scale;
            } else {
                out(r, c) = (X(r, c) - scaler.minimum[c]) / (scaler.maximum[c] - scaler.minimum[c]) * std::numbers::pi;
            }
        }
    }
    return out;
}

} // namespace qsvm::data
