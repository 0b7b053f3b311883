#include "qsvm/matrix.hpp"

#include "qsvm/errors.hpp"

namespace qsvm {

void Matrix::push_row(std::span<const double> values) {
    if (rows_ == 0 && data_.empty()) {
        cols_ = values.size();
    } else if (values.size() != cols_) {
        throw DataError("row has " + std::to_string(values.size()) + " values, expected " +
                        std::to_string(cols_));
    }
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
}

Matrix select_rows(const Matrix &source, std::span<const std::size_t> indices) {
    Matrix out(indices.size(), source.cols());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= source.rows()) {
            throw DataError("row index " + std::to_string(indices[i]) + " out of range");
        }
        auto src = source.row(indices[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

} // namespace qsvm
