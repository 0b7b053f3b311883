#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qsvm {

/// Dense row-major matrix of doubles. Rows are samples, columns features.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool empty() const noexcept { return rows_ == 0; }

    double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<double> row(std::size_t r) {
        return {data_.data() + r * cols_, cols_};
    }
    [[nodiscard]] std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }

    /// Appends a row; the first row fixes the column count.
    void push_row(std::span<const double> values);

    [[nodiscard]] const std::vector<double> &data() const noexcept { return data_; }

    friend bool operator==(const Matrix &, const Matrix &) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Rows of `source` picked by `indices`, in that order.
Matrix select_rows(const Matrix &source, std::span<const std::size_t> indices);

} // namespace qsvm
