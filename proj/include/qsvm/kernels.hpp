#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsvm/circuits.hpp"
#include "qsvm/matrix.hpp"

namespace qsvm::kernels {

enum class KernelKind {
    QuantumInversion,
    QuantumSwap,
    QuantumTrainable,
    Linear,
    PolyHomogeneous,
    PolyInhomogeneous,
    Rbf,
    Sigmoid,
};

std::string_view to_string(KernelKind kind);
/// Inverse of to_string; throws ConfigError on unknown names.
KernelKind parse_kernel_kind(std::string_view name);

/// Kernel identity plus its parameters. Only the fields relevant to `kind`
/// are read.
struct KernelSpec {
    KernelKind kind = KernelKind::QuantumInversion;

    int degree = 2;             ///< polynomial degree d
    double coef0 = 1.0;         ///< inhomogeneous constant r
    double gamma = 1.0;         ///< RBF width
    double slope = 1.0;         ///< sigmoid k
    double intercept = 0.0;     ///< sigmoid c
    int sigmoid_exponent = 1;   ///< optional power on the sigmoid

    circuits::Axis axis = circuits::Axis::X;
    circuits::AnsatzSpec ansatz;  ///< trainable kernel only
    circuits::AngleTensor theta;  ///< trainable kernel only

    static KernelSpec quantum(bool swap_test = false) {
        KernelSpec s;
        s.kind = swap_test ? KernelKind::QuantumSwap : KernelKind::QuantumInversion;
        return s;
    }
    static KernelSpec trainable(circuits::AnsatzSpec ansatz, circuits::AngleTensor theta) {
        KernelSpec s;
        s.kind = KernelKind::QuantumTrainable;
        s.ansatz = std::move(ansatz);
        s.theta = std::move(theta);
        return s;
    }
    static KernelSpec linear() {
        KernelSpec s;
        s.kind = KernelKind::Linear;
        return s;
    }
    static KernelSpec poly_homogeneous(int d) {
        KernelSpec s;
        s.kind = KernelKind::PolyHomogeneous;
        s.degree = d;
        return s;
    }
    static KernelSpec poly_inhomogeneous(int d, double r) {
        KernelSpec s;
        s.kind = KernelKind::PolyInhomogeneous;
        s.degree = d;
        s.coef0 = r;
        return s;
    }
    static KernelSpec rbf(double gamma) {
        KernelSpec s;
        s.kind = KernelKind::Rbf;
        s.gamma = gamma;
        return s;
    }
    static KernelSpec sigmoid(double k, double c, int exponent = 1) {
        KernelSpec s;
        s.kind = KernelKind::Sigmoid;
        s.slope = k;
        s.intercept = c;
        s.sigmoid_exponent = exponent;
        return s;
    }

    [[nodiscard]] bool is_quantum() const noexcept {
        return kind == KernelKind::QuantumInversion || kind == KernelKind::QuantumSwap ||
               kind == KernelKind::QuantumTrainable;
    }

    /// Throws ConfigError for d < 1, gamma <= 0, or a trainable kernel whose
    /// angle tensor does not match its ansatz.
    void validate() const;
};

double eval_kernel(std::span<const double> x1, std::span<const double> x2, const KernelSpec &spec);

/// Symmetric kernel matrix over a sample set.
class GramMatrix {
  public:
    GramMatrix() = default;
    explicit GramMatrix(std::size_t m) : m_(m), values_(m * m, 0.0) {
        for (std::size_t i = 0; i < m; ++i) {
            sample_ids_.push_back(i);
        }
    }
    /// Row-major values; throws DataError unless values.size() == m * m.
    GramMatrix(std::size_t m, std::vector<double> values);

    [[nodiscard]] std::size_t size() const noexcept { return m_; }
    double &operator()(std::size_t i, std::size_t j) { return values_[i * m_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * m_ + j]; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const { return {values_.data() + i * m_, m_}; }
    [[nodiscard]] const std::vector<double> &values() const noexcept { return values_; }
    [[nodiscard]] const std::vector<std::size_t> &sample_ids() const noexcept { return sample_ids_; }
    void set_sample_ids(std::vector<std::size_t> ids);

    /// max |G(i,j) - G(j,i)|.
    [[nodiscard]] double symmetry_residual() const noexcept;

  private:
    std::size_t m_ = 0;
    std::vector<double> values_;
    std::vector<std::size_t> sample_ids_;
};

/// Upper triangle evaluated, lower mirrored. Quantum diagonals must come out
/// as 1 within 1e-10.
GramMatrix gram_matrix(const Matrix &samples, const KernelSpec &spec);

/// k(a_i, b_j) for every row pair; rows of `a` index the result rows.
Matrix cross_kernel(const Matrix &a, const Matrix &b, const KernelSpec &spec);

/// Smallest eigenvalue by cyclic Jacobi sweeps. Throws DataError when the
/// matrix is asymmetric beyond 1e-8.
double min_eigenvalue(const GramMatrix &gram);

/// Full matrix, one row per line, 17 significant digits.
void write_csv(std::ostream &out, const GramMatrix &gram);

} // namespace qsvm::kernels
