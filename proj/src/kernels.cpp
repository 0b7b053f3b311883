#include "qsvm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "qsvm/errors.hpp"
#include "qsvm/format.hpp"
#include "qsvm/parallel.hpp"

namespace qsvm::kernels {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        total += a[i] * b[i];
    }
    return total;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

double run_quantum(std::span<const double> x1, std::span<const double> x2, const KernelSpec &spec) {
    const circuits::EmbeddingSpec emb{x1.size(), spec.axis};
    switch (spec.kind) {
    case KernelKind::QuantumInversion: {
        const auto tape = circuits::kernel_tape_inversion(x1, x2, emb);
        return sim::prob_all_zero(sim::apply_tape(sim::init_state(tape.n_qubits()), tape, {}));
    }
    case KernelKind::QuantumSwap: {
        const auto tape = circuits::kernel_tape_swap(x1, x2, emb);
        return circuits::swap_test_kernel(sim::apply_tape(sim::init_state(tape.n_qubits()), tape, {}));
    }
    case KernelKind::QuantumTrainable: {
        const auto tape = circuits::hybrid_kernel_tape(x1, x2, emb, spec.ansatz);
        return sim::prob_all_zero(sim::apply_tape(sim::init_state(tape.n_qubits()), tape, spec.theta.flat()));
    }
    default:
        throw ConfigError("not a quantum kernel");
    }
}

// Re-raises a library error with the Gram cell prepended.
[[noreturn]] void rethrow_with_cell(std::size_t i, std::size_t j) {
    const std::string where = "kernel entry (" + std::to_string(i) + ", " + std::to_string(j) + "): ";
    try {
        throw;
    } catch (const DataError &e) {
        throw DataError(where + e.what());
    } catch (const ConfigError &e) {
        throw ConfigError(where + e.what());
    } catch (const CircuitError &e) {
        throw CircuitError(where + e.what());
    }
}

} // namespace

std::string_view to_string(KernelKind kind) {
    switch (kind) {
    case KernelKind::QuantumInversion:
        return "quantum_inversion";
    case KernelKind::QuantumSwap:
        return "quantum_swap";
    case KernelKind::QuantumTrainable:
        return "quantum_trainable";
    case KernelKind::Linear:
        return "linear";
    case KernelKind::PolyHomogeneous:
        return "poly_homogeneous";
    case KernelKind::PolyInhomogeneous:
        return "poly_inhomogeneous";
    case KernelKind::Rbf:
        return "rbf";
    case KernelKind::Sigmoid:
        return "sigmoid";
    }
    return "?";
}

KernelKind parse_kernel_kind(std::string_view name) {
    for (auto kind : {KernelKind::QuantumInversion, KernelKind::QuantumSwap, KernelKind::QuantumTrainable,
                      KernelKind::Linear, KernelKind::PolyHomogeneous, KernelKind::PolyInhomogeneous,
                      KernelKind::Rbf, KernelKind::Sigmoid}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw ConfigError("unknown kernel '" + std::string(name) + "'");
}

void KernelSpec::validate() const {
    switch (kind) {
    case KernelKind::PolyHomogeneous:
    case KernelKind::PolyInhomogeneous:
        if (degree < 1) {
            throw ConfigError("polynomial degree must be a positive integer, got " + std::to_string(degree));
        }
        break;
    case KernelKind::Rbf:
        if (!(gamma > 0.0)) {
            throw ConfigError("rbf gamma must be > 0, got " + format_double(gamma));
        }
        break;
    case KernelKind::Sigmoid:
        if (sigmoid_exponent < 1) {
            throw ConfigError("sigmoid exponent must be a positive integer");
        }
        break;
    case KernelKind::QuantumTrainable:
        ansatz.validate();
        if (!theta.matches(ansatz)) {
            throw ConfigError("trainable kernel angles do not match its ansatz shape");
        }
        break;
    default:
        break;
    }
}

double eval_kernel(std::span<const double> x1, std::span<const double> x2, const KernelSpec &spec) {
    if (x1.size() != x2.size()) {
        throw DataError("kernel arguments differ in length (" + std::to_string(x1.size()) + " vs " +
                        std::to_string(x2.size()) + ")");
    }
    spec.validate();
    switch (spec.kind) {
    case KernelKind::QuantumInversion:
    case KernelKind::QuantumSwap:
    case KernelKind::QuantumTrainable:
        return run_quantum(x1, x2, spec);
    case KernelKind::Linear:
        return dot(x1, x2);
    case KernelKind::PolyHomogeneous:
        return std::pow(dot(x1, x2), spec.degree);
    case KernelKind::PolyInhomogeneous:
        return std::pow(dot(x1, x2) + spec.coef0, spec.degree);
    case KernelKind::Rbf:
        return std::exp(-spec.gamma * squared_distance(x1, x2));
    case KernelKind::Sigmoid:
        return std::pow(std::tanh(spec.slope * dot(x1, x2) + spec.intercept), spec.sigmoid_exponent);
    }
    throw ConfigError("unknown kernel kind");
}

GramMatrix::GramMatrix(std::size_t m, std::vector<double> values) : m_(m), values_(std::move(values)) {
    if (values_.size() != m * m) {
        throw DataError("Gram matrix of order " + std::to_string(m) + " needs " + std::to_string(m * m) +
                        " values, got " + std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < m; ++i) {
        sample_ids_.push_back(i);
    }
}

void GramMatrix::set_sample_ids(std::vector<std::size_t> ids) {
    if (ids.size() != m_) {
        throw DataError("sample id list does not match Gram order");
    }
    sample_ids_ = std::move(ids);
}

double GramMatrix::symmetry_residual() const noexcept {
    double worst = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
        for (std::size_t j = i + 1; j < m_; ++j) {
            worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
        }
    }
    return worst;
}

GramMatrix gram_matrix(const Matrix &samples, const KernelSpec &spec) {
    if (samples.rows() == 0) {
        throw DataError("Gram matrix needs at least one sample");
    }
    spec.validate();
    const std::size_t m = samples.rows();
    GramMatrix gram(m);
    parallel_for(m, [&](std::size_t i) {
        for (std::size_t j = i; j < m; ++j) {
            try {
                gram(i, j) = eval_kernel(samples.row(i), samples.row(j), spec);
            } catch (const Error &) {
                rethrow_with_cell(i, j);
            }
        }
    });
    for (std::size_t i = 0; i < m; ++i) {
        if (spec.is_quantum() && std::abs(gram(i, i) - 1.0) > 1e-10) {
            throw CircuitError("quantum kernel diagonal (" + std::to_string(i) + ", " + std::to_string(i) +
                               ") = " + format_double(gram(i, i)) + ", expected 1");
        }
        for (std::size_t j = 0; j < i; ++j) {
            gram(i, j) = gram(j, i);
        }
    }
    return gram;
}

Matrix cross_kernel(const Matrix &a, const Matrix &b, const KernelSpec &spec) {
    spec.validate();
    Matrix out(a.rows(), b.rows());
    parallel_for(a.rows(), [&](std::size_t i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            try {
                out(i, j) = eval_kernel(a.row(i), b.row(j), spec);
            } catch (const Error &) {
                rethrow_with_cell(i, j);
            }
        }
    });
    return out;
}

double min_eigenvalue(const GramMatrix &gram) {
    const std::size_t n = gram.size();
    if (n == 0) {
        throw DataError("eigenvalue of an empty matrix");
    }
    if (gram.symmetry_residual() > 1e-8) {
        throw DataError("matrix is not symmetric (residual " + format_double(gram.symmetry_residual()) + ")");
    }

    std::vector<double> a = gram.values();
    // Symmetrize exactly so rotations stay consistent.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = avg;
            a[j * n + i] = avg;
        }
    }
    auto off_norm = [&] {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) {
                    total += a[i * n + j] * a[i * n + j];
                }
            }
        }
        return std::sqrt(total);
    };

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_norm() >= 1e-12; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) {
                    continue;
                }
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }

    double smallest = a[0];
    for (std::size_t i = 1; i < n; ++i) {
        smallest = std::min(smallest, a[i * n + i]);
    }
    return smallest;
}

void write_csv(std::ostream &out, const GramMatrix &gram) {
    for (std::size_t i = 0; i < gram.size(); ++i) {
        for (std::size_t j = 0; j < gram.size(); ++j) {
            if (j > 0) {
                out << ',';
            }
            out << format_double(gram(i, j));
        }
        out << '\n';
    }
}

} // namespace qsvm::kernels
