#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qsvm/sim.hpp"

namespace qsvm::circuits {

enum class Axis { X, Y, Z };

/// One feature per qubit, one rotation per feature.
struct EmbeddingSpec {
    std::size_t n_features = 4;
    Axis axis = Axis::X;
};

/// Layered entangling ansatz: per layer a ROT3 on every qubit, then a CNOT ring
/// CNOT(i, (i + range) mod n). Parameters are ordered layer, qubit, angle.
struct AnsatzSpec {
    std::size_t n_layers = 1;
    std::size_t n_qubits = 1;
    std::vector<std::size_t> entangler_ranges;

    /// Ranges (l mod (n - 1)) + 1, or none for a single qubit.
    static AnsatzSpec with_default_ranges(std::size_t n_layers, std::size_t n_qubits);

    [[nodiscard]] std::size_t n_params() const noexcept { return 3 * n_layers * n_qubits; }
    /// Throws ConfigError on zero sizes or a range outside [1, max(n, 2)).
    void validate() const;

    friend bool operator==(const AnsatzSpec &, const AnsatzSpec &) = default;
};

/// Angles of the layered ansatz with shape (layers, qubits, 3), flattened in
/// slot order.
class AngleTensor {
  public:
    AngleTensor() = default;
    AngleTensor(std::size_t layers, std::size_t qubits, double fill = 0.0)
        : layers_(layers), qubits_(qubits), values_(layers * qubits * 3, fill) {}
    AngleTensor(std::size_t layers, std::size_t qubits, std::vector<double> values);

    [[nodiscard]] std::size_t layers() const noexcept { return layers_; }
    [[nodiscard]] std::size_t qubits() const noexcept { return qubits_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

    double &at(std::size_t layer, std::size_t qubit, std::size_t angle) {
        return values_[(layer * qubits_ + qubit) * 3 + angle];
    }
    [[nodiscard]] double at(std::size_t layer, std::size_t qubit, std::size_t angle) const {
        return values_[(layer * qubits_ + qubit) * 3 + angle];
    }

    [[nodiscard]] std::span<const double> flat() const noexcept { return values_; }
    [[nodiscard]] std::span<double> flat() noexcept { return values_; }

    [[nodiscard]] bool matches(const AnsatzSpec &spec) const noexcept {
        return layers_ == spec.n_layers && qubits_ == spec.n_qubits;
    }

    friend bool operator==(const AngleTensor &, const AngleTensor &) = default;

  private:
    std::size_t layers_ = 0;
    std::size_t qubits_ = 0;
    std::vector<double> values_;
};

sim::CircuitTape angle_embedding(std::span<const double> x, const EmbeddingSpec &spec);

/// Slot-bound tape with spec.n_params() parameters.
sim::CircuitTape layered_ansatz(const AnsatzSpec &spec);

/// Embedding of x1 followed by the adjoint embedding of x2. The kernel value
/// is prob_all_zero of the final state.
sim::CircuitTape kernel_tape_inversion(std::span<const double> x1, std::span<const double> x2,
                                       const EmbeddingSpec &spec);

/// Qubit layout of the SWAP-test tape: ancilla on wire 0, register A on
/// wires 1..f, register B on wires f+1..2f.
sim::CircuitTape kernel_tape_swap(std::span<const double> x1, std::span<const double> x2,
                                  const EmbeddingSpec &spec);

/// 2 P(ancilla = 0) - 1 for a state produced by kernel_tape_swap.
double swap_test_kernel(const sim::StateVector &state);

/// Embedding followed by the ansatz; the score is <Z> on wire 0.
sim::CircuitTape variational_tape(std::span<const double> x, const EmbeddingSpec &emb,
                                  const AnsatzSpec &ansatz);

/// [embed(x1); ansatz] followed by the adjoint of [embed(x2); ansatz]. Every
/// ansatz parameter is bound twice, once with each sign.
sim::CircuitTape hybrid_kernel_tape(std::span<const double> x1, std::span<const double> x2,
                                    const EmbeddingSpec &emb, const AnsatzSpec &ansatz);

} // namespace qsvm::circuits
