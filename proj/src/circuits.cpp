#include "qsvm/circuits.hpp"

#include <algorithm>
#include <string>

#include "qsvm/errors.hpp"

namespace qsvm::circuits {

namespace {

using sim::Angle;
using sim::CircuitTape;
using sim::Gate;

Gate rotation(Axis axis, std::size_t wire, double angle) {
    switch (axis) {
    case Axis::X:
        return Gate::rx(wire, Angle::constant(angle));
    case Axis::Y:
        return Gate::ry(wire, Angle::constant(angle));
    case Axis::Z:
        return Gate::rz(wire, Angle::constant(angle));
    }
    throw ConfigError("unknown rotation axis");
}

void check_features(std::span<const double> x, const EmbeddingSpec &spec) {
    if (x.size() != spec.n_features) {
        throw DataError("feature vector has " + std::to_string(x.size()) + " entries, embedding expects " +
                        std::to_string(spec.n_features));
    }
}

void check_pair(std::span<const double> x1, std::span<const double> x2, const EmbeddingSpec &spec) {
    if (x1.size() != x2.size()) {
        throw DataError("feature vectors differ in length (" + std::to_string(x1.size()) + " vs " +
                        std::to_string(x2.size()) + ")");
    }
    check_features(x1, spec);
}

void check_ansatz_fits(const EmbeddingSpec &emb, const AnsatzSpec &ansatz) {
    ansatz.validate();
    if (emb.n_features != ansatz.n_qubits) {
        throw ConfigError("embedding uses " + std::to_string(emb.n_features) + " qubits but ansatz spans " +
                          std::to_string(ansatz.n_qubits));
    }
}

// Embedding on a subset of wires of a larger register.
void embed_onto(CircuitTape &tape, std::span<const double> x, Axis axis, std::size_t first_wire) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        tape.append(rotation(axis, first_wire + i, x[i]));
    }
}

// Same register, but with room for `n_params` slots so it can be joined with
// an ansatz tape.
CircuitTape embedding_with_slots(std::span<const double> x, const EmbeddingSpec &spec, std::size_t n_params) {
    CircuitTape tape(spec.n_features, n_params);
    embed_onto(tape, x, spec.axis, 0);
    return tape;
}

} // namespace

AnsatzSpec AnsatzSpec::with_default_ranges(std::size_t n_layers, std::size_t n_qubits) {
    AnsatzSpec spec{n_layers, n_qubits, {}};
    if (n_qubits > 1) {
        for (std::size_t l = 0; l < n_layers; ++l) {
            spec.entangler_ranges.push_back(l % (n_qubits - 1) + 1);
        }
    }
    return spec;
}

void AnsatzSpec::validate() const {
    if (n_layers == 0 || n_qubits == 0) {
        throw ConfigError("ansatz needs at least one layer and one qubit");
    }
    if (n_qubits == 1) {
        if (!entangler_ranges.empty() && entangler_ranges.size() != n_layers) {
            throw ConfigError("single-qubit ansatz takes no entangler ranges");
        }
        return;
    }
    if (entangler_ranges.size() != n_layers) {
        throw ConfigError("ansatz has " + std::to_string(n_layers) + " layers but " +
                          std::to_string(entangler_ranges.size()) + " entangler ranges");
    }
    for (const auto r : entangler_ranges) {
        if (r == 0 || r >= std::max<std::size_t>(n_qubits, 2)) {
            throw ConfigError("entangler range " + std::to_string(r) + " outside [1, " +
                              std::to_string(n_qubits) + ")");
        }
    }
}

AngleTensor::AngleTensor(std::size_t layers, std::size_t qubits, std::vector<double> values)
    : layers_(layers), qubits_(qubits), values_(std::move(values)) {
    if (values_.size() != layers * qubits * 3) {
        throw ConfigError("angle tensor (" + std::to_string(layers) + ", " + std::to_string(qubits) +
                          ", 3) cannot hold " + std::to_string(values_.size()) + " values");
    }
}

CircuitTape angle_embedding(std::span<const double> x, const EmbeddingSpec &spec) {
    check_features(x, spec);
    return embedding_with_slots(x, spec, 0);
}

CircuitTape layered_ansatz(const AnsatzSpec &spec) {
    spec.validate();
    const std::size_t n = spec.n_qubits;
    CircuitTape tape(n, spec.n_params());
    for (std::size_t l = 0; l < spec.n_layers; ++l) {
        for (std::size_t q = 0; q < n; ++q) {
            const std::size_t base = (l * n + q) * 3;
            tape.append(Gate::rot3(q, Angle::bound(base), Angle::bound(base + 1), Angle::bound(base + 2)));
        }
        if (n > 1) {
            const std::size_t range = spec.entangler_ranges[l];
            for (std::size_t q = 0; q < n; ++q) {
                tape.append(Gate::cnot(q, (q + range) % n));
            }
        }
    }
    return tape;
}

CircuitTape kernel_tape_inversion(std::span<const double> x1, std::span<const double> x2,
                                  const EmbeddingSpec &spec) {
    check_pair(x1, x2, spec);
    CircuitTape tape = angle_embedding(x1, spec);
    tape.append(sim::adjoint_tape(angle_embedding(x2, spec)));
    return tape;
}

CircuitTape kernel_tape_swap(std::span<const double> x1, std::span<const double> x2, const EmbeddingSpec &spec) {
    check_pair(x1, x2, spec);
    const std::size_t f = spec.n_features;
    CircuitTape tape(2 * f + 1, 0);
    tape.append(Gate::h(0));
    embed_onto(tape, x1, spec.axis, 1);
    embed_onto(tape, x2, spec.axis, f + 1);
    for (std::size_t i = 0; i < f; ++i) {
        tape.append(Gate::cswap(0, 1 + i, f + 1 + i));
    }
    tape.append(Gate::h(0));
    return tape;
}

double swap_test_kernel(const sim::StateVector &state) {
    const double p0 = 1.0 - sim::probability_one(state, 0);
    return 2.0 * p0 - 1.0;
}

CircuitTape variational_tape(std::span<const double> x, const EmbeddingSpec &emb, const AnsatzSpec &ansatz) {
    check_ansatz_fits(emb, ansatz);
    check_features(x, emb);
    CircuitTape tape = embedding_with_slots(x, emb, ansatz.n_params());
    tape.append(layered_ansatz(ansatz));
    return tape;
}

CircuitTape hybrid_kernel_tape(std::span<const double> x1, std::span<const double> x2, const EmbeddingSpec &emb,
                               const AnsatzSpec &ansatz) {
    check_ansatz_fits(emb, ansatz);
    check_pair(x1, x2, emb);
    CircuitTape tape = variational_tape(x1, emb, ansatz);
    tape.append(sim::adjoint_tape(variational_tape(x2, emb, ansatz)));
    return tape;
}

} // namespace qsvm::circuits
