#include "qsvm/sim.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "qsvm/errors.hpp"

namespace qsvm::sim {

namespace {

using Matrix2 = std::array<Complex, 4>; // row-major

constexpr Complex kI{0.0, 1.0};

Matrix2 rx_matrix(double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    return {c, -kI * s, -kI * s, c};
}

Matrix2 ry_matrix(double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    return {c, -s, s, c};
}

Matrix2 rz_matrix(double theta) {
    return {std::exp(-kI * (theta / 2)), 0.0, 0.0, std::exp(kI * (theta / 2))};
}

Matrix2 multiply(const Matrix2 &a, const Matrix2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

Matrix2 hadamard_matrix() {
    const double r = std::numbers::sqrt2 / 2;
    return {r, r, r, -r};
}

std::size_t bit_mask(std::size_t n_qubits, std::size_t wire) {
    return std::size_t{1} << (n_qubits - 1 - wire);
}

void apply_single(std::span<Complex> amps, std::size_t n_qubits, std::size_t wire, const Matrix2 &m) {
    const std::size_t mask = bit_mask(n_qubits, wire);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & mask) != 0) {
            continue;
        }
        const Complex a0 = amps[i];
        const Complex a1 = amps[i | mask];
        amps[i] = m[0] * a0 + m[1] * a1;
        amps[i | mask] = m[2] * a0 + m[3] * a1;
    }
}

void apply_cnot(std::span<Complex> amps, std::size_t n_qubits, std::size_t control, std::size_t target) {
    const std::size_t cmask = bit_mask(n_qubits, control);
    const std::size_t tmask = bit_mask(n_qubits, target);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & cmask) != 0 && (i & tmask) == 0) {
            std::swap(amps[i], amps[i | tmask]);
        }
    }
}

void apply_cswap(std::span<Complex> amps, std::size_t n_qubits, std::size_t control, std::size_t a,
                 std::size_t b) {
    const std::size_t cmask = bit_mask(n_qubits, control);
    const std::size_t amask = bit_mask(n_qubits, a);
    const std::size_t bmask = bit_mask(n_qubits, b);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & cmask) != 0 && (i & amask) != 0 && (i & bmask) == 0) {
            std::swap(amps[i], amps[(i & ~amask) | bmask]);
        }
    }
}

void check_wire(const StateVector &state, std::size_t wire) {
    if (wire >= state.n_qubits()) {
        throw CircuitError("wire " + std::to_string(wire) + " out of range for " +
                           std::to_string(state.n_qubits()) + "-qubit state");
    }
}

void apply_in_place(StateVector &state, const Gate &gate, std::span<const double> params,
                    const AngleShift *shift) {
    auto angle = [&](std::size_t k) {
        double value = gate.angles[k].resolve(params);
        if (shift != nullptr && shift->angle == k) {
            value += shift->delta;
        }
        return value;
    };
    const std::size_t n = state.n_qubits();
    auto amps = state.amplitudes();
    switch (gate.kind) {
    case GateKind::RX:
        apply_single(amps, n, gate.wires[0], rx_matrix(angle(0)));
        break;
    case GateKind::RY:
        apply_single(amps, n, gate.wires[0], ry_matrix(angle(0)));
        break;
    case GateKind::RZ:
        apply_single(amps, n, gate.wires[0], rz_matrix(angle(0)));
        break;
    case GateKind::ROT3: {
        const Matrix2 m = multiply(rz_matrix(angle(2)), multiply(ry_matrix(angle(1)), rz_matrix(angle(0))));
        apply_single(amps, n, gate.wires[0], m);
        break;
    }
    case GateKind::H:
        apply_single(amps, n, gate.wires[0], hadamard_matrix());
        break;
    case GateKind::CNOT:
        apply_cnot(amps, n, gate.wires[0], gate.wires[1]);
        break;
    case GateKind::CSWAP:
        apply_cswap(amps, n, gate.wires[0], gate.wires[1], gate.wires[2]);
        break;
    }
}

} // namespace

StateVector::StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                          std::to_string(kMaxQubits) + "]");
    }
    amplitudes_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amplitudes_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim < 2 || (dim & (dim - 1)) != 0) {
        throw ConfigError("amplitude count " + std::to_string(dim) + " is not a power of two >= 2");
    }
    StateVector state;
    state.n_qubits_ = static_cast<std::size_t>(std::countr_zero(dim));
    if (state.n_qubits_ > kMaxQubits) {
        throw ConfigError("state exceeds " + std::to_string(kMaxQubits) + " qubits");
    }
    state.amplitudes_ = std::move(amplitudes);
    if (std::abs(state.norm_squared() - 1.0) > 1e-10) {
        throw ConfigError("amplitudes are not normalized");
    }
    return state;
}

double StateVector::norm_squared() const noexcept {
    double total = 0.0;
    for (const auto &a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

StateVector init_state(std::size_t n_qubits) { return StateVector(n_qubits); }

std::string_view to_string(GateKind kind) {
    switch (kind) {
    case GateKind::RX:
        return "RX";
    case GateKind::RY:
        return "RY";
    case GateKind::RZ:
        return "RZ";
    case GateKind::ROT3:
        return "ROT3";
    case GateKind::H:
        return "H";
    case GateKind::CNOT:
        return "CNOT";
    case GateKind::CSWAP:
        return "CSWAP";
    }
    return "?";
}

std::size_t angle_count(GateKind kind) {
    switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
        return 1;
    case GateKind::ROT3:
        return 3;
    default:
        return 0;
    }
}

std::size_t wire_count(GateKind kind) {
    switch (kind) {
    case GateKind::CNOT:
        return 2;
    case GateKind::CSWAP:
        return 3;
    default:
        return 1;
    }
}

double Angle::resolve(std::span<const double> params) const {
    if (!slot) {
        return offset;
    }
    if (*slot >= params.size()) {
        throw CircuitError("parameter slot " + std::to_string(*slot) + " unbound (" +
                           std::to_string(params.size()) + " parameters supplied)");
    }
    return offset + sign * params[*slot];
}

void Gate::validate(std::size_t n_qubits) const {
    const std::string name(to_string(kind));
    if (wires.size() != wire_count(kind)) {
        throw CircuitError(name + " takes " + std::to_string(wire_count(kind)) + " wires");
    }
    if (angles.size() != angle_count(kind)) {
        throw CircuitError(name + " takes " + std::to_string(angle_count(kind)) + " angles");
    }
    for (std::size_t i = 0; i < wires.size(); ++i) {
        if (wires[i] >= n_qubits) {
            throw CircuitError(name + " wire " + std::to_string(wires[i]) + " out of range for " +
                               std::to_string(n_qubits) + " qubits");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (wires[i] == wires[j]) {
                throw CircuitError(name + " repeats wire " + std::to_string(wires[i]));
            }
        }
    }
}

CircuitTape::CircuitTape(std::size_t n_qubits, std::size_t n_params)
    : n_qubits_(n_qubits), n_params_(n_params) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("tape qubit count " + std::to_string(n_qubits) + " outside [1, " +
                          std::to_string(kMaxQubits) + "]");
    }
}

CircuitTape &CircuitTape::append(Gate gate) {
    gate.validate(n_qubits_);
    for (const auto &a : gate.angles) {
        if (a.slot && *a.slot >= n_params_) {
            throw CircuitError("parameter slot " + std::to_string(*a.slot) + " >= tape parameter count " +
                               std::to_string(n_params_));
        }
    }
    gates_.push_back(std::move(gate));
    return *this;
}

CircuitTape &CircuitTape::append(const CircuitTape &other) {
    if (other.n_qubits_ != n_qubits_) {
        throw CircuitError("cannot join a " + std::to_string(other.n_qubits_) + "-qubit tape onto a " +
                           std::to_string(n_qubits_) + "-qubit tape");
    }
    for (const auto &g : other.gates_) {
        append(g);
    }
    return *this;
}

std::size_t CircuitTape::bound_angle_count() const noexcept {
    std::size_t count = 0;
    for (const auto &g : gates_) {
        count += static_cast<std::size_t>(
            std::count_if(g.angles.begin(), g.angles.end(), [](const Angle &a) { return a.slot.has_value(); }));
    }
    return count;
}

StateVector apply_gate(StateVector state, const Gate &gate, std::span<const double> params) {
    gate.validate(state.n_qubits());
    apply_in_place(state, gate, params, nullptr);
    return state;
}

StateVector apply_tape(StateVector state, const CircuitTape &tape, std::span<const double> params,
                       std::optional<AngleShift> shift) {
    if (params.size() != tape.n_params()) {
        throw CircuitError("tape expects " + std::to_string(tape.n_params()) + " parameters, got " +
                           std::to_string(params.size()));
    }
    if (state.n_qubits() != tape.n_qubits()) {
        throw CircuitError("tape acts on " + std::to_string(tape.n_qubits()) + " qubits, state has " +
                           std::to_string(state.n_qubits()));
    }
    if (shift && shift->gate >= tape.gates().size()) {
        throw CircuitError("shift targets gate " + std::to_string(shift->gate) + " beyond tape end");
    }
    const auto &gates = tape.gates();
    for (std::size_t g = 0; g < gates.size(); ++g) {
        const AngleShift *active = (shift && shift->gate == g) ? &*shift : nullptr;
        apply_in_place(state, gates[g], params, active);
    }
    return state;
}

CircuitTape adjoint_tape(const CircuitTape &tape) {
    CircuitTape out(tape.n_qubits(), tape.n_params());
    const auto &gates = tape.gates();
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        Gate inverse = *it;
        std::reverse(inverse.angles.begin(), inverse.angles.end());
        for (auto &a : inverse.angles) {
            a = a.negated();
        }
        out.append(std::move(inverse));
    }
    return out;
}

double probability_one(const StateVector &state, std::size_t wire) {
    check_wire(state, wire);
    const std::size_t mask = bit_mask(state.n_qubits(), wire);
    double total = 0.0;
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & mask) != 0) {
            total += std::norm(amps[i]);
        }
    }
    return total;
}

double expectation_z(const StateVector &state, std::size_t wire) {
    check_wire(state, wire);
    const std::size_t mask = bit_mask(state.n_qubits(), wire);
    double total = 0.0;
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        total += ((i & mask) != 0 ? -1.0 : 1.0) * std::norm(amps[i]);
    }
    return total;
}

double prob_all_zero(const StateVector &state) { return std::norm(state[0]); }

Complex inner_product(const StateVector &a, const StateVector &b) {
    if (a.dimension() != b.dimension()) {
        throw CircuitError("inner product of states with different dimensions");
    }
    Complex total{0.0, 0.0};
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        total += std::conj(a[i]) * b[i];
    }
    return total;
}

} // namespace qsvm::sim
