#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

/// Dense statevector simulation. Qubit 0 is the most significant bit of a
/// basis-state index, so |q0 q1 ... q(n-1)> maps to index sum q_k 2^(n-1-k).
namespace qsvm::sim {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 24;

class StateVector {
  public:
    /// |0...0> on n_qubits qubits.
    explicit StateVector(std::size_t n_qubits);

    /// Takes explicit amplitudes; the length must be a power of two and the
    /// vector must be normalized to 1e-10.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return amplitudes_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amplitudes_; }
    [[nodiscard]] const Complex &operator[](std::size_t index) const { return amplitudes_[index]; }

    /// Sum of squared magnitudes.
    [[nodiscard]] double norm_squared() const noexcept;

  private:
    StateVector() = default;

    std::size_t n_qubits_ = 0;
    std::vector<Complex> amplitudes_;
};

StateVector init_state(std::size_t n_qubits);

enum class GateKind { RX, RY, RZ, ROT3, H, CNOT, CSWAP };

std::string_view to_string(GateKind kind);
std::size_t angle_count(GateKind kind);
std::size_t wire_count(GateKind kind);

/// One rotation angle. The effective value is `offset + sign * params[slot]`
/// when bound to a slot, else `offset`.
struct Angle {
    double offset = 0.0;
    std::optional<std::size_t> slot;
    double sign = 1.0;

    static Angle constant(double value) { return Angle{value, std::nullopt, 1.0}; }
    static Angle bound(std::size_t slot) { return Angle{0.0, slot, 1.0}; }

    [[nodiscard]] double resolve(std::span<const double> params) const;
    [[nodiscard]] Angle negated() const { return Angle{-offset, slot, -sign}; }

    friend bool operator==(const Angle &, const Angle &) = default;
};

/// CNOT wires are (control, target); CSWAP wires are (control, a, b).
/// ROT3 angles are (alpha, beta, gamma) applied as RZ(gamma) RY(beta) RZ(alpha).
struct Gate {
    GateKind kind = GateKind::H;
    std::vector<std::size_t> wires;
    std::vector<Angle> angles;

    static Gate rx(std::size_t wire, Angle angle) { return {GateKind::RX, {wire}, {angle}}; }
    static Gate ry(std::size_t wire, Angle angle) { return {GateKind::RY, {wire}, {angle}}; }
    static Gate rz(std::size_t wire, Angle angle) { return {GateKind::RZ, {wire}, {angle}}; }
    static Gate rot3(std::size_t wire, Angle alpha, Angle beta, Angle gamma) {
        return {GateKind::ROT3, {wire}, {alpha, beta, gamma}};
    }
    static Gate h(std::size_t wire) { return {GateKind::H, {wire}, {}}; }
    static Gate cnot(std::size_t control, std::size_t target) {
        return {GateKind::CNOT, {control, target}, {}};
    }
    static Gate cswap(std::size_t control, std::size_t a, std::size_t b) {
        return {GateKind::CSWAP, {control, a, b}, {}};
    }

    /// Throws CircuitError if wire or angle counts do not fit the kind, wires
    /// repeat, or a wire is >= n_qubits.
    void validate(std::size_t n_qubits) const;

    friend bool operator==(const Gate &, const Gate &) = default;
};

/// Ordered gate list over a fixed register, with n_params bindable slots.
class CircuitTape {
  public:
    CircuitTape() = default;
    CircuitTape(std::size_t n_qubits, std::size_t n_params);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t n_params() const noexcept { return n_params_; }
    [[nodiscard]] const std::vector<Gate> &gates() const noexcept { return gates_; }
    [[nodiscard]] bool empty() const noexcept { return gates_.empty(); }

    /// Validates wires and slots against this tape before appending.
    CircuitTape &append(Gate gate);
    /// Appends every gate of `other`; registers and slot counts must match.
    CircuitTape &append(const CircuitTape &other);

    /// Number of slot-bound angles across all gates.
    [[nodiscard]] std::size_t bound_angle_count() const noexcept;

    friend bool operator==(const CircuitTape &, const CircuitTape &) = default;

  private:
    std::size_t n_qubits_ = 0;
    std::size_t n_params_ = 0;
    std::vector<Gate> gates_;
};

/// Adds `delta` to one angle of one gate during a tape run.
struct AngleShift {
    std::size_t gate = 0;
    std::size_t angle = 0;
    double delta = 0.0;
};

StateVector apply_gate(StateVector state, const Gate &gate, std::span<const double> params = {});

StateVector apply_tape(StateVector state, const CircuitTape &tape, std::span<const double> params,
                       std::optional<AngleShift> shift = std::nullopt);

/// Reversed gate order with every angle negated; ROT3(a, b, c) becomes
/// ROT3(-c, -b, -a). H, CNOT and CSWAP are self-inverse.
CircuitTape adjoint_tape(const CircuitTape &tape);

/// <Z> on `wire`.
double expectation_z(const StateVector &state, std::size_t wire);

/// Probability that `wire` reads 1.
double probability_one(const StateVector &state, std::size_t wire);

/// |<0...0|psi>|^2.
double prob_all_zero(const StateVector &state);

/// <a|b>.
Complex inner_product(const StateVector &a, const StateVector &b);

} // namespace qsvm::sim
