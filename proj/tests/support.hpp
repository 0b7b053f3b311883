#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "qsvm/matrix.hpp"
#include "qsvm/sim.hpp"

// Helpers shared by the test suites. The dense-matrix code here is a second,
// independent implementation of gate action used as an oracle for sim.
namespace testing {

using qsvm::sim::Complex;
using Dense = std::vector<std::vector<Complex>>;

inline Dense identity(std::size_t dim) {
    Dense m(dim, std::vector<Complex>(dim, 0.0));
    for (std::size_t i = 0; i < dim; ++i) {
        m[i][i] = 1.0;
    }
    return m;
}

inline Dense multiply(const Dense &a, const Dense &b) {
    const std::size_t n = a.size();
    Dense out(n, std::vector<Complex>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k] == Complex(0.0)) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return out;
}

using Mat2 = std::array<std::array<Complex, 2>, 2>;

inline Mat2 mat_rx(double t) {
    const Complex i(0.0, 1.0);
    return {{{std::cos(t / 2), -i * std::sin(t / 2)}, {-i * std::sin(t / 2), std::cos(t / 2)}}};
}

inline Mat2 mat_ry(double t) { return {{{std::cos(t / 2), -std::sin(t / 2)}, {std::sin(t / 2), std::cos(t / 2)}}}; }

inline Mat2 mat_rz(double t) {
    return {{{std::polar(1.0, -t / 2), 0.0}, {0.0, std::polar(1.0, t / 2)}}};
}

inline Mat2 mat_mul(const Mat2 &a, const Mat2 &b) {
    Mat2 out{};
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    return out;
}

inline std::size_t bit_of(std::size_t index, std::size_t wire, std::size_t n) { return (index >> (n - 1 - wire)) & 1U; }

inline Dense lift_single(const Mat2 &m, std::size_t wire, std::size_t n) {
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t mask = std::size_t{1} << (n - 1 - wire);
    Dense out(dim, std::vector<Complex>(dim, 0.0));
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            if ((r & ~mask) == (c & ~mask)) {
                out[r][c] = m[bit_of(r, wire, n)][bit_of(c, wire, n)];
            }
        }
    }
    return out;
}

// Unitary of one gate built from textbook matrices.
inline Dense gate_matrix(const qsvm::sim::Gate &g, std::size_t n, std::span<const double> params) {
    using qsvm::sim::GateKind;
    const std::size_t dim = std::size_t{1} << n;
    auto angle = [&](std::size_t k) { return g.angles[k].resolve(params); };
    switch (g.kind) {
    case GateKind::RX:
        return lift_single(mat_rx(angle(0)), g.wires[0], n);
    case GateKind::RY:
        return lift_single(mat_ry(angle(0)), g.wires[0], n);
    case GateKind::RZ:
        return lift_single(mat_rz(angle(0)), g.wires[0], n);
    case GateKind::ROT3:
        return lift_single(mat_mul(mat_rz(angle(2)), mat_mul(mat_ry(angle(1)), mat_rz(angle(0)))), g.wires[0], n);
    case GateKind::H: {
        const double s = 1.0 / std::sqrt(2.0);
        return lift_single(Mat2{{{s, s}, {s, -s}}}, g.wires[0], n);
    }
    case GateKind::CNOT: {
        Dense out(dim, std::vector<Complex>(dim, 0.0));
        const std::size_t tmask = std::size_t{1} << (n - 1 - g.wires[1]);
        for (std::size_t c = 0; c < dim; ++c) {
            const std::size_t r = bit_of(c, g.wires[0], n) ? (c ^ tmask) : c;
            out[r][c] = 1.0;
        }
        return out;
    }
    case GateKind::CSWAP: {
        Dense out(dim, std::vector<Complex>(dim, 0.0));
        const std::size_t ma = std::size_t{1} << (n - 1 - g.wires[1]);
        const std::size_t mb = std::size_t{1} << (n - 1 - g.wires[2]);
        for (std::size_t c = 0; c < dim; ++c) {
            std::size_t r = c;
            if (bit_of(c, g.wires[0], n) && bit_of(c, g.wires[1], n) != bit_of(c, g.wires[2], n)) {
                r = c ^ ma ^ mb;
            }
            out[r][c] = 1.0;
        }
        return out;
    }
    }
    return identity(dim);
}

inline Dense tape_matrix(const qsvm::sim::CircuitTape &tape, std::span<const double> params) {
    Dense u = identity(std::size_t{1} << tape.n_qubits());
    for (const auto &g : tape.gates()) {
        u = multiply(gate_matrix(g, tape.n_qubits(), params), u);
    }
    return u;
}

// Random tape over every gate kind; rotations are bound to slots with
// probability one half.
inline qsvm::sim::CircuitTape random_tape(std::size_t n, std::size_t n_gates, std::size_t n_params,
                                          std::mt19937_64 &rng) {
    using qsvm::sim::Angle;
    using qsvm::sim::Gate;
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    std::uniform_int_distribution<std::size_t> wire(0, n - 1);
    std::uniform_int_distribution<int> kind(0, n >= 3 ? 6 : (n >= 2 ? 5 : 4));
    auto make_angle = [&] {
        if (n_params > 0 && rng() % 2 == 0) {
            std::uniform_int_distribution<std::size_t> slot(0, n_params - 1);
            Angle a = Angle::bound(slot(rng));
            a.offset = ang(rng);
            return rng() % 2 == 0 ? a : a.negated();
        }
        return Angle::constant(ang(rng));
    };
    auto distinct = [&](std::size_t count) {
        std::vector<std::size_t> wires;
        while (wires.size() < count) {
            const std::size_t w = wire(rng);
            if (std::find(wires.begin(), wires.end(), w) == wires.end()) {
                wires.push_back(w);
            }
        }
        return wires;
    };
    qsvm::sim::CircuitTape tape(n, n_params);
    for (std::size_t k = 0; k < n_gates; ++k) {
        switch (kind(rng)) {
        case 0:
            tape.append(Gate::rx(wire(rng), make_angle()));
            break;
        case 1:
            tape.append(Gate::ry(wire(rng), make_angle()));
            break;
        case 2:
            tape.append(Gate::rz(wire(rng), make_angle()));
            break;
        case 3: {
            const auto w = wire(rng);
            tape.append(Gate::rot3(w, make_angle(), make_angle(), make_angle()));
            break;
        }
        case 4:
            tape.append(Gate::h(wire(rng)));
            break;
        case 5: {
            const auto w = distinct(2);
            tape.append(Gate::cnot(w[0], w[1]));
            break;
        }
        default: {
            const auto w = distinct(3);
            tape.append(Gate::cswap(w[0], w[1], w[2]));
            break;
        }
        }
    }
    return tape;
}

inline std::vector<double> uniform_vector(std::size_t n, double lo, double hi, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (auto &x : v) {
        x = d(rng);
    }
    return v;
}

inline qsvm::sim::StateVector random_state(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> d;
    std::vector<Complex> amps(std::size_t{1} << n);
    double total = 0.0;
    for (auto &a : amps) {
        a = Complex(d(rng), d(rng));
        total += std::norm(a);
    }
    for (auto &a : amps) {
        a /= std::sqrt(total);
    }
    return qsvm::sim::StateVector::from_amplitudes(std::move(amps));
}

inline qsvm::Matrix random_matrix(std::size_t rows, std::size_t cols, double lo, double hi, std::mt19937_64 &rng) {
    qsvm::Matrix m(rows, cols);
    std::uniform_real_distribution<double> d(lo, hi);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = d(rng);
        }
    }
    return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

} // namespace testing
