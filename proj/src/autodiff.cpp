#include "qsvm/autodiff.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qsvm/errors.hpp"
#include "qsvm/parallel.hpp"

namespace qsvm::autodiff {

namespace {

double measure(const sim::StateVector &state, Observable observable) {
    switch (observable) {
    case Observable::PauliZWire0:
        return sim::expectation_z(state, 0);
    case Observable::AllZeroProjector:
        return sim::prob_all_zero(state);
    }
    throw ConfigError("unknown observable");
}

} // namespace

std::vector<Occurrence> shiftable_occurrences(const sim::CircuitTape &tape) {
    std::vector<Occurrence> out;
    const auto &gates = tape.gates();
    for (std::size_t g = 0; g < gates.size(); ++g) {
        for (std::size_t a = 0; a < gates[g].angles.size(); ++a) {
            const auto &angle = gates[g].angles[a];
            if (!angle.slot) {
                continue;
            }
            if (std::abs(angle.sign) != 1.0) {
                throw UnsupportedGateError("gate " + std::to_string(g) + " (" +
                                           std::string(sim::to_string(gates[g].kind)) +
                                           ") scales its parameter by " + std::to_string(angle.sign) +
                                           "; no two-term shift rule applies");
            }
            out.push_back({g, a, *angle.slot, angle.sign});
        }
    }
    return out;
}

double evaluate(const sim::CircuitTape &tape, std::span<const double> params, Observable observable,
                std::optional<sim::AngleShift> shift) {
    const auto state = sim::apply_tape(sim::init_state(tape.n_qubits()), tape, params, shift);
    return measure(state, observable);
}

std::vector<double> param_shift_gradient(const sim::CircuitTape &tape, std::span<const double> params,
                                         Observable observable) {
    if (params.size() != tape.n_params()) {
        throw CircuitError("tape expects " + std::to_string(tape.n_params()) + " parameters, got " +
                           std::to_string(params.size()));
    }
    const auto occurrences = shiftable_occurrences(tape);
    constexpr double kShift = std::numbers::pi / 2;

    // Shifting the effective angle of an occurrence with sign s by +-pi/2 and
    // weighting by s equals shifting the parameter itself.
    std::vector<double> terms(occurrences.size());
    parallel_for(occurrences.size(), [&](std::size_t k) {
        const auto &occ = occurrences[k];
        const double plus = evaluate(tape, params, observable, sim::AngleShift{occ.gate, occ.angle, kShift});
        const double minus = evaluate(tape, params, observable, sim::AngleShift{occ.gate, occ.angle, -kShift});
        terms[k] = occ.sign * (plus - minus) / 2.0;
    });

    std::vector<double> gradient(tape.n_params(), 0.0);
    for (std::size_t k = 0; k < occurrences.size(); ++k) {
        gradient[occurrences[k].slot] += terms[k];
    }
    return gradient;
}

std::vector<double> finite_diff_gradient(const ScalarFunction &fn, std::span<const double> params, double step) {
    if (!(step > 0.0)) {
        throw ConfigError("finite-difference step must be positive");
    }
    std::vector<double> point(params.begin(), params.end());
    std::vector<double> gradient(point.size());
    for (std::size_t j = 0; j < point.size(); ++j) {
        const double original = point[j];
        point[j] = original + step;
        const double plus = fn(point);
        point[j] = original - step;
        const double minus = fn(point);
        point[j] = original;
        gradient[j] = (plus - minus) / (2.0 * step);
    }
    return gradient;
}

} // namespace qsvm::autodiff
