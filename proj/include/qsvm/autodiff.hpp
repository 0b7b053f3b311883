#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qsvm/sim.hpp"

namespace qsvm::autodiff {

enum class Observable {
    PauliZWire0,      ///< <Z> on wire 0
    AllZeroProjector, ///< |<0...0|psi>|^2
};

using ScalarFunction = std::function<double(std::span<const double>)>;

/// Location of one slot-bound angle inside a tape.
struct Occurrence {
    std::size_t gate = 0;
    std::size_t angle = 0;
    std::size_t slot = 0;
    double sign = 1.0;
};

/// All slot-bound angles in gate order. Throws UnsupportedGateError when a
/// bound angle lacks a two-term shift rule (|sign| != 1).
std::vector<Occurrence> shiftable_occurrences(const sim::CircuitTape &tape);

/// Runs the tape from |0...0> and measures `observable`.
double evaluate(const sim::CircuitTape &tape, std::span<const double> params, Observable observable,
                std::optional<sim::AngleShift> shift = std::nullopt);

/// Two-term parameter-shift gradient with shifts of +-pi/2, summed over every
/// occurrence of each parameter.
std::vector<double> param_shift_gradient(const sim::CircuitTape &tape, std::span<const double> params,
                                         Observable observable);

/// Central differences with the given step.
std::vector<double> finite_diff_gradient(const ScalarFunction &fn, std::span<const double> params,
                                         double step = 1e-6);

} // namespace qsvm::autodiff
