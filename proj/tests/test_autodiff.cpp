#include <doctest.h>

#include <cmath>
#include <random>

#include "qsvm/autodiff.hpp"
#include "qsvm/circuits.hpp"
#include "qsvm/errors.hpp"
#include "support.hpp"

using namespace qsvm::autodiff;
using qsvm::sim::Angle;
using qsvm::sim::CircuitTape;
using qsvm::sim::Gate;

namespace {

std::vector<double> fd(const CircuitTape &tape, std::span<const double> params, Observable obs) {
    return finite_diff_gradient([&](std::span<const double> p) { return evaluate(tape, p, obs); }, params);
}

// Embedding of x1, ansatz, embedding of x2, ansatz again: every parameter
// appears twice with the same sign, and unlike the hybrid kernel nothing
// cancels.
CircuitTape doubled_tape(std::span<const double> x1, std::span<const double> x2,
                         const qsvm::circuits::AnsatzSpec &spec) {
    auto tape = qsvm::circuits::variational_tape(x1, qsvm::circuits::EmbeddingSpec{spec.n_qubits}, spec);
    CircuitTape second(spec.n_qubits, spec.n_params());
    for (std::size_t i = 0; i < x2.size(); ++i) {
        second.append(Gate::ry(i, Angle::constant(x2[i])));
    }
    tape.append(second);
    tape.append(qsvm::circuits::layered_ansatz(spec));
    return tape;
}

} // namespace

TEST_CASE("single RX gradient is -sin") {
    CircuitTape tape(1, 1);
    tape.append(Gate::rx(0, Angle::bound(0)));
    for (const double t : {-2.0, -0.5, 0.0, 0.9, 3.0}) {
        const std::vector<double> p{t};
        const auto g = param_shift_gradient(tape, p, Observable::PauliZWire0);
        CHECK(g[0] == doctest::Approx(-std::sin(t)).epsilon(1e-12));
    }
}

TEST_CASE("a parameter used twice sums both occurrences") {
    CircuitTape tape(1, 1);
    tape.append(Gate::rx(0, Angle::bound(0)));
    tape.append(Gate::rx(0, Angle::bound(0)));
    const std::vector<double> p{0.4};
    CHECK(evaluate(tape, p, Observable::PauliZWire0) == doctest::Approx(std::cos(0.8)));
    CHECK(param_shift_gradient(tape, p, Observable::PauliZWire0)[0] == doctest::Approx(-2.0 * std::sin(0.8)));
    CHECK(shiftable_occurrences(tape).size() == 2);
}

TEST_CASE("negated occurrences contribute with their sign") {
    CircuitTape tape(1, 2);
    tape.append(Gate::ry(0, Angle::bound(0)));
    tape.append(Gate::ry(0, Angle::bound(1).negated()));
    const std::vector<double> p{0.9, 0.2};
    const auto g = param_shift_gradient(tape, p, Observable::PauliZWire0);
    CHECK(g[0] == doctest::Approx(-std::sin(0.7)));
    CHECK(g[1] == doctest::Approx(std::sin(0.7)));
}

TEST_CASE("angles without a two-term rule are rejected") {
    CircuitTape tape(1, 1);
    Angle a = Angle::bound(0);
    a.sign = 2.0;
    tape.append(Gate::rx(0, a));
    const std::vector<double> p{0.1};
    CHECK_THROWS_AS(param_shift_gradient(tape, p, Observable::PauliZWire0), qsvm::UnsupportedGateError);
    CHECK_THROWS_AS(param_shift_gradient(tape, std::vector<double>{}, Observable::PauliZWire0), qsvm::CircuitError);
}

TEST_CASE("hybrid kernel with x1 = x2 has zero gradient") {
    std::mt19937_64 rng(17);
    const auto spec = qsvm::circuits::AnsatzSpec::with_default_ranges(2, 3);
    const auto x = testing::uniform_vector(3, -1.0, 1.0, rng);
    const auto theta = testing::uniform_vector(spec.n_params(), -3.0, 3.0, rng);
    const auto tape = qsvm::circuits::hybrid_kernel_tape(x, x, qsvm::circuits::EmbeddingSpec{3}, spec);
    for (const double g : param_shift_gradient(tape, theta, Observable::AllZeroProjector)) {
        CHECK(std::abs(g) < 1e-12);
    }
}

TEST_CASE("hybrid kernel gradient is symmetric in its arguments") {
    std::mt19937_64 rng(19);
    const auto spec = qsvm::circuits::AnsatzSpec::with_default_ranges(2, 3);
    const qsvm::circuits::EmbeddingSpec emb{3};
    for (int k = 0; k < 5; ++k) {
        const auto a = testing::uniform_vector(3, -1.0, 1.0, rng);
        const auto b = testing::uniform_vector(3, -1.0, 1.0, rng);
        const auto theta = testing::uniform_vector(spec.n_params(), -3.0, 3.0, rng);
        const auto gab = param_shift_gradient(qsvm::circuits::hybrid_kernel_tape(a, b, emb, spec), theta,
                                              Observable::AllZeroProjector);
        const auto gba = param_shift_gradient(qsvm::circuits::hybrid_kernel_tape(b, a, emb, spec), theta,
                                              Observable::AllZeroProjector);
        CHECK(testing::max_abs_diff(gab, gba) < 1e-10);
    }
}

TEST_CASE("parameter shift matches finite differences on 50 seeded instances") {
    std::mt19937_64 rng(23);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        CircuitTape tape;
        std::vector<double> params;
        Observable obs = k % 2 == 0 ? Observable::PauliZWire0 : Observable::AllZeroProjector;
        if (k < 20) {
            const std::size_t n = 1 + k % 4;
            tape = testing::random_tape(n, 16, 4, rng);
            params = testing::uniform_vector(4, -3.0, 3.0, rng);
        } else if (k < 35) {
            const auto spec = qsvm::circuits::AnsatzSpec::with_default_ranges(1 + k % 2, 3);
            const auto a = testing::uniform_vector(3, -1.5, 1.5, rng);
            const auto b = testing::uniform_vector(3, -1.5, 1.5, rng);
            tape = qsvm::circuits::hybrid_kernel_tape(a, b, qsvm::circuits::EmbeddingSpec{3}, spec);
            params = testing::uniform_vector(spec.n_params(), -3.0, 3.0, rng);
            obs = Observable::AllZeroProjector;
        } else {
            const auto spec = qsvm::circuits::AnsatzSpec::with_default_ranges(1 + k % 2, 3);
            const auto a = testing::uniform_vector(3, -1.5, 1.5, rng);
            const auto b = testing::uniform_vector(3, -1.5, 1.5, rng);
            tape = doubled_tape(a, b, spec);
            params = testing::uniform_vector(spec.n_params(), -3.0, 3.0, rng);
        }
        const auto ps = param_shift_gradient(tape, params, obs);
        const auto fdg = fd(tape, params, obs);
        worst = std::max(worst, testing::max_abs_diff(ps, fdg));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("shift rule is periodic in the parameter") {
    std::mt19937_64 rng(29);
    const auto tape = testing::random_tape(3, 12, 2, rng);
    const std::vector<double> p{0.3, -1.2};
    const std::vector<double> q{0.3 + 4.0 * std::numbers::pi, -1.2};
    const auto g1 = param_shift_gradient(tape, p, Observable::PauliZWire0);
    const auto g2 = param_shift_gradient(tape, q, Observable::PauliZWire0);
    CHECK(testing::max_abs_diff(g1, g2) < 1e-10);
}

TEST_CASE("finite differences need a positive step") {
    const ScalarFunction f = [](std::span<const double> p) { return p[0] * p[0]; };
    const std::vector<double> p{1.5};
    CHECK(finite_diff_gradient(f, p)[0] == doctest::Approx(3.0));
    CHECK_THROWS_AS(finite_diff_gradient(f, p, 0.0), qsvm::ConfigError);
}
