#include <doctest.h>

#include <cmath>
#include <random>

#include "qsvm/circuits.hpp"
#include "qsvm/errors.hpp"
#include "support.hpp"

using namespace qsvm::circuits;
using qsvm::sim::apply_tape;
using qsvm::sim::init_state;
using qsvm::sim::prob_all_zero;

namespace {

double run_prob(const qsvm::sim::CircuitTape &tape, std::span<const double> params = {}) {
    return prob_all_zero(apply_tape(init_state(tape.n_qubits()), tape, params));
}

double closed_form(std::span<const double> a, std::span<const double> b) {
    double k = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double c = std::cos((a[i] - b[i]) / 2.0);
        k *= c * c;
    }
    return k;
}

} // namespace

TEST_CASE("angle embedding puts one rotation per feature") {
    const std::vector<double> x{0.1, 0.2, 0.3};
    const auto tape = angle_embedding(x, EmbeddingSpec{3, Axis::Y});
    REQUIRE(tape.gates().size() == 3);
    CHECK(tape.gates()[2].kind == qsvm::sim::GateKind::RY);
    CHECK(tape.gates()[2].wires[0] == 2);
    CHECK_THROWS_AS(angle_embedding(x, EmbeddingSpec{4, Axis::X}), qsvm::DataError);
}

TEST_CASE("inversion kernel factorizes into cos^2 terms") {
    std::mt19937_64 rng(101);
    const EmbeddingSpec emb{4, Axis::X};
    for (int k = 0; k < 100; ++k) {
        const auto a = testing::uniform_vector(4, -3.2, 3.2, rng);
        const auto b = testing::uniform_vector(4, -3.2, 3.2, rng);
        CHECK(std::abs(run_prob(kernel_tape_inversion(a, b, emb)) - closed_form(a, b)) < 1e-10);
    }
    const std::vector<double> a{0.0, 0.0};
    const std::vector<double> b{std::numbers::pi, 0.0};
    CHECK(run_prob(kernel_tape_inversion(a, b, EmbeddingSpec{2, Axis::X})) < 1e-15);
}

TEST_CASE("Z-axis embedding is blind to features") {
    const std::vector<double> a{0.4, -1.0};
    const std::vector<double> b{2.0, 0.3};
    CHECK(run_prob(kernel_tape_inversion(a, b, EmbeddingSpec{2, Axis::Z})) == doctest::Approx(1.0));
}

TEST_CASE("SWAP-test kernel equals inversion kernel") {
    std::mt19937_64 rng(202);
    for (const auto axis : {Axis::X, Axis::Y}) {
        const EmbeddingSpec emb{3, axis};
        for (int k = 0; k < 100; ++k) {
            const auto a = testing::uniform_vector(3, -3.2, 3.2, rng);
            const auto b = testing::uniform_vector(3, -3.2, 3.2, rng);
            const auto swap = kernel_tape_swap(a, b, emb);
            CHECK(swap.n_qubits() == 7);
            const double ks = swap_test_kernel(apply_tape(init_state(7), swap, {}));
            CHECK(std::abs(ks - run_prob(kernel_tape_inversion(a, b, emb))) < 1e-10);
        }
    }
}

TEST_CASE("default entangler ranges cycle through 1..n-1") {
    const auto spec = AnsatzSpec::with_default_ranges(5, 4);
    CHECK(spec.entangler_ranges == std::vector<std::size_t>{1, 2, 3, 1, 2});
    CHECK(AnsatzSpec::with_default_ranges(2, 1).entangler_ranges.empty());
    CHECK_THROWS_AS((AnsatzSpec{2, 4, {1}}).validate(), qsvm::ConfigError);
    CHECK_THROWS_AS((AnsatzSpec{1, 4, {4}}).validate(), qsvm::ConfigError);
    CHECK_THROWS_AS((AnsatzSpec{0, 4, {}}).validate(), qsvm::ConfigError);
}

TEST_CASE("layered ansatz layout") {
    const auto spec = AnsatzSpec::with_default_ranges(2, 3);
    const auto tape = layered_ansatz(spec);
    CHECK(tape.n_params() == 18);
    // Per layer: 3 ROT3 then a 3-gate CNOT ring.
    REQUIRE(tape.gates().size() == 12);
    CHECK(tape.gates()[4].kind == qsvm::sim::GateKind::CNOT);
    CHECK(tape.gates()[4].wires == std::vector<std::size_t>{1, 2});
    CHECK(tape.gates()[9].wires == std::vector<std::size_t>{0, 2});
    CHECK(*tape.gates()[7].angles[1].slot == (1 * 3 + 1) * 3 + 1);
}

TEST_CASE("variational and hybrid slot counts") {
    const std::vector<double> x{0.1, 0.2, 0.3, 0.4};
    for (std::size_t layers = 1; layers <= 3; ++layers) {
        const auto spec = AnsatzSpec::with_default_ranges(layers, 4);
        const auto v = variational_tape(x, EmbeddingSpec{}, spec);
        CHECK(v.n_params() == 12 * layers);
        CHECK(v.bound_angle_count() == 12 * layers);
        const auto h = hybrid_kernel_tape(x, x, EmbeddingSpec{}, spec);
        CHECK(h.n_params() == 12 * layers);
        CHECK(h.bound_angle_count() == 24 * layers);
    }
    CHECK_THROWS_AS(variational_tape(x, EmbeddingSpec{}, AnsatzSpec::with_default_ranges(1, 3)), qsvm::ConfigError);
}

TEST_CASE("variational score examples") {
    const std::vector<double> zero{0.0, 0.0, 0.0, 0.0};
    const auto spec4 = AnsatzSpec::with_default_ranges(2, 4);
    const AngleTensor theta0(2, 4);
    const auto tape = variational_tape(zero, EmbeddingSpec{}, spec4);
    const auto s = apply_tape(init_state(4), tape, theta0.flat());
    CHECK(qsvm::sim::expectation_z(s, 0) == doctest::Approx(1.0));

    const auto spec1 = AnsatzSpec::with_default_ranges(1, 1);
    for (const double beta : {-2.0, 0.3, 1.7}) {
        const AngleTensor theta(1, 1, std::vector<double>{0.0, beta, 0.0});
        const std::vector<double> x{0.0};
        const auto t = variational_tape(x, EmbeddingSpec{1, Axis::X}, spec1);
        CHECK(qsvm::sim::expectation_z(apply_tape(init_state(1), t, theta.flat()), 0) ==
              doctest::Approx(std::cos(beta)).epsilon(1e-12));
    }
}

TEST_CASE("hybrid kernel properties") {
    std::mt19937_64 rng(303);
    const EmbeddingSpec emb{4, Axis::X};
    const auto spec = AnsatzSpec::with_default_ranges(2, 4);
    for (int k = 0; k < 20; ++k) {
        const auto a = testing::uniform_vector(4, -2.0, 2.0, rng);
        const auto b = testing::uniform_vector(4, -2.0, 2.0, rng);
        const auto theta = testing::uniform_vector(spec.n_params(), -3.0, 3.0, rng);
        const std::vector<double> zeros(spec.n_params(), 0.0);
        const double plain = run_prob(kernel_tape_inversion(a, b, emb));
        CHECK(std::abs(run_prob(hybrid_kernel_tape(a, b, emb, spec), zeros) - plain) < 1e-10);
        CHECK(std::abs(run_prob(hybrid_kernel_tape(a, a, emb, spec), theta) - 1.0) < 1e-10);
        const double ab = run_prob(hybrid_kernel_tape(a, b, emb, spec), theta);
        const double ba = run_prob(hybrid_kernel_tape(b, a, emb, spec), theta);
        CHECK(std::abs(ab - ba) < 1e-10);
        // The ansatz and its adjoint meet in the middle of the tape, so the
        // value does not depend on theta at all.
        CHECK(std::abs(ab - plain) < 1e-10);
    }
}

TEST_CASE("angle tensor shape checks") {
    CHECK_THROWS_AS(AngleTensor(2, 4, std::vector<double>(10, 0.0)), qsvm::ConfigError);
    AngleTensor t(2, 4);
    t.at(1, 2, 0) = 5.0;
    CHECK(t.flat()[(1 * 4 + 2) * 3] == 5.0);
    CHECK(t.matches(AnsatzSpec::with_default_ranges(2, 4)));
    CHECK_FALSE(t.matches(AnsatzSpec::with_default_ranges(3, 4)));
}
