#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "qsvm/autodiff.hpp"
#include "qsvm/circuits.hpp"
#include "qsvm/errors.hpp"
#include "qsvm/hybrid.hpp"
#include "qsvm/io.hpp"
#include "qsvm/kernels.hpp"
#include "support.hpp"

using namespace qsvm::hybrid;
using qsvm::circuits::AngleTensor;
using qsvm::circuits::AnsatzSpec;
using qsvm::circuits::EmbeddingSpec;
using qsvm::variational::FitConfig;
using qsvm::variational::LabeledSet;

namespace {

LabeledSet random_set(std::size_t m, std::size_t f, std::mt19937_64 &rng) {
    LabeledSet s{testing::random_matrix(m, f, -1.5, 1.5, rng), {}};
    for (std::size_t i = 0; i < m; ++i) {
        s.y.push_back(s.X(i, 0) > 0.0 ? 1 : -1);
    }
    s.y[0] = 1;
    s.y[1] = -1;
    return s;
}

QvkModel random_model(const LabeledSet &set, std::size_t layers, std::mt19937_64 &rng) {
    FitConfig cfg;
    cfg.layers = layers;
    auto model = init_qvk_model(set, cfg);
    model.theta = AngleTensor(layers, set.X.cols(), testing::uniform_vector(model.theta.size(), -3.0, 3.0, rng));
    model.weights = testing::uniform_vector(set.size(), -0.5, 0.5, rng);
    model.bias = 0.05;
    return model;
}

} // namespace

TEST_CASE("hybrid kernel values") {
    std::mt19937_64 rng(151);
    const EmbeddingSpec emb{3};
    const auto spec = AnsatzSpec::with_default_ranges(2, 3);
    for (int k = 0; k < 10; ++k) {
        const AngleTensor theta(2, 3, testing::uniform_vector(18, -3.0, 3.0, rng));
        const auto a = testing::uniform_vector(3, -2.0, 2.0, rng);
        const auto b = testing::uniform_vector(3, -2.0, 2.0, rng);
        CHECK(std::abs(qvk_kernel(a, a, theta, emb, spec) - 1.0) < 1e-10);
        CHECK(std::abs(qvk_kernel(a, b, theta, emb, spec) - qvk_kernel(b, a, theta, emb, spec)) < 1e-10);
        const double plain = qsvm::kernels::eval_kernel(a, b, qsvm::kernels::KernelSpec::quantum());
        CHECK(std::abs(qvk_kernel(a, b, AngleTensor(2, 3), emb, spec) - plain) < 1e-10);
    }
    CHECK_THROWS_AS(qvk_kernel(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}, AngleTensor(2, 3),
                               emb, spec),
                    qsvm::DataError);
}

TEST_CASE("cached-state kernel gradient equals the tape shift rule") {
    std::mt19937_64 rng(157);
    const EmbeddingSpec emb{3};
    for (int k = 0; k < 10; ++k) {
        const auto spec = AnsatzSpec::with_default_ranges(1 + k % 2, 3);
        const AngleTensor theta(spec.n_layers, 3, testing::uniform_vector(spec.n_params(), -3.0, 3.0, rng));
        const auto a = testing::uniform_vector(3, -2.0, 2.0, rng);
        const auto b = testing::uniform_vector(3, -2.0, 2.0, rng);
        const auto fast = qvk_kernel_gradient(a, b, theta, emb, spec);
        const auto tape = qsvm::circuits::hybrid_kernel_tape(a, b, emb, spec);
        const auto ref =
            qsvm::autodiff::param_shift_gradient(tape, theta.flat(), qsvm::autodiff::Observable::AllZeroProjector);
        CHECK(testing::max_abs_diff(fast, ref) < 1e-10);
        const auto fd = qsvm::autodiff::finite_diff_gradient(
            [&](std::span<const double> p) {
                return qvk_kernel(a, b, AngleTensor(spec.n_layers, 3, std::vector<double>(p.begin(), p.end())), emb,
                                  spec);
            },
            theta.flat());
        CHECK(testing::max_abs_diff(fast, fd) < 1e-6);
    }
}

TEST_CASE("score examples") {
    std::mt19937_64 rng(163);
    const auto set = random_set(5, 2, rng);
    auto model = init_qvk_model(set, FitConfig{});
    std::fill(model.weights.begin(), model.weights.end(), 0.0);
    model.bias = 0.3;
    CHECK(qvk_score(model, std::vector<double>{0.1, 0.2}) == doctest::Approx(0.3));

    LabeledSet single{qsvm::Matrix(1, 2, 0.4), {1}};
    auto one = init_qvk_model(single, FitConfig{});
    one.weights = {1.0};
    CHECK(qvk_score(one, std::vector<double>{0.4, 0.4}) == doctest::Approx(1.0));
}

TEST_CASE("initial weights are y / m") {
    std::mt19937_64 rng(167);
    const auto set = random_set(8, 2, rng);
    const auto model = init_qvk_model(set, FitConfig{});
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(model.weights[i] == doctest::Approx(set.y[i] / 8.0));
    }
    CHECK(model.bias == 0.0);
}

TEST_CASE("permuting retained samples and weights leaves scores unchanged") {
    std::mt19937_64 rng(173);
    const auto set = random_set(7, 3, rng);
    const auto model = random_model(set, 1, rng);
    std::vector<std::size_t> perm(7);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    QvkModel permuted = model;
    permuted.train_X = qsvm::select_rows(model.train_X, perm);
    for (std::size_t i = 0; i < 7; ++i) {
        permuted.weights[i] = model.weights[perm[i]];
        permuted.train_y[i] = model.train_y[perm[i]];
    }
    const auto probe = testing::random_matrix(5, 3, -1.0, 1.0, rng);
    const auto s1 = qvk_scores(model, probe);
    const auto s2 = qvk_scores(permuted, probe);
    CHECK(testing::max_abs_diff(s1, s2) < 1e-12);
}

TEST_CASE("cost gradient matches finite differences away from kinks") {
    std::mt19937_64 rng(179);
    int checked = 0;
    for (int trial = 0; trial < 20 && checked < 5; ++trial) {
        const auto set = random_set(6, 2, rng);
        const auto model = random_model(set, 2, rng);
        const auto scores = qvk_scores(model, set.X);
        bool near_kink = false;
        for (std::size_t i = 0; i < set.size(); ++i) {
            near_kink = near_kink || std::abs(1.0 - set.y[i] * scores[i]) < 1e-3;
        }
        if (near_kink) {
            continue;
        }
        ++checked;
        const auto g = qvk_cost_gradient(model, set.X, set.y);
        const auto fd_theta = qsvm::autodiff::finite_diff_gradient(
            [&](std::span<const double> p) {
                QvkModel m = model;
                std::copy(p.begin(), p.end(), m.theta.flat().begin());
                return qvk_cost(m, set.X, set.y);
            },
            model.theta.flat());
        CHECK(testing::max_abs_diff(g.theta, fd_theta) < 1e-6);
        const auto fd_w = qsvm::autodiff::finite_diff_gradient(
            [&](std::span<const double> p) {
                QvkModel m = model;
                m.weights.assign(p.begin(), p.end());
                return qvk_cost(m, set.X, set.y);
            },
            model.weights);
        CHECK(testing::max_abs_diff(g.weights, fd_w) < 1e-6);
        QvkModel up = model;
        QvkModel down = model;
        up.bias += 1e-6;
        down.bias -= 1e-6;
        CHECK(std::abs(g.bias - (qvk_cost(up, set.X, set.y) - qvk_cost(down, set.X, set.y)) / 2e-6) < 1e-6);
    }
    CHECK(checked == 5);
}

TEST_CASE("trained-kernel Gram matrices stay PSD") {
    std::mt19937_64 rng(181);
    const auto X = testing::random_matrix(20, 4, -2.0, 2.0, rng);
    const auto spec = AnsatzSpec::with_default_ranges(2, 4);
    for (int k = 0; k < 3; ++k) {
        const AngleTensor theta(2, 4, testing::uniform_vector(24, -3.0, 3.0, rng));
        const auto g = qsvm::kernels::gram_matrix(X, qsvm::kernels::KernelSpec::trainable(spec, theta));
        CHECK(g.symmetry_residual() == 0.0);
        CHECK(qsvm::kernels::min_eigenvalue(g) >= -1e-8);
    }
}

TEST_CASE("frozen angles give a non-increasing loss at small steps") {
    std::mt19937_64 rng(191);
    for (int trial = 0; trial < 3; ++trial) {
        const auto set = random_set(10, 2, rng);
        FitConfig cfg;
        cfg.layers = 1;
        cfg.learning_rate = 1e-3;
        cfg.epochs = 20;
        cfg.seed = 100 + trial;
        auto model = init_qvk_model(set, cfg);
        const double start = qvk_cost(model, set.X, set.y);
        const auto before = model.theta;
        const auto trace = continue_training(model, set, cfg, false);
        CHECK(model.theta == before);
        double prev = start;
        for (const auto &r : trace.epochs) {
            CHECK(r.train_loss <= prev + 1e-15);
            prev = r.train_loss;
        }
    }
}

TEST_CASE("separable toy set reaches full training accuracy") {
    LabeledSet set;
    set.X.push_row(std::vector<double>{0.1, 0.2});
    set.X.push_row(std::vector<double>{0.3, -0.1});
    set.X.push_row(std::vector<double>{2.8, 2.9});
    set.X.push_row(std::vector<double>{3.0, 2.7});
    set.y = {1, 1, -1, -1};
    FitConfig cfg;
    cfg.layers = 1;
    const auto [model, trace] = train_qvk(set, set, cfg);
    CHECK(trace.epochs.size() == 60);
    CHECK(trace.epochs.back().train_accuracy == 1.0);
    CHECK(predict_qvk(model, set.X) == set.y);
}

TEST_CASE("zero learning rate and determinism") {
    std::mt19937_64 rng(193);
    const auto train = random_set(8, 2, rng);
    const auto test = random_set(4, 2, rng);
    FitConfig cfg;
    cfg.layers = 1;
    cfg.epochs = 4;
    const auto a = train_qvk(train, test, cfg);
    const auto b = train_qvk(train, test, cfg);
    CHECK(a.first.weights == b.first.weights);
    CHECK(a.first.theta == b.first.theta);
    cfg.learning_rate = 0.0;
    const auto c = train_qvk(train, test, cfg);
    for (const auto &r : c.second.epochs) {
        CHECK(r.train_loss == c.second.epochs.front().train_loss);
    }
    CHECK_THROWS_AS(train_qvk(LabeledSet{train.X, std::vector<int>(8, 2)}, test, cfg), qsvm::DataError);
}

TEST_CASE("refit at theta = 0 reproduces the plain quantum-kernel SVM") {
    std::mt19937_64 rng(197);
    const auto set = random_set(16, 4, rng);
    auto model = init_qvk_model(set, FitConfig{});
    model.theta = AngleTensor(model.theta.layers(), 4);
    qsvm::svm::TrainConfig tc;
    const auto refit = refit_svm(model, set, tc);
    const auto plain = qsvm::svm::fit(set.X, set.y, qsvm::kernels::KernelSpec::quantum(), tc);
    const auto probe = testing::random_matrix(6, 4, -1.5, 1.5, rng);
    for (std::size_t i = 0; i < probe.rows(); ++i) {
        CHECK(std::abs(qsvm::svm::decision_function(refit, probe.row(i)) -
                       qsvm::svm::decision_function(plain, probe.row(i))) < 1e-10);
    }
    const auto gram = qsvm::kernels::gram_matrix(set.X, refit.kernel);
    CHECK(qsvm::svm::check_kkt(gram, refit, 1e-3).violations == 0);
}

TEST_CASE("QVK model JSON round trip") {
    std::mt19937_64 rng(199);
    const auto set = random_set(6, 3, rng);
    const auto model = random_model(set, 2, rng);
    const auto back = qsvm::io::qvk_model_from_json(qsvm::io::Json::parse(qsvm::io::to_json(model).dump()));
    const auto probe = testing::random_matrix(4, 3, -1.0, 1.0, rng);
    CHECK(testing::max_abs_diff(qvk_scores(model, probe), qvk_scores(back, probe)) <= 1e-12);
    QvkModel broken = model;
    broken.weights.pop_back();
    CHECK_THROWS_AS(broken.validate(), qsvm::DataError);
}
