#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "vlcris/ann.hpp"
#include "vlcris/rng.hpp"

using namespace vlcris;
using ann::AnnModel;

namespace {

ris_assign::TrainingSet tiny_set(int n_aps, int n_elements, int count, std::uint64_t seed) {
    ris_assign::TrainingSet set;
    set.n_aps = n_aps;
    set.n_elements = n_elements;
    set.inputs.resize(count, n_aps + 2);
    set.labels.resize(count, n_elements);
    set.oracle.assign(count, "brute-force");
    rng::Stream s(seed);
    for (int r = 0; r < count; ++r) {
        for (int i = 0; i < n_aps; ++i) set.inputs(r, i) = s.next_double();
        set.inputs(r, n_aps) = s.uniform(0, 5);
        set.inputs(r, n_aps + 1) = s.uniform(0, 5);
        for (int j = 0; j < n_elements; ++j)
            set.labels(r, j) = static_cast<int>(s.below(n_aps));
    }
    return set;
}

}  // namespace

TEST_CASE("zero weights produce uniform heads") {
    auto model = ann::make_model(4, 3, {8, 8, 8}, 5.0, 5.0, 1);
    for (auto& w : model.weights) w.setZero();
    for (auto& b : model.biases) b.setZero();

    Eigen::VectorXd xi(4);
    xi << 0.2, 0.8, 0.0, 1.0;
    auto heads = ann::ann_forward(model, xi, 1.0, 2.0);
    REQUIRE(heads.rows() == 3);
    REQUIRE(heads.cols() == 4);
    for (int h = 0; h < 3; ++h)
        for (int a = 0; a < 4; ++a) CHECK(heads(h, a) == doctest::Approx(0.25));

    // Uniform heads pick the lowest index.
    auto pred = ann::ann_predict(model, xi, 1.0, 2.0);
    for (int ap : pred.element_to_ap) CHECK(ap == 0);
}

TEST_CASE("heads are probability distributions for random weights") {
    rng::Stream s(17);
    for (int trial = 0; trial < 50; ++trial) {
        auto model =
            ann::make_model(5, 4, {16, 12, 8}, 5.0, 5.0, s.next_u64());
        Eigen::VectorXd xi(5);
        for (int i = 0; i < 5; ++i) xi(i) = s.next_double();
        auto heads = ann::ann_forward(model, xi, s.uniform(0, 5), s.uniform(0, 5));
        for (int h = 0; h < 4; ++h) {
            double sum = 0.0;
            for (int a = 0; a < 5; ++a) {
                CHECK(heads(h, a) >= 0.0);
                sum += heads(h, a);
            }
            CHECK(std::abs(sum - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("adding a constant to one head's logits leaves its softmax unchanged") {
    auto model = ann::make_model(4, 2, {8, 8, 8}, 5.0, 5.0, 21);
    Eigen::VectorXd xi(4);
    xi << 0.1, 0.4, 0.9, 0.3;
    auto before = ann::ann_forward(model, xi, 2.0, 3.0);

    auto shifted = model;
    shifted.biases[3].segment(0, 4).array() += 2.5;  // head 0 logits
    auto after = ann::ann_forward(shifted, xi, 2.0, 3.0);
    for (int a = 0; a < 4; ++a) CHECK(std::abs(after(0, a) - before(0, a)) < 1e-12);
}

TEST_CASE("prediction honors a candidate restriction and certainty") {
    auto model = ann::make_model(3, 2, {8, 8, 8}, 5.0, 5.0, 5);
    for (auto& w : model.weights) w.setZero();
    for (auto& b : model.biases) b.setZero();
    // Drive head 0 to certainty on AP 2 via its output bias.
    model.biases[3](2) = 50.0;

    Eigen::VectorXd xi = Eigen::VectorXd::Zero(3);
    auto pred = ann::ann_predict(model, xi, 1.0, 1.0);
    CHECK(pred.element_to_ap[0] == 2);
    CHECK(pred.element_to_ap[1] == 0);  // uniform head, lowest index

    std::vector<int> restricted{1, 2};
    auto masked = ann::ann_predict(model, xi, 1.0, 1.0, &restricted);
    CHECK(masked.element_to_ap[0] == 2);
    CHECK(masked.element_to_ap[1] == 1);  // 0 is excluded

    Eigen::VectorXd wrong(5);
    wrong.setZero();
    CHECK_THROWS_AS(ann::ann_forward(model, wrong, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("analytic gradients match central finite differences") {
    auto model = ann::make_model(4, 4, {6, 5, 4}, 5.0, 5.0, 31);
    auto set = tiny_set(4, 4, 8, 77);
    Eigen::MatrixXd inputs = ann::normalized_inputs(model, set);

    ann::Gradients grads;
    ann::loss_and_gradients(model, inputs, set.labels, &grads);

    const double step = 1e-5;
    double worst = 0.0;
    for (int layer = 0; layer < 4; ++layer) {
        auto check_param = [&](double* p, double analytic) {
            const double keep = *p;
            *p = keep + step;
            double up = ann::loss_and_gradients(model, inputs, set.labels, nullptr);
            *p = keep - step;
            double down = ann::loss_and_gradients(model, inputs, set.labels, nullptr);
            *p = keep;
            double numeric = (up - down) / (2.0 * step);
            // Floor keeps near-zero entries from amplifying roundoff noise.
            double rel = std::abs(analytic - numeric) /
                         std::max({std::abs(analytic), std::abs(numeric), 1e-6});
            worst = std::max(worst, rel);
        };
        auto& w = model.weights[layer];
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c)
                check_param(&w(r, c), grads.weights[layer](r, c));
        auto& b = model.biases[layer];
        for (Eigen::Index r = 0; r < b.size(); ++r)
            check_param(&b(r), grads.biases[layer](r));
    }
    CHECK(worst < 1e-4);
    MESSAGE("max relative gradient error: " << worst);
}

TEST_CASE("training memorizes a single sample") {
    auto set = tiny_set(3, 2, 1, 9);
    set.labels(0, 0) = 1;
    set.labels(0, 1) = 2;
    auto model = ann::make_model(3, 2, {16, 16, 8}, 5.0, 5.0, 3);
    ann::TrainHyper hyper{1, 0.5, 200, 4};
    auto log = ann::ann_train(model, set, hyper);
    CHECK(log.loss_history.back() < log.loss_history.front());

    Eigen::VectorXd xi = set.inputs.row(0).head(3);
    auto pred = ann::ann_predict(model, xi, set.inputs(0, 3), set.inputs(0, 4));
    CHECK(pred.element_to_ap[0] == 1);
    CHECK(pred.element_to_ap[1] == 2);
}

TEST_CASE("training is reproducible seed for seed") {
    auto set = tiny_set(4, 3, 64, 13);
    auto m1 = ann::make_model(4, 3, {16, 12, 8}, 5.0, 5.0, 8);
    auto m2 = ann::make_model(4, 3, {16, 12, 8}, 5.0, 5.0, 8);
    ann::TrainHyper hyper{16, 0.1, 5, 21};
    auto l1 = ann::ann_train(m1, set, hyper);
    auto l2 = ann::ann_train(m2, set, hyper);
    CHECK(l1.loss_history == l2.loss_history);
    for (int layer = 0; layer < 4; ++layer) {
        CHECK(m1.weights[layer] == m2.weights[layer]);
        CHECK(m1.biases[layer] == m2.biases[layer]);
    }
    CHECK(l1.loss_history.back() < l1.loss_history.front());
}

TEST_CASE("model files round-trip bit for bit") {
    auto model = ann::make_model(4, 3, {16, 12, 8}, 5.0, 4.0, 8);
    auto set = tiny_set(4, 3, 32, 15);
    ann::ann_train(model, set, {8, 0.1, 3, 2});

    const std::string path = "/tmp/vlcris_test_model.txt";
    ann::save_model(model, path);
    auto loaded = ann::load_model(path);
    CHECK(loaded.n_aps == model.n_aps);
    CHECK(loaded.n_elements == model.n_elements);
    CHECK(loaded.room_width == model.room_width);
    CHECK(loaded.room_depth == model.room_depth);
    for (int layer = 0; layer < 4; ++layer) {
        CHECK(loaded.weights[layer] == model.weights[layer]);
        CHECK(loaded.biases[layer] == model.biases[layer]);
    }
    std::remove(path.c_str());
    CHECK_THROWS_AS(ann::load_model("/tmp/definitely_missing_model.txt"), std::runtime_error);
}
