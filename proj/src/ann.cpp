#include "vlcris/ann.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "vlcris/rng.hpp"

namespace vlcris::ann {

namespace {

Eigen::MatrixXd he_uniform(int rows, int cols, rng::Stream& stream) {
    const double limit = std::sqrt(6.0 / cols);
    Eigen::MatrixXd w(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) w(r, c) = stream.uniform(-limit, limit);
    return w;
}

Eigen::VectorXd normalize_one(const AnnModel& model, const Eigen::VectorXd& xi,
                              double x, double y) {
    if (xi.size() != model.n_aps)
        throw std::invalid_argument("ann input: blockage vector size mismatch");
    Eigen::VectorXd in(model.input_dim());
    in.head(model.n_aps) = xi;
    in(model.n_aps) = x / model.room_width;
    in(model.n_aps + 1) = y / model.room_depth;
    return in;
}

// Softmax over each head's rows, columns are samples.
void headwise_softmax(Eigen::MatrixXd& logits, int n_heads, int head_width) {
    for (int h = 0; h < n_heads; ++h) {
        auto block = logits.middleRows(h * head_width, head_width);
        for (Eigen::Index col = 0; col < block.cols(); ++col) {
            auto v = block.col(col);
            const double peak = v.maxCoeff();
            v = (v.array() - peak).exp();
            v /= v.sum();
        }
    }
}

}  // namespace

AnnModel make_model(int n_aps, int n_elements, const std::array<int, 3>& hidden,
                    double room_width, double room_depth, std::uint64_t seed) {
    if (n_aps < 1 || n_elements < 1)
        throw std::invalid_argument("ann model needs at least one AP and one element");
    AnnModel model;
    model.n_aps = n_aps;
    model.n_elements = n_elements;
    model.room_width = room_width;
    model.room_depth = room_depth;

    rng::Stream stream(rng::derive_stream(seed, 0x616ELL));
    const int dims[5] = {model.input_dim(), hidden[0], hidden[1], hidden[2],
                         model.output_dim()};
    for (int layer = 0; layer < 4; ++layer) {
        model.weights.push_back(he_uniform(dims[layer + 1], dims[layer], stream));
        model.biases.push_back(Eigen::VectorXd::Zero(dims[layer + 1]));
    }
    return model;
}

double loss_and_gradients(const AnnModel& model, const Eigen::MatrixXd& inputs,
                          const Eigen::MatrixXi& labels, Gradients* grads) {
    if (inputs.rows() != model.input_dim())
        throw std::invalid_argument("ann input dimension mismatch");
    const Eigen::Index batch = inputs.cols();
    if (labels.rows() != batch || labels.cols() != model.n_elements)
        throw std::invalid_argument("ann label shape mismatch");

    // Forward pass, keeping activations for the backward sweep.
    std::vector<Eigen::MatrixXd> acts(5);
    acts[0] = inputs;
    for (int layer = 0; layer < 4; ++layer) {
        Eigen::MatrixXd z =
            (model.weights[layer] * acts[layer]).colwise() + model.biases[layer];
        if (layer < 3) z = z.cwiseMax(0.0);
        acts[layer + 1] = std::move(z);
    }

    Eigen::MatrixXd probs = acts[4];
    headwise_softmax(probs, model.n_elements, model.n_aps);

    double loss = 0.0;
    for (Eigen::Index s = 0; s < batch; ++s)
        for (int head = 0; head < model.n_elements; ++head) {
            const double p = probs(head * model.n_aps + labels(s, head), s);
            loss -= std::log(std::max(p, 1e-300));
        }
    loss /= static_cast<double>(batch);

    if (grads) {
        grads->weights.assign(4, {});
        grads->biases.assign(4, {});

        Eigen::MatrixXd delta = probs;  // dL/dZ4 = (P - Y) / batch
        for (Eigen::Index s = 0; s < batch; ++s)
            for (int head = 0; head < model.n_elements; ++head)
                delta(head * model.n_aps + labels(s, head), s) -= 1.0;
        delta /= static_cast<double>(batch);

        for (int layer = 3; layer >= 0; --layer) {
            grads->weights[layer] = delta * acts[layer].transpose();
            grads->biases[layer] = delta.rowwise().sum();
            if (layer > 0) {
                delta = model.weights[layer].transpose() * delta;
                delta = delta.array() * (acts[layer].array() > 0.0).cast<double>();
            }
        }
    }
    return loss;
}

Eigen::MatrixXd normalized_inputs(const AnnModel& model, const ris_assign::TrainingSet& set) {
    if (set.inputs.cols() != model.input_dim())
        throw std::invalid_argument("training set does not match model input width");
    Eigen::MatrixXd x = set.inputs.transpose();
    x.row(model.n_aps) /= model.room_width;
    x.row(model.n_aps + 1) /= model.room_depth;
    return x;
}

Eigen::MatrixXd ann_forward(const AnnModel& model, const Eigen::VectorXd& xi,
                            double x, double y) {
    Eigen::VectorXd a = normalize_one(model, xi, x, y);
    for (int layer = 0; layer < 4; ++layer) {
        Eigen::VectorXd z = model.weights[layer] * a + model.biases[layer];
        if (layer < 3) z = z.cwiseMax(0.0);
        a = std::move(z);
    }
    Eigen::MatrixXd logits = a;
    headwise_softmax(logits, model.n_elements, model.n_aps);
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                          Eigen::RowMajor>>(logits.data(),
                                                            model.n_elements, model.n_aps);
}

ris_assign::Assignment ann_predict(const AnnModel& model, const Eigen::VectorXd& xi,
                                   double x, double y,
                                   const std::vector<int>* restrict_to) {
    const Eigen::MatrixXd heads = ann_forward(model, xi, x, y);
    ris_assign::Assignment out;
    out.element_to_ap.resize(model.n_elements);
    for (int head = 0; head < model.n_elements; ++head) {
        int best = -1;
        double best_p = -1.0;
        if (restrict_to && !restrict_to->empty()) {
            for (int ap : *restrict_to)
                if (heads(head, ap) > best_p) {
                    best_p = heads(head, ap);
                    best = ap;
                }
        } else {
            for (int ap = 0; ap < model.n_aps; ++ap)
                if (heads(head, ap) > best_p) {
                    best_p = heads(head, ap);
                    best = ap;
                }
        }
        out.element_to_ap[head] = best;
    }
    return out;
}

TrainLog ann_train(AnnModel& model, const ris_assign::TrainingSet& set,
                   const TrainHyper& hyper) {
    if (set.inputs.rows() == 0) throw std::invalid_argument("empty training set");
    if (hyper.batch_size < 1 || hyper.epochs < 1 || hyper.learning_rate <= 0.0)
        throw std::invalid_argument("bad training hyperparameters");

    const Eigen::MatrixXd inputs = normalized_inputs(model, set);
    const Eigen::Index count = inputs.cols();

    TrainLog log;
    log.loss_history.push_back(loss_and_gradients(model, inputs, set.labels, nullptr));

    rng::Stream shuffle_stream(rng::derive_stream(hyper.seed, 0x7368ULL));
    std::vector<Eigen::Index> order(count);
    for (Eigen::Index i = 0; i < count; ++i) order[i] = i;

    Gradients grads;
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        // Fisher-Yates with the pinned stream keeps runs byte-reproducible.
        for (Eigen::Index i = count - 1; i > 0; --i) {
            const auto j = static_cast<Eigen::Index>(shuffle_stream.below(i + 1));
            std::swap(order[i], order[j]);
        }

        for (Eigen::Index begin = 0; begin < count; begin += hyper.batch_size) {
            const Eigen::Index size = std::min<Eigen::Index>(hyper.batch_size, count - begin);
            Eigen::MatrixXd batch(inputs.rows(), size);
            Eigen::MatrixXi labels(size, set.n_elements);
            for (Eigen::Index k = 0; k < size; ++k) {
                batch.col(k) = inputs.col(order[begin + k]);
                labels.row(k) = set.labels.row(order[begin + k]);
            }
            loss_and_gradients(model, batch, labels, &grads);
            for (int layer = 0; layer < 4; ++layer) {
                model.weights[layer] -= hyper.learning_rate * grads.weights[layer];
                model.biases[layer] -= hyper.learning_rate * grads.biases[layer];
            }
        }

        const double loss = loss_and_gradients(model, inputs, set.labels, nullptr);
        if (!std::isfinite(loss))
            throw std::runtime_error("ann training diverged (non-finite loss) at epoch " +
                                     std::to_string(epoch));
        log.loss_history.push_back(loss);
    }
    return log;
}

void save_model(const AnnModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open model file for writing: " + path);
    char buf[64];
    out << "VLCRIS-ANN 1\n";
    std::snprintf(buf, sizeof buf, "%.17g %.17g", model.room_width, model.room_depth);
    out << model.n_aps << ' ' << model.n_elements << ' ' << buf << '\n';
    out << model.weights.size() << '\n';
    for (std::size_t layer = 0; layer < model.weights.size(); ++layer) {
        const auto& w = model.weights[layer];
        out << w.rows() << ' ' << w.cols() << '\n';
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                std::snprintf(buf, sizeof buf, "%.17g", w(r, c));
                out << buf << (c + 1 == w.cols() ? '\n' : ' ');
            }
        }
        const auto& b = model.biases[layer];
        for (Eigen::Index r = 0; r < b.size(); ++r) {
            std::snprintf(buf, sizeof buf, "%.17g", b(r));
            out << buf << (r + 1 == b.size() ? '\n' : ' ');
        }
    }
    if (!out) throw std::runtime_error("failed writing model file: " + path);
}

AnnModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    std::string tag;
    int version = 0;
    in >> tag >> version;
    if (tag != "VLCRIS-ANN" || version != 1)
        throw std::runtime_error("unrecognized model file format: " + path);

    AnnModel model;
    in >> model.n_aps >> model.n_elements >> model.room_width >> model.room_depth;
    std::size_t layers = 0;
    in >> layers;
    for (std::size_t layer = 0; layer < layers; ++layer) {
        Eigen::Index rows = 0, cols = 0;
        in >> rows >> cols;
        Eigen::MatrixXd w(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c) in >> w(r, c);
        Eigen::VectorXd b(rows);
        for (Eigen::Index r = 0; r < rows; ++r) in >> b(r);
        model.weights.push_back(std::move(w));
        model.biases.push_back(std::move(b));
    }
    if (!in) throw std::runtime_error("truncated model file: " + path);
    return model;
}

}  // namespace vlcris::ann
