#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "vlcris/ris_assign.hpp"

namespace vlcris::ann {

/// Assignment network: input (xi_1..xi_N, x, y), three ReLU hidden layers,
/// and M independent N-way softmax heads. Positions are normalized by the
/// room dimensions stored with the model.
struct AnnModel {
    int n_aps = 0;
    int n_elements = 0;
    double room_width = 5.0;
    double room_depth = 5.0;
    std::vector<Eigen::MatrixXd> weights;  // 4 affine layers
    std::vector<Eigen::VectorXd> biases;

    int input_dim() const { return n_aps + 2; }
    int output_dim() const { return n_aps * n_elements; }
};

/// He-uniform initialization, deterministic given the seed.
AnnModel make_model(int n_aps, int n_elements, const std::array<int, 3>& hidden,
                    double room_width, double room_depth, std::uint64_t seed);

/// Head probabilities (n_elements x n_aps) for one raw input. Throws
/// std::invalid_argument on a dimension mismatch.
Eigen::MatrixXd ann_forward(const AnnModel& model, const Eigen::VectorXd& xi,
                            double x, double y);

/// Per-head argmax mapped to AP indices; exact ties resolve to the lowest
/// index. When `restrict_to` is given the argmax runs over that subset only.
ris_assign::Assignment ann_predict(const AnnModel& model, const Eigen::VectorXd& xi,
                                   double x, double y,
                                   const std::vector<int>* restrict_to = nullptr);

struct TrainHyper {
    int batch_size = 64;
    double learning_rate = 0.05;
    int epochs = 40;
    std::uint64_t seed = 1;
};

struct TrainLog {
    std::vector<double> loss_history;  // mean summed-head cross-entropy per epoch
};

/// Mini-batch gradient descent on summed per-head cross-entropy.
/// Deterministic given the seed; throws std::runtime_error if the loss
/// turns non-finite.
TrainLog ann_train(AnnModel& model, const ris_assign::TrainingSet& set,
                   const TrainHyper& hyper);

struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
};

/// Batched loss and, when `grads` is non-null, its analytic gradient.
/// Inputs are already normalized, one column per sample; labels hold the
/// 0-based AP index per (sample, element). Exposed so the gradient can be
/// checked against finite differences.
double loss_and_gradients(const AnnModel& model, const Eigen::MatrixXd& inputs,
                          const Eigen::MatrixXi& labels, Gradients* grads);

/// Normalized input matrix (input_dim x count) of a training set.
Eigen::MatrixXd normalized_inputs(const AnnModel& model, const ris_assign::TrainingSet& set);

/// Plain-text model file: version tag, layer widths, then row-major weight
/// and bias arrays with full precision.
void save_model(const AnnModel& model, const std::string& path);
AnnModel load_model(const std::string& path);

}  // namespace vlcris::ann
