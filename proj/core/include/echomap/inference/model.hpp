#ifndef ECHOMAP_INFERENCE_MODEL_HPP
#define ECHOMAP_INFERENCE_MODEL_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "echomap/inference/layers.hpp"
#include "echomap/signal/types.hpp"

namespace echomap::inference {

// Two convolutional layers with a global max pool feed a shared feature
// vector into a pipe classifier head and a depth regression head. The
// standard configuration is fixed by the design (128 channels per layer,
// 128/2 pipe head, 256/128/1 depth head); smaller configurations exist for
// gradient checking.
struct ModelConfig {
    int input_rows = signal::MelSegment::kRows;
    int input_cols = signal::MelSegment::kCols;
    int conv1_channels = 128;
    int conv1_kernel = 5;
    int conv2_channels = 128;
    int conv2_kernel = 3;
    int pipe_hidden = 128;
    int depth_hidden1 = 256;
    int depth_hidden2 = 128;

    static ModelConfig standard() { return {}; }
    // A few hundred parameters; every gradient is cheap to finite-difference.
    static ModelConfig downsized();

    int conv1_out_rows() const { return input_rows - conv1_kernel + 1; }
    int conv1_out_cols() const { return input_cols - conv1_kernel + 1; }
    int conv2_out_rows() const { return conv1_out_rows() - conv2_kernel + 1; }
    int conv2_out_cols() const { return conv1_out_cols() - conv2_kernel + 1; }

    void validate() const; // throws InvalidParameterError
};

struct JointModel {
    ModelConfig config;
    Conv2d conv1;
    Conv2d conv2;
    Dense pipe_fc1; // feature -> pipe_hidden
    Dense pipe_fc2; // pipe_hidden -> 2
    Dense depth_fc1;
    Dense depth_fc2;
    Dense depth_fc3;

    JointModel() : JointModel(ModelConfig::standard()) {}
    explicit JointModel(const ModelConfig& cfg);

    // Weights uniform in [-s, s] with s = sqrt(6 / (fan_in + fan_out)),
    // biases zero; fully determined by the seed.
    static JointModel seeded(const ModelConfig& cfg, std::uint64_t seed);

    Eigen::Index parameter_count() const;
    Eigen::VectorXd flatten() const;
    void unflatten(const Eigen::VectorXd& theta);
};

struct Prediction {
    Eigen::Vector2d pipe_probs = Eigen::Vector2d::Zero();
    double depth = 0.0;
};

// Every intermediate needed by the backward pass.
struct ForwardCache {
    Eigen::MatrixXd col1, col2;
    FeatureMap act1, act2;
    std::vector<Eigen::Index> pool_argmax;
    Eigen::VectorXd pooled;
    Eigen::VectorXd pipe_h;
    Eigen::Vector2d probs;
    Eigen::VectorXd depth_h1, depth_h2;
    double depth = 0.0;
};

// Deterministic forward pass; the encoder runs once and both heads consume
// the same pooled feature vector. Throws InvalidShapeError when the
// segment does not match the configured input size.
Prediction forward(const JointModel& model, const Eigen::MatrixXd& segment,
                   ForwardCache* cache = nullptr);
Prediction forward(const JointModel& model, const signal::MelSegment& segment,
                   ForwardCache* cache = nullptr);

struct Labels {
    int pipe_label = 0;                // 0 = no pipe, 1 = pipe
    std::optional<double> depth;       // meters; absent masks the depth loss
};

struct LossWeights {
    double w0 = 1.0; // depth term
    double w1 = 1.0; // pipe term
};

// Parameter gradients, mirroring the model layout.
struct Gradients {
    Eigen::MatrixXd conv1_w, conv2_w;
    Eigen::VectorXd conv1_b, conv2_b;
    Eigen::MatrixXd pipe1_w, pipe2_w;
    Eigen::VectorXd pipe1_b, pipe2_b;
    Eigen::MatrixXd depth1_w, depth2_w, depth3_w;
    Eigen::VectorXd depth1_b, depth2_b, depth3_b;

    static Gradients zero(const JointModel& model);
    void add(const Gradients& other);
    Eigen::VectorXd flatten() const;
};

// Analytic gradients of the joint loss for one sample. Requires the cache
// produced by forward() on the same segment.
Gradients backward(const JointModel& model, const ForwardCache& cache, const Labels& labels,
                   const LossWeights& weights = {});

// Joint loss value for a finished forward pass (depth masked when absent).
double sample_loss(const Prediction& prediction, const Labels& labels,
                   const LossWeights& weights = {});

} // namespace echomap::inference

#endif
