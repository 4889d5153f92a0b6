#include "echomap/inference/model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "echomap/errors.hpp"
#include "echomap/inference/loss.hpp"
#include "echomap/rng.hpp"

namespace echomap::inference {

ModelConfig ModelConfig::downsized() {
    ModelConfig cfg;
    cfg.input_rows = 10;
    cfg.input_cols = 8;
    cfg.conv1_channels = 4;
    cfg.conv1_kernel = 3;
    cfg.conv2_channels = 6;
    cfg.conv2_kernel = 3;
    cfg.pipe_hidden = 6;
    cfg.depth_hidden1 = 8;
    cfg.depth_hidden2 = 6;
    return cfg;
}

void ModelConfig::validate() const {
    if (input_rows <= 0 || input_cols <= 0)
        throw InvalidParameterError("model: input size must be positive");
    if (conv1_channels <= 0 || conv2_channels <= 0)
        throw InvalidParameterError("model: channel counts must be positive");
    if (conv1_kernel <= 0 || conv2_kernel <= 0)
        throw InvalidParameterError("model: kernel sizes must be positive");
    if (conv2_out_rows() <= 0 || conv2_out_cols() <= 0)
        throw InvalidParameterError("model: input too small to survive two valid convolutions");
    if (pipe_hidden <= 0 || depth_hidden1 <= 0 || depth_hidden2 <= 0)
        throw InvalidParameterError("model: head sizes must be positive");
}

JointModel::JointModel(const ModelConfig& cfg)
    : config(cfg),
      conv1(1, cfg.conv1_channels, cfg.conv1_kernel, cfg.conv1_kernel),
      conv2(cfg.conv1_channels, cfg.conv2_channels, cfg.conv2_kernel, cfg.conv2_kernel),
      pipe_fc1(cfg.conv2_channels, cfg.pipe_hidden),
      pipe_fc2(cfg.pipe_hidden, 2),
      depth_fc1(cfg.conv2_channels, cfg.depth_hidden1),
      depth_fc2(cfg.depth_hidden1, cfg.depth_hidden2),
      depth_fc3(cfg.depth_hidden2, 1) {
    cfg.validate();
}

namespace {

void fill_uniform(Eigen::MatrixXd& weight, double fan_in, double fan_out,
                  std::mt19937_64& rng) {
    const double s = std::sqrt(6.0 / (fan_in + fan_out));
    double* data = weight.data();
    for (Eigen::Index i = 0; i < weight.size(); ++i)
        data[i] = s * (2.0 * uniform01(rng) - 1.0);
}

} // namespace

JointModel JointModel::seeded(const ModelConfig& cfg, std::uint64_t seed) {
    JointModel model(cfg);
    std::mt19937_64 rng(mix_seed(seed, 0x6d6f64656cull)); // "model"

    const double k1 = static_cast<double>(cfg.conv1_kernel) * cfg.conv1_kernel;
    const double k2 = static_cast<double>(cfg.conv2_kernel) * cfg.conv2_kernel;
    fill_uniform(model.conv1.weight, k1, cfg.conv1_channels * k1, rng);
    fill_uniform(model.conv2.weight, cfg.conv1_channels * k2, cfg.conv2_channels * k2, rng);
    fill_uniform(model.pipe_fc1.weight, cfg.conv2_channels, cfg.pipe_hidden, rng);
    fill_uniform(model.pipe_fc2.weight, cfg.pipe_hidden, 2, rng);
    fill_uniform(model.depth_fc1.weight, cfg.conv2_channels, cfg.depth_hidden1, rng);
    fill_uniform(model.depth_fc2.weight, cfg.depth_hidden1, cfg.depth_hidden2, rng);
    fill_uniform(model.depth_fc3.weight, cfg.depth_hidden2, 1, rng);
    return model;
}

Eigen::Index JointModel::parameter_count() const {
    return conv1.parameter_count() + conv2.parameter_count() + pipe_fc1.parameter_count() +
           pipe_fc2.parameter_count() + depth_fc1.parameter_count() +
           depth_fc2.parameter_count() + depth_fc3.parameter_count();
}

namespace {

template <typename Fn>
void for_each_tensor(JointModel& model, Fn&& fn) {
    fn(model.conv1.weight);
    fn(model.conv1.bias);
    fn(model.conv2.weight);
    fn(model.conv2.bias);
    fn(model.pipe_fc1.weight);
    fn(model.pipe_fc1.bias);
    fn(model.pipe_fc2.weight);
    fn(model.pipe_fc2.bias);
    fn(model.depth_fc1.weight);
    fn(model.depth_fc1.bias);
    fn(model.depth_fc2.weight);
    fn(model.depth_fc2.bias);
    fn(model.depth_fc3.weight);
    fn(model.depth_fc3.bias);
}

} // namespace

Eigen::VectorXd JointModel::flatten() const {
    Eigen::VectorXd theta(parameter_count());
    Eigen::Index offset = 0;
    for_each_tensor(const_cast<JointModel&>(*this), [&](auto& tensor) {
        for (Eigen::Index i = 0; i < tensor.size(); ++i) theta(offset++) = tensor.data()[i];
    });
    return theta;
}

void JointModel::unflatten(const Eigen::VectorXd& theta) {
    if (theta.size() != parameter_count())
        throw InvalidShapeError("unflatten: expected " + std::to_string(parameter_count()) +
                                " parameters, got " + std::to_string(theta.size()));
    Eigen::Index offset = 0;
    for_each_tensor(*this, [&](auto& tensor) {
        for (Eigen::Index i = 0; i < tensor.size(); ++i) tensor.data()[i] = theta(offset++);
    });
}

Prediction forward(const JointModel& model, const Eigen::MatrixXd& segment,
                   ForwardCache* cache) {
    if (segment.rows() != model.config.input_rows || segment.cols() != model.config.input_cols)
        throw InvalidShapeError("forward: expected " + std::to_string(model.config.input_rows) +
                                "x" + std::to_string(model.config.input_cols) + " input, got " +
                                std::to_string(segment.rows()) + "x" +
                                std::to_string(segment.cols()));

    ForwardCache local;
    ForwardCache& cc = cache ? *cache : local;

    const FeatureMap input = FeatureMap::from_matrix(segment);
    FeatureMap pre1 = conv_forward(model.conv1, input, &cc.col1);
    cc.act1 = pre1;
    cc.act1.data = pre1.data.array().tanh();

    FeatureMap pre2 = conv_forward(model.conv2, cc.act1, &cc.col2);
    cc.act2 = pre2;
    cc.act2.data = pre2.data.array().tanh();

    // global max pool per channel
    const int channels = cc.act2.channels;
    cc.pooled.resize(channels);
    cc.pool_argmax.assign(static_cast<std::size_t>(channels), 0);
    for (int ch = 0; ch < channels; ++ch) {
        Eigen::Index arg = 0;
        cc.pooled(ch) = cc.act2.data.row(ch).maxCoeff(&arg);
        cc.pool_argmax[static_cast<std::size_t>(ch)] = arg;
    }

    // pipe head
    const Eigen::VectorXd pipe_pre = model.pipe_fc1.forward(cc.pooled);
    cc.pipe_h = pipe_pre.array().tanh();
    const Eigen::VectorXd logits = model.pipe_fc2.forward(cc.pipe_h);
    cc.probs = softmax(logits);

    // depth head
    const Eigen::VectorXd d1_pre = model.depth_fc1.forward(cc.pooled);
    cc.depth_h1 = d1_pre.array().tanh();
    const Eigen::VectorXd d2_pre = model.depth_fc2.forward(cc.depth_h1);
    cc.depth_h2 = d2_pre.array().tanh();
    cc.depth = model.depth_fc3.forward(cc.depth_h2)(0);

    Prediction out;
    out.pipe_probs = cc.probs;
    out.depth = cc.depth;
    return out;
}

Prediction forward(const JointModel& model, const signal::MelSegment& segment,
                   ForwardCache* cache) {
    return forward(model, segment.values, cache);
}

Gradients Gradients::zero(const JointModel& model) {
    Gradients g;
    g.conv1_w = Eigen::MatrixXd::Zero(model.conv1.weight.rows(), model.conv1.weight.cols());
    g.conv1_b = Eigen::VectorXd::Zero(model.conv1.bias.size());
    g.conv2_w = Eigen::MatrixXd::Zero(model.conv2.weight.rows(), model.conv2.weight.cols());
    g.conv2_b = Eigen::VectorXd::Zero(model.conv2.bias.size());
    g.pipe1_w = Eigen::MatrixXd::Zero(model.pipe_fc1.weight.rows(), model.pipe_fc1.weight.cols());
    g.pipe1_b = Eigen::VectorXd::Zero(model.pipe_fc1.bias.size());
    g.pipe2_w = Eigen::MatrixXd::Zero(model.pipe_fc2.weight.rows(), model.pipe_fc2.weight.cols());
    g.pipe2_b = Eigen::VectorXd::Zero(model.pipe_fc2.bias.size());
    g.depth1_w =
        Eigen::MatrixXd::Zero(model.depth_fc1.weight.rows(), model.depth_fc1.weight.cols());
    g.depth1_b = Eigen::VectorXd::Zero(model.depth_fc1.bias.size());
    g.depth2_w =
        Eigen::MatrixXd::Zero(model.depth_fc2.weight.rows(), model.depth_fc2.weight.cols());
    g.depth2_b = Eigen::VectorXd::Zero(model.depth_fc2.bias.size());
    g.depth3_w =
        Eigen::MatrixXd::Zero(model.depth_fc3.weight.rows(), model.depth_fc3.weight.cols());
    g.depth3_b = Eigen::VectorXd::Zero(model.depth_fc3.bias.size());
    return g;
}

void Gradients::add(const Gradients& other) {
    conv1_w += other.conv1_w;
    conv1_b += other.conv1_b;
    conv2_w += other.conv2_w;
    conv2_b += other.conv2_b;
    pipe1_w += other.pipe1_w;
    pipe1_b += other.pipe1_b;
    pipe2_w += other.pipe2_w;
    pipe2_b += other.pipe2_b;
    depth1_w += other.depth1_w;
    depth1_b += other.depth1_b;
    depth2_w += other.depth2_w;
    depth2_b += other.depth2_b;
    depth3_w += other.depth3_w;
    depth3_b += other.depth3_b;
}

Eigen::VectorXd Gradients::flatten() const {
    Eigen::Index total = 0;
    // same order as JointModel::flatten
    std::vector<const Eigen::MatrixXd*> ws = {&conv1_w, &conv2_w, &pipe1_w, &pipe2_w,
                                              &depth1_w, &depth2_w, &depth3_w};
    std::vector<const Eigen::VectorXd*> bs = {&conv1_b, &conv2_b, &pipe1_b, &pipe2_b,
                                              &depth1_b, &depth2_b, &depth3_b};
    for (std::size_t i = 0; i < ws.size(); ++i) total += ws[i]->size() + bs[i]->size();
    Eigen::VectorXd flat(total);
    Eigen::Index offset = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        for (Eigen::Index k = 0; k < ws[i]->size(); ++k) flat(offset++) = ws[i]->data()[k];
        for (Eigen::Index k = 0; k < bs[i]->size(); ++k) flat(offset++) = (*bs[i])(k);
    }
    return flat;
}

double sample_loss(const Prediction& prediction, const Labels& labels,
                   const LossWeights& weights) {
    const double pipe = loss_pipe(prediction.pipe_probs, labels.pipe_label);
    const double depth =
        labels.depth ? loss_depth(prediction.depth, *labels.depth) : 0.0;
    return loss_joint(depth, pipe, weights.w0, weights.w1);
}

Gradients backward(const JointModel& model, const ForwardCache& cache, const Labels& labels,
                   const LossWeights& weights) {
    Gradients g = Gradients::zero(model);

    // pipe head: d(w1 * nll) / dlogits = w1 * (p - onehot)
    Eigen::Vector2d dlogits = cache.probs;
    dlogits(labels.pipe_label == 0 ? 0 : 1) -= 1.0;
    dlogits *= weights.w1;

    g.pipe2_w = dlogits * cache.pipe_h.transpose();
    g.pipe2_b = dlogits;
    Eigen::VectorXd dpipe_h = model.pipe_fc2.weight.transpose() * dlogits;
    Eigen::VectorXd dpipe_pre =
        dpipe_h.array() * (1.0 - cache.pipe_h.array().square());
    g.pipe1_w = dpipe_pre * cache.pooled.transpose();
    g.pipe1_b = dpipe_pre;
    Eigen::VectorXd dpooled = model.pipe_fc1.weight.transpose() * dpipe_pre;

    // depth head contributes only when supervised
    if (labels.depth) {
        const double ddepth = weights.w0 * 2.0 * (cache.depth - *labels.depth);
        Eigen::VectorXd ddepth_vec(1);
        ddepth_vec(0) = ddepth;
        g.depth3_w = ddepth_vec * cache.depth_h2.transpose();
        g.depth3_b = ddepth_vec;
        Eigen::VectorXd dh2 = model.depth_fc3.weight.transpose() * ddepth_vec;
        Eigen::VectorXd dh2_pre = dh2.array() * (1.0 - cache.depth_h2.array().square());
        g.depth2_w = dh2_pre * cache.depth_h1.transpose();
        g.depth2_b = dh2_pre;
        Eigen::VectorXd dh1 = model.depth_fc2.weight.transpose() * dh2_pre;
        Eigen::VectorXd dh1_pre = dh1.array() * (1.0 - cache.depth_h1.array().square());
        g.depth1_w = dh1_pre * cache.pooled.transpose();
        g.depth1_b = dh1_pre;
        dpooled += model.depth_fc1.weight.transpose() * dh1_pre;
    }

    // unpool: the gradient flows to each channel's argmax position
    Eigen::MatrixXd dact2 = Eigen::MatrixXd::Zero(cache.act2.channels, cache.act2.data.cols());
    for (int ch = 0; ch < cache.act2.channels; ++ch)
        dact2(ch, cache.pool_argmax[static_cast<std::size_t>(ch)]) = dpooled(ch);

    // conv2 (tanh)
    Eigen::MatrixXd dpre2 = dact2.array() * (1.0 - cache.act2.data.array().square());
    g.conv2_w.noalias() = dpre2 * cache.col2.transpose();
    g.conv2_b = dpre2.rowwise().sum();
    Eigen::MatrixXd dcol2 = model.conv2.weight.transpose() * dpre2;
    FeatureMap dact1 = col2im(dcol2, cache.act1.channels, cache.act1.rows, cache.act1.cols,
                              model.conv2.kernel_rows, model.conv2.kernel_cols);

    // conv1 (tanh)
    Eigen::MatrixXd dpre1 = dact1.data.array() * (1.0 - cache.act1.data.array().square());
    g.conv1_w.noalias() = dpre1 * cache.col1.transpose();
    g.conv1_b = dpre1.rowwise().sum();
    return g;
}

} // namespace echomap::inference
