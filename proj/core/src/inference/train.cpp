#include "echomap/inference/train.hpp"

#include <cmath>
#include <thread>

#include "echomap/errors.hpp"
#include "echomap/rng.hpp"

namespace echomap::inference {

namespace {

void apply_update(JointModel& model, const Gradients& g, double lr) {
    model.conv1.weight -= lr * g.conv1_w;
    model.conv1.bias -= lr * g.conv1_b;
    model.conv2.weight -= lr * g.conv2_w;
    model.conv2.bias -= lr * g.conv2_b;
    model.pipe_fc1.weight -= lr * g.pipe1_w;
    model.pipe_fc1.bias -= lr * g.pipe1_b;
    model.pipe_fc2.weight -= lr * g.pipe2_w;
    model.pipe_fc2.bias -= lr * g.pipe2_b;
    model.depth_fc1.weight -= lr * g.depth1_w;
    model.depth_fc1.bias -= lr * g.depth1_b;
    model.depth_fc2.weight -= lr * g.depth2_w;
    model.depth_fc2.bias -= lr * g.depth2_b;
    model.depth_fc3.weight -= lr * g.depth3_w;
    model.depth_fc3.bias -= lr * g.depth3_b;
}

Labels labels_of(const TrainingPair& pair) {
    Labels l;
    l.pipe_label = pair.pipe_label;
    l.depth = pair.depth;
    return l;
}

} // namespace

TrainResult train(JointModel& model, const std::vector<TrainingPair>& dataset,
                  const TrainOptions& options) {
    if (dataset.empty()) throw InvalidInputError("train: dataset is empty");
    if (options.batch_size <= 0)
        throw InvalidParameterError("train: batch_size must be positive");
    if (options.epochs < 0) throw InvalidParameterError("train: epochs must be >= 0");

    TrainResult result;
    {
        bool any0 = false, any1 = false;
        for (const auto& p : dataset) (p.pipe_label == 0 ? any0 : any1) = true;
        result.class_imbalance_warning = !(any0 && any1);
    }

    int n_threads = options.threads > 0
                        ? options.threads
                        : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;

    std::mt19937_64 shuffle_rng(mix_seed(options.seed, 0x7368756666ull)); // "shuff"
    std::vector<std::size_t> order(dataset.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        deterministic_shuffle(order, shuffle_rng);
        double loss_sum = 0.0;

        for (std::size_t begin = 0; begin < order.size();
             begin += static_cast<std::size_t>(options.batch_size)) {
            const std::size_t end =
                std::min(order.size(), begin + static_cast<std::size_t>(options.batch_size));
            const std::size_t count = end - begin;

            // Per-sample gradients are pure; compute them in parallel and
            // reduce in index order so the sum is thread-count independent.
            std::vector<Gradients> slot(count);
            std::vector<double> losses(count, 0.0);
            const int workers = std::min<int>(n_threads, static_cast<int>(count));
            auto work = [&](int tid) {
                for (std::size_t k = static_cast<std::size_t>(tid); k < count;
                     k += static_cast<std::size_t>(workers)) {
                    const TrainingPair& pair = dataset[order[begin + k]];
                    ForwardCache cache;
                    const Prediction pred = forward(model, pair.input, &cache);
                    const Labels labels = labels_of(pair);
                    losses[k] = sample_loss(pred, labels, options.weights);
                    slot[k] = backward(model, cache, labels, options.weights);
                }
            };
            if (workers <= 1) {
                work(0);
            } else {
                std::vector<std::thread> pool;
                pool.reserve(static_cast<std::size_t>(workers));
                for (int t = 0; t < workers; ++t) pool.emplace_back(work, t);
                for (auto& th : pool) th.join();
            }

            Gradients batch_grad = std::move(slot[0]);
            for (std::size_t k = 1; k < count; ++k) batch_grad.add(slot[k]);
            for (double l : losses) loss_sum += l;

            apply_update(model, batch_grad, options.learning_rate);
        }
        result.epoch_mean_loss.push_back(loss_sum / static_cast<double>(dataset.size()));
    }
    return result;
}

TrainResult train(JointModel& model, const std::vector<TrainingPair>& dataset, int epochs,
                  double learning_rate, std::uint64_t seed) {
    TrainOptions options;
    options.epochs = epochs;
    options.learning_rate = learning_rate;
    options.seed = seed;
    return train(model, dataset, options);
}

EvalMetrics evaluate(const JointModel& model, const std::vector<TrainingPair>& dataset,
                     const LossWeights& weights) {
    EvalMetrics metrics;
    if (dataset.empty()) return metrics;

    int correct = 0;
    double mae_sum = 0.0;
    double loss_sum = 0.0;
    for (const auto& pair : dataset) {
        const Prediction pred = forward(model, pair.input);
        const int predicted = pred.pipe_probs(1) > pred.pipe_probs(0) ? 1 : 0;
        if (predicted == pair.pipe_label) ++correct;
        if (pair.depth) {
            mae_sum += std::abs(pred.depth - *pair.depth);
            ++metrics.depth_count;
        }
        loss_sum += sample_loss(pred, labels_of(pair), weights);
    }
    metrics.pipe_accuracy = static_cast<double>(correct) / static_cast<double>(dataset.size());
    metrics.depth_mae = metrics.depth_count > 0
                            ? mae_sum / static_cast<double>(metrics.depth_count)
                            : 0.0;
    metrics.mean_joint_loss = loss_sum / static_cast<double>(dataset.size());
    return metrics;
}

Prediction aggregate_predictions(const std::vector<Prediction>& predictions,
                                 SegmentAggregation mode) {
    Prediction out;
    if (predictions.empty()) return out;

    if (mode == SegmentAggregation::Mean) {
        double depth_sum = 0.0;
        Eigen::Vector2d prob_sum = Eigen::Vector2d::Zero();
        for (const auto& p : predictions) {
            prob_sum += p.pipe_probs;
            depth_sum += p.depth;
        }
        out.pipe_probs = prob_sum / static_cast<double>(predictions.size());
        out.depth = depth_sum / static_cast<double>(predictions.size());
        return out;
    }

    // MaxVote: majority label wins (ties to pipe); depth averages over the
    // winning label's segments.
    int votes1 = 0;
    for (const auto& p : predictions)
        if (p.pipe_probs(1) > p.pipe_probs(0)) ++votes1;
    const int winner = 2 * votes1 >= static_cast<int>(predictions.size()) ? 1 : 0;
    double depth_sum = 0.0;
    int depth_n = 0;
    Eigen::Vector2d best_probs = predictions.front().pipe_probs;
    double best_conf = -1.0;
    for (const auto& p : predictions) {
        const int label = p.pipe_probs(1) > p.pipe_probs(0) ? 1 : 0;
        if (label == winner) {
            depth_sum += p.depth;
            ++depth_n;
            const double conf = p.pipe_probs(winner);
            if (conf > best_conf) {
                best_conf = conf;
                best_probs = p.pipe_probs;
            }
        }
    }
    out.pipe_probs = best_probs;
    out.depth = depth_n > 0 ? depth_sum / depth_n : predictions.front().depth;
    return out;
}

} // namespace echomap::inference
