#ifndef ECHOMAP_INFERENCE_TRAIN_HPP
#define ECHOMAP_INFERENCE_TRAIN_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "echomap/inference/model.hpp"

namespace echomap::inference {

// One supervised example: a log-mel input, the pipe label and, for pipe
// samples, the distance to the nearest pipe.
struct TrainingPair {
    Eigen::MatrixXd input;
    int pipe_label = 0;
    std::optional<double> depth;
};

struct TrainOptions {
    int epochs = 30;
    double learning_rate = 1e-2;
    int batch_size = 8;
    std::uint64_t seed = 1;
    LossWeights weights;
    int threads = 0; // 0 = hardware concurrency
};

struct TrainResult {
    std::vector<double> epoch_mean_loss; // one entry per epoch
    bool class_imbalance_warning = false;
};

// Mini-batch SGD with sum-reduced batch gradients. Shuffling, batching and
// the update order are fully determined by the seed: the same seed gives a
// bitwise-identical loss history and final model, independent of the
// thread count. Throws InvalidInputError on an empty dataset.
TrainResult train(JointModel& model, const std::vector<TrainingPair>& dataset,
                  const TrainOptions& options);

// Convenience overload with the frequently-varied knobs spelled out.
TrainResult train(JointModel& model, const std::vector<TrainingPair>& dataset, int epochs,
                  double learning_rate, std::uint64_t seed);

struct EvalMetrics {
    double pipe_accuracy = 0.0;
    double depth_mae = 0.0; // over depth-labeled samples only
    int depth_count = 0;
    double mean_joint_loss = 0.0;
};

EvalMetrics evaluate(const JointModel& model, const std::vector<TrainingPair>& dataset,
                     const LossWeights& weights = {});

// Aggregation of per-segment predictions into one verdict per SOI.
enum class SegmentAggregation {
    Mean,    // average probabilities and depths
    MaxVote, // majority label; depth averaged over winning-label segments
};

Prediction aggregate_predictions(const std::vector<Prediction>& predictions,
                                 SegmentAggregation mode);

} // namespace echomap::inference

#endif
