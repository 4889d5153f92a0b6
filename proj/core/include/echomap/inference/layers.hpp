#ifndef ECHOMAP_INFERENCE_LAYERS_HPP
#define ECHOMAP_INFERENCE_LAYERS_HPP

#include <Eigen/Core>

namespace echomap::inference {

// Channel-major feature map: data(channel, row * cols + col).
struct FeatureMap {
    int channels = 0;
    int rows = 0;
    int cols = 0;
    Eigen::MatrixXd data;

    static FeatureMap zero(int channels, int rows, int cols) {
        FeatureMap fm{channels, rows, cols,
                      Eigen::MatrixXd::Zero(channels, static_cast<Eigen::Index>(rows) * cols)};
        return fm;
    }
    static FeatureMap from_matrix(const Eigen::MatrixXd& m) {
        FeatureMap fm;
        fm.channels = 1;
        fm.rows = static_cast<int>(m.rows());
        fm.cols = static_cast<int>(m.cols());
        fm.data.resize(1, m.size());
        for (int r = 0; r < fm.rows; ++r)
            for (int c = 0; c < fm.cols; ++c) fm.data(0, r * fm.cols + c) = m(r, c);
        return fm;
    }
};

// Valid (no padding) cross-correlation with stride 1.
struct Conv2d {
    int in_channels = 0;
    int out_channels = 0;
    int kernel_rows = 0;
    int kernel_cols = 0;
    Eigen::MatrixXd weight; // out_channels x (in_channels*kernel_rows*kernel_cols)
    Eigen::VectorXd bias;   // one bias per output channel

    Conv2d() = default;
    Conv2d(int in_ch, int out_ch, int k_rows, int k_cols)
        : in_channels(in_ch), out_channels(out_ch), kernel_rows(k_rows), kernel_cols(k_cols),
          weight(Eigen::MatrixXd::Zero(out_ch, static_cast<Eigen::Index>(in_ch) * k_rows * k_cols)),
          bias(Eigen::VectorXd::Zero(out_ch)) {}

    Eigen::Index parameter_count() const { return weight.size() + bias.size(); }
};

// Patch matrix: row (c_in*kernel_rows + u)*kernel_cols + v holds input
// channel c_in at kernel offset (u, v); one column per output position.
Eigen::MatrixXd im2col(const FeatureMap& input, int kernel_rows, int kernel_cols);

// Scatter-add of a patch-matrix gradient back onto input positions.
FeatureMap col2im(const Eigen::MatrixXd& col_grad, int channels, int rows, int cols,
                  int kernel_rows, int kernel_cols);

// Forward cross-correlation. Throws InvalidShapeError when the input is
// smaller than the kernel or channel counts mismatch. When col_cache is
// given the patch matrix is stored there for the backward pass.
FeatureMap conv_forward(const Conv2d& layer, const FeatureMap& input,
                        Eigen::MatrixXd* col_cache = nullptr);

struct Dense {
    Eigen::MatrixXd weight; // out x in
    Eigen::VectorXd bias;

    Dense() = default;
    Dense(int in, int out)
        : weight(Eigen::MatrixXd::Zero(out, in)), bias(Eigen::VectorXd::Zero(out)) {}

    Eigen::VectorXd forward(const Eigen::VectorXd& x) const { return weight * x + bias; }
    Eigen::Index parameter_count() const { return weight.size() + bias.size(); }
};

Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

} // namespace echomap::inference

#endif
