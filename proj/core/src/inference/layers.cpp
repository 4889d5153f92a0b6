#include "echomap/inference/layers.hpp"

#include <cmath>
#include <string>

#include "echomap/errors.hpp"

namespace echomap::inference {

Eigen::MatrixXd im2col(const FeatureMap& input, int kernel_rows, int kernel_cols) {
    const int out_rows = input.rows - kernel_rows + 1;
    const int out_cols = input.cols - kernel_cols + 1;
    Eigen::MatrixXd col(static_cast<Eigen::Index>(input.channels) * kernel_rows * kernel_cols,
                        static_cast<Eigen::Index>(out_rows) * out_cols);
    for (int ch = 0; ch < input.channels; ++ch) {
        for (int u = 0; u < kernel_rows; ++u) {
            for (int v = 0; v < kernel_cols; ++v) {
                const Eigen::Index row = (static_cast<Eigen::Index>(ch) * kernel_rows + u) *
                                             kernel_cols + v;
                for (int r = 0; r < out_rows; ++r) {
                    for (int c = 0; c < out_cols; ++c) {
                        col(row, static_cast<Eigen::Index>(r) * out_cols + c) =
                            input.data(ch, static_cast<Eigen::Index>(r + u) * input.cols +
                                               (c + v));
                    }
                }
            }
        }
    }
    return col;
}

FeatureMap col2im(const Eigen::MatrixXd& col_grad, int channels, int rows, int cols,
                  int kernel_rows, int kernel_cols) {
    FeatureMap out = FeatureMap::zero(channels, rows, cols);
    const int out_rows = rows - kernel_rows + 1;
    const int out_cols = cols - kernel_cols + 1;
    for (int ch = 0; ch < channels; ++ch) {
        for (int u = 0; u < kernel_rows; ++u) {
            for (int v = 0; v < kernel_cols; ++v) {
                const Eigen::Index row = (static_cast<Eigen::Index>(ch) * kernel_rows + u) *
                                             kernel_cols + v;
                for (int r = 0; r < out_rows; ++r) {
                    for (int c = 0; c < out_cols; ++c) {
                        out.data(ch, static_cast<Eigen::Index>(r + u) * cols + (c + v)) +=
                            col_grad(row, static_cast<Eigen::Index>(r) * out_cols + c);
                    }
                }
            }
        }
    }
    return out;
}

FeatureMap conv_forward(const Conv2d& layer, const FeatureMap& input,
                        Eigen::MatrixXd* col_cache) {
    if (input.channels != layer.in_channels)
        throw InvalidShapeError("conv_forward: expected " + std::to_string(layer.in_channels) +
                                " input channels, got " + std::to_string(input.channels));
    if (input.rows < layer.kernel_rows || input.cols < layer.kernel_cols)
        throw InvalidShapeError("conv_forward: input " + std::to_string(input.rows) + "x" +
                                std::to_string(input.cols) + " smaller than kernel " +
                                std::to_string(layer.kernel_rows) + "x" +
                                std::to_string(layer.kernel_cols));

    Eigen::MatrixXd col = im2col(input, layer.kernel_rows, layer.kernel_cols);
    FeatureMap out;
    out.channels = layer.out_channels;
    out.rows = input.rows - layer.kernel_rows + 1;
    out.cols = input.cols - layer.kernel_cols + 1;
    out.data.noalias() = layer.weight * col;
    out.data.colwise() += layer.bias;
    if (col_cache) *col_cache = std::move(col);
    return out;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
    const double max_logit = logits.maxCoeff();
    Eigen::VectorXd e = (logits.array() - max_logit).exp();
    return e / e.sum();
}

} // namespace echomap::inference
