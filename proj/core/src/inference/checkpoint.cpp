#include "echomap/inference/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "echomap/errors.hpp"

namespace echomap::inference {

namespace {

constexpr std::array<char, 4> kMagic = {'E', 'M', 'C', 'P'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_raw(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& in, const std::string& path) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw IoError("checkpoint: truncated file " + path);
    return value;
}

} // namespace

void save_checkpoint(const std::string& path, const JointModel& model, std::uint64_t seed) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("checkpoint: cannot write " + path);

    out.write(kMagic.data(), kMagic.size());
    write_raw(out, kVersion);
    write_raw(out, seed);

    const ModelConfig& c = model.config;
    for (std::int32_t v : {c.input_rows, c.input_cols, c.conv1_channels, c.conv1_kernel,
                           c.conv2_channels, c.conv2_kernel, c.pipe_hidden, c.depth_hidden1,
                           c.depth_hidden2})
        write_raw(out, v);

    const Eigen::VectorXd theta = model.flatten();
    write_raw(out, static_cast<std::uint64_t>(theta.size()));
    out.write(reinterpret_cast<const char*>(theta.data()),
              static_cast<std::streamsize>(sizeof(double) * theta.size()));
    if (!out) throw IoError("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("checkpoint: cannot read " + path);

    std::array<char, 4> magic;
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw IoError("checkpoint: bad magic in " + path);
    const auto version = read_raw<std::uint32_t>(in, path);
    if (version != kVersion)
        throw IoError("checkpoint: unsupported version " + std::to_string(version) + " in " +
                      path);

    Checkpoint cp;
    cp.seed = read_raw<std::uint64_t>(in, path);

    ModelConfig cfg;
    cfg.input_rows = read_raw<std::int32_t>(in, path);
    cfg.input_cols = read_raw<std::int32_t>(in, path);
    cfg.conv1_channels = read_raw<std::int32_t>(in, path);
    cfg.conv1_kernel = read_raw<std::int32_t>(in, path);
    cfg.conv2_channels = read_raw<std::int32_t>(in, path);
    cfg.conv2_kernel = read_raw<std::int32_t>(in, path);
    cfg.pipe_hidden = read_raw<std::int32_t>(in, path);
    cfg.depth_hidden1 = read_raw<std::int32_t>(in, path);
    cfg.depth_hidden2 = read_raw<std::int32_t>(in, path);

    cp.model = JointModel(cfg);
    const auto count = read_raw<std::uint64_t>(in, path);
    if (count != static_cast<std::uint64_t>(cp.model.parameter_count()))
        throw IoError("checkpoint: parameter count mismatch in " + path);

    Eigen::VectorXd theta(static_cast<Eigen::Index>(count));
    in.read(reinterpret_cast<char*>(theta.data()),
            static_cast<std::streamsize>(sizeof(double) * count));
    if (!in) throw IoError("checkpoint: truncated parameters in " + path);
    cp.model.unflatten(theta);
    return cp;
}

} // namespace echomap::inference
