#include "echomap/io/dataset.hpp"

#include <array>
#include <cstdint>
#include <fstream>

#include "echomap/errors.hpp"

namespace echomap::io {

namespace {

constexpr std::array<char, 4> kMagic = {'E', 'M', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_raw(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& in, const std::string& what) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw IoError("dataset: truncated while reading " + what);
    return value;
}

} // namespace

void save_dataset(const std::string& path, const Dataset& dataset) {
    if (dataset.rows <= 0 || dataset.cols <= 0)
        throw InvalidParameterError("dataset: segment shape must be positive");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("dataset: cannot write " + path);

    out.write(kMagic.data(), kMagic.size());
    write_raw(out, kVersion);
    write_raw(out, static_cast<std::uint64_t>(dataset.records.size()));
    write_raw(out, static_cast<std::uint32_t>(dataset.rows));
    write_raw(out, static_cast<std::uint32_t>(dataset.cols));

    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
        const auto& rec = dataset.records[i];
        if (rec.values.rows() != dataset.rows || rec.values.cols() != dataset.cols)
            throw InvalidParameterError("dataset: record " + std::to_string(i) +
                                        " has a mismatched segment shape");
        write_raw(out, static_cast<std::int32_t>(rec.soi_index));
        for (int r = 0; r < dataset.rows; ++r)
            for (int c = 0; c < dataset.cols; ++c) write_raw(out, rec.values(r, c));
        write_raw(out, static_cast<std::int8_t>(rec.pipe_label));
        write_raw(out, static_cast<std::uint8_t>(rec.depth.has_value() ? 1 : 0));
        write_raw(out, rec.depth.value_or(0.0));
    }
    if (!out) throw IoError("dataset: write failed for " + path);
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("dataset: cannot read " + path);

    std::array<char, 4> magic;
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw IoError("dataset: bad magic in " + path);
    const auto version = read_raw<std::uint32_t>(in, "version");
    if (version != kVersion)
        throw IoError("dataset: unsupported version " + std::to_string(version));

    Dataset ds;
    const auto count = read_raw<std::uint64_t>(in, "record count");
    ds.rows = static_cast<int>(read_raw<std::uint32_t>(in, "rows"));
    ds.cols = static_cast<int>(read_raw<std::uint32_t>(in, "cols"));
    if (ds.rows <= 0 || ds.cols <= 0 || ds.rows > 65536 || ds.cols > 65536)
        throw IoError("dataset: implausible segment shape in " + path);

    ds.records.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::string what = "record " + std::to_string(i);
        DatasetRecord rec;
        rec.soi_index = read_raw<std::int32_t>(in, what);
        rec.values.resize(ds.rows, ds.cols);
        for (int r = 0; r < ds.rows; ++r)
            for (int c = 0; c < ds.cols; ++c) rec.values(r, c) = read_raw<double>(in, what);
        rec.pipe_label = read_raw<std::int8_t>(in, what);
        const auto has_depth = read_raw<std::uint8_t>(in, what);
        const double depth = read_raw<double>(in, what);
        if (has_depth) rec.depth = depth;
        if (rec.pipe_label != -1 && rec.pipe_label != 0 && rec.pipe_label != 1)
            throw IoError("dataset: invalid pipe label in " + what);
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

} // namespace echomap::io
