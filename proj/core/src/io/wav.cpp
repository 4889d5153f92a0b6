#include "echomap/io/wav.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "echomap/errors.hpp"

namespace echomap::io {

namespace {

template <typename T>
T read_raw(std::ifstream& in, const std::string& path) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw IoError("wav: truncated file " + path);
    return value;
}

template <typename T>
void write_raw(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

struct FmtChunk {
    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits_per_sample = 0;
};

} // namespace

LoadedWav load_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("wav: cannot read " + path);

    std::array<char, 4> tag;
    in.read(tag.data(), 4);
    if (!in || std::memcmp(tag.data(), "RIFF", 4) != 0)
        throw IoError("wav: missing RIFF header in " + path);
    read_raw<std::uint32_t>(in, path); // riff size
    in.read(tag.data(), 4);
    if (!in || std::memcmp(tag.data(), "WAVE", 4) != 0)
        throw IoError("wav: not a WAVE file: " + path);

    FmtChunk fmt;
    bool have_fmt = false;
    std::vector<char> data;

    while (in.read(tag.data(), 4)) {
        const auto chunk_size = read_raw<std::uint32_t>(in, path);
        if (std::memcmp(tag.data(), "fmt ", 4) == 0) {
            if (chunk_size < 16) throw IoError("wav: fmt chunk too small in " + path);
            fmt.format = read_raw<std::uint16_t>(in, path);
            fmt.channels = read_raw<std::uint16_t>(in, path);
            fmt.sample_rate = read_raw<std::uint32_t>(in, path);
            read_raw<std::uint32_t>(in, path); // byte rate
            read_raw<std::uint16_t>(in, path); // block align
            fmt.bits_per_sample = read_raw<std::uint16_t>(in, path);
            in.seekg(chunk_size - 16, std::ios::cur);
            have_fmt = true;
        } else if (std::memcmp(tag.data(), "data", 4) == 0) {
            data.resize(chunk_size);
            in.read(data.data(), chunk_size);
            if (!in) throw IoError("wav: truncated data chunk in " + path);
        } else {
            in.seekg(chunk_size, std::ios::cur);
        }
        if (chunk_size % 2 == 1) in.seekg(1, std::ios::cur); // chunk padding
    }

    if (!have_fmt) throw IoError("wav: missing fmt chunk in " + path);
    if (data.empty()) throw IoError("wav: missing data chunk in " + path);
    if (fmt.channels == 0 || fmt.sample_rate == 0)
        throw IoError("wav: invalid fmt chunk in " + path);

    LoadedWav out;
    out.channels_in_file = fmt.channels;
    out.trace.sample_rate = static_cast<double>(fmt.sample_rate);
    if (fmt.channels > 1)
        out.warnings.push_back("wav: " + std::to_string(fmt.channels) +
                               " channels in " + path + "; using channel 0");

    if (fmt.format == 1 && fmt.bits_per_sample == 16) {
        const std::size_t frame_bytes = 2u * fmt.channels;
        const std::size_t n = data.size() / frame_bytes;
        out.trace.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::int16_t v;
            std::memcpy(&v, data.data() + i * frame_bytes, 2);
            out.trace.samples[i] = static_cast<double>(v) / 32768.0;
        }
    } else if (fmt.format == 3 && fmt.bits_per_sample == 32) {
        const std::size_t frame_bytes = 4u * fmt.channels;
        const std::size_t n = data.size() / frame_bytes;
        out.trace.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            float v;
            std::memcpy(&v, data.data() + i * frame_bytes, 4);
            out.trace.samples[i] = static_cast<double>(v);
        }
    } else {
        throw IoError("wav: unsupported encoding (format " + std::to_string(fmt.format) +
                      ", " + std::to_string(fmt.bits_per_sample) + " bit) in " + path);
    }
    if (out.trace.samples.empty()) throw IoError("wav: no samples in " + path);
    return out;
}

void save_wav(const std::string& path, const signal::AudioTrace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("wav: cannot write " + path);

    const std::uint32_t n = static_cast<std::uint32_t>(trace.samples.size());
    const std::uint32_t data_bytes = n * 4;
    const std::uint32_t sample_rate = static_cast<std::uint32_t>(trace.sample_rate);

    out.write("RIFF", 4);
    write_raw<std::uint32_t>(out, 36 + data_bytes);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    write_raw<std::uint32_t>(out, 16);
    write_raw<std::uint16_t>(out, 3); // IEEE float
    write_raw<std::uint16_t>(out, 1); // mono
    write_raw<std::uint32_t>(out, sample_rate);
    write_raw<std::uint32_t>(out, sample_rate * 4);
    write_raw<std::uint16_t>(out, 4);
    write_raw<std::uint16_t>(out, 32);
    out.write("data", 4);
    write_raw<std::uint32_t>(out, data_bytes);
    for (double s : trace.samples) {
        const float v = static_cast<float>(s);
        write_raw(out, v);
    }
    if (!out) throw IoError("wav: write failed for " + path);
}

} // namespace echomap::io
