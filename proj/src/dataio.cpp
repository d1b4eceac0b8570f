#include "eitmap/dataio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace eitmap {

namespace {

constexpr char kMagic[4] = {'E', 'I', 'T', 'F'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 4 + 8;

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    put_u32(out, static_cast<std::uint32_t>(v & 0xffffffffu));
    put_u32(out, static_cast<std::uint32_t>(v >> 32));
}

std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint64_t get_u64(const unsigned char* p) {
    return static_cast<std::uint64_t>(get_u32(p)) |
           (static_cast<std::uint64_t>(get_u32(p + 4)) << 32);
}

std::string read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoFailure("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw IoFailure("read failed on " + path.string());
    return std::move(buf).str();
}

void write_all(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoFailure("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out)
        throw IoFailure("write failed on " + path.string());
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

FrameSequence load_frame_sequence(const std::filesystem::path& path) {
    const std::string bytes = read_all(path);
    if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw MalformedHeader(path.string() + ": not an EITF file");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint32_t width = get_u32(p + 4);
    const std::uint32_t height = get_u32(p + 8);
    const std::uint32_t frame_count = get_u32(p + 12);
    const double sample_rate = std::bit_cast<double>(get_u64(p + 16));
    if (width == 0 || height == 0)
        throw MalformedHeader(path.string() + ": zero image dimension");
    if (frame_count == 0)
        throw MalformedHeader(path.string() + ": zero frame count");
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
        throw MalformedHeader(path.string() + ": sample_rate must be a positive finite value");

    const std::size_t pixels = static_cast<std::size_t>(width) * height;
    const std::size_t expected = kHeaderBytes + static_cast<std::size_t>(frame_count) * pixels * 4;
    if (bytes.size() != expected)
        throw TruncatedPayload(path.string() + ": payload holds " +
                               std::to_string(bytes.size() - std::min(bytes.size(), kHeaderBytes)) +
                               " bytes, header promises " + std::to_string(expected - kHeaderBytes));

    FrameSequence seq;
    seq.width = width;
    seq.height = height;
    seq.sample_rate = sample_rate;
    seq.frames.resize(frame_count);
    const unsigned char* cursor = p + kHeaderBytes;
    for (std::uint32_t f = 0; f < frame_count; ++f) {
        auto& frame = seq.frames[f];
        frame.resize(pixels);
        for (std::size_t i = 0; i < pixels; ++i, cursor += 4)
            frame[i] = std::bit_cast<float>(get_u32(cursor));
    }
    return seq;
}

void write_frame_sequence(const FrameSequence& seq, const std::filesystem::path& path) {
    seq.validate();
    std::string bytes;
    bytes.reserve(kHeaderBytes + seq.frame_count() * seq.pixel_count() * 4);
    bytes.append(kMagic, 4);
    put_u32(bytes, static_cast<std::uint32_t>(seq.width));
    put_u32(bytes, static_cast<std::uint32_t>(seq.height));
    put_u32(bytes, static_cast<std::uint32_t>(seq.frame_count()));
    put_u64(bytes, std::bit_cast<std::uint64_t>(seq.sample_rate));
    for (const auto& frame : seq.frames)
        for (float v : frame)
            put_u32(bytes, std::bit_cast<std::uint32_t>(v));
    write_all(path, bytes);
}

TriggerTrain load_trigger_train(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoFailure("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(path.string() + ": empty trigger file");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();

    TriggerTrain train;
    if (line == "cardiac")
        train.kind = TriggerKind::Cardiac;
    else if (line == "respiratory")
        train.kind = TriggerKind::Respiratory;
    else
        throw UnknownKindTag(path.string() + ": unknown kind tag \"" + line + "\"");

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::size_t pos = 0;
        unsigned long long value = 0;
        try {
            value = std::stoull(line, &pos);
        } catch (const std::exception&) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected a non-negative integer, got \"" + line + "\"");
        }
        if (pos != line.size() || line[0] == '-')
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected a non-negative integer, got \"" + line + "\"");
        if (!train.indices.empty() && value <= train.indices.back())
            throw NonMonotonicTriggers(path.string() + ":" + std::to_string(line_no) +
                                       ": trigger indices must be strictly increasing");
        train.indices.push_back(static_cast<std::size_t>(value));
    }
    return train;
}

void write_trigger_train(const TriggerTrain& train, const std::filesystem::path& path) {
    train.validate();
    std::string text = to_string(train.kind) + "\n";
    for (std::size_t idx : train.indices)
        text += std::to_string(idx) + "\n";
    write_all(path, text);
}

void write_pixel_map(const PixelMap& map, const std::filesystem::path& csv_path) {
    map.validate();

    std::string csv;
    for (std::size_t r = 0; r < map.height; ++r) {
        for (std::size_t c = 0; c < map.width; ++c) {
            if (c != 0)
                csv += ',';
            csv += format_value(map.at(r, c));
        }
        csv += '\n';
    }
    write_all(csv_path, csv);

    std::string pgm = "P5\n" + std::to_string(map.width) + " " + std::to_string(map.height) +
                      "\n255\n";
    if (map.kind == PixelKind::RegionLabel) {
        static constexpr unsigned char kLevels[4] = {0, 170, 85, 255};
        for (double v : map.values)
            pgm.push_back(static_cast<char>(kLevels[static_cast<int>(v)]));
    } else {
        const auto [lo_it, hi_it] = std::minmax_element(map.values.begin(), map.values.end());
        const double lo = *lo_it;
        const double hi = *hi_it;
        for (double v : map.values) {
            const double scaled = hi > lo ? (v - lo) / (hi - lo) * 255.0 : 0.0;
            pgm.push_back(static_cast<char>(static_cast<unsigned char>(std::llround(scaled))));
        }
    }
    std::filesystem::path pgm_path = csv_path;
    pgm_path.replace_extension(".pgm");
    write_all(pgm_path, pgm);
}

PixelMap load_pixel_map_csv(const std::filesystem::path& path, PixelKind kind) {
    std::ifstream in(path);
    if (!in)
        throw IoFailure("cannot open " + path.string());

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                throw ParseError(path.string() + ":" + std::to_string(line_no) +
                                 ": expected a number, got \"" + cell + "\"");
            }
            if (pos != cell.size())
                throw ParseError(path.string() + ":" + std::to_string(line_no) +
                                 ": expected a number, got \"" + cell + "\"");
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": ragged row, expected " + std::to_string(rows.front().size()) +
                             " columns");
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw ParseError(path.string() + ": empty CSV");

    PixelMap map(kind, rows.front().size(), rows.size());
    for (std::size_t r = 0; r < map.height; ++r)
        for (std::size_t c = 0; c < map.width; ++c)
            map.at(r, c) = rows[r][c];
    map.validate();
    return map;
}

} // namespace eitmap
