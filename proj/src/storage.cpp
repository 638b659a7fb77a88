#include "rflow/storage.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace rflow {

namespace {

constexpr const char* kImageMagic = "RFIMG1\n";

void append_u64_le(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t parse_u64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

void append_f32_le(std::string& out, float f) {
    const auto bits = std::bit_cast<std::uint32_t>(f);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

float parse_f32_le(const unsigned char* p) {
    std::uint32_t bits = 0;
    for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return std::bit_cast<float>(bits);
}

std::string read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void write_all(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

void write_framed_f32(const std::filesystem::path& path, const std::string& magic,
                      const nlohmann::json& header, const std::vector<float>& payload) {
    std::string bytes;
    bytes += magic;
    const std::string head = header.dump();
    append_u64_le(bytes, head.size());
    bytes += head;
    bytes.reserve(bytes.size() + 4 * payload.size());
    for (float f : payload) append_f32_le(bytes, f);
    write_all(path, bytes);
}

FramedFile read_framed_f32(const std::filesystem::path& path, const std::string& magic) {
    const std::string bytes = read_all(path);
    if (bytes.size() < magic.size() || bytes.compare(0, magic.size(), magic) != 0)
        throw IoError("bad magic in '" + path.string() + "'");
    std::size_t off = magic.size();
    if (bytes.size() < off + 8) throw IoError("truncated payload in '" + path.string() + "'");
    const std::uint64_t head_len =
        parse_u64_le(reinterpret_cast<const unsigned char*>(bytes.data()) + off);
    off += 8;
    if (bytes.size() < off + head_len) throw IoError("truncated payload in '" + path.string() + "'");

    FramedFile f;
    try {
        f.header = nlohmann::json::parse(bytes.begin() + static_cast<std::ptrdiff_t>(off),
                                         bytes.begin() + static_cast<std::ptrdiff_t>(off + head_len));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("header mismatch in '" + path.string() + "': " + e.what());
    }
    off += head_len;

    const std::size_t remaining = bytes.size() - off;
    if (remaining % 4 != 0) throw IoError("truncated payload in '" + path.string() + "'");
    f.payload.resize(remaining / 4);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + off;
    for (std::size_t i = 0; i < f.payload.size(); ++i) f.payload[i] = parse_f32_le(p + 4 * i);
    return f;
}

namespace {

void write_image_float(const Field& img, const std::filesystem::path& path) {
    nlohmann::json header = {
        {"width", img.cols}, {"height", img.rows}, {"dtype", "f32"}, {"endianness", "LE"}};
    std::vector<float> payload(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) payload[i] = static_cast<float>(img[i]);
    write_framed_f32(path, kImageMagic, header, payload);
}

Field read_image_float(const std::filesystem::path& path) {
    const FramedFile f = read_framed_f32(path, kImageMagic);
    if (!f.header.contains("width") || !f.header.contains("height") ||
        f.header.value("dtype", "") != "f32" || f.header.value("endianness", "") != "LE")
        throw IoError("header mismatch in '" + path.string() + "': missing or unsupported fields");
    const auto w = f.header.at("width").get<std::size_t>();
    const auto h = f.header.at("height").get<std::size_t>();
    if (f.payload.size() < w * h) throw IoError("truncated payload in '" + path.string() + "'");
    if (f.payload.size() != w * h)
        throw IoError("header mismatch in '" + path.string() + "': payload length disagrees");
    Field img = Field::image(w, h);
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = static_cast<double>(f.payload[i]);
    return img;
}

void write_image_pgm(const Field& img, const std::filesystem::path& path) {
    std::string bytes = "P5\n" + std::to_string(img.cols) + " " + std::to_string(img.rows) + "\n65535\n";
    bytes.reserve(bytes.size() + 2 * img.size());
    for (double v : img.data) {
        const double clamped = std::clamp(v, 0.0, 1.0);
        const auto q = static_cast<std::uint32_t>(std::lround(clamped * 65535.0));
        bytes.push_back(static_cast<char>((q >> 8) & 0xFF));  // PGM samples are big-endian
        bytes.push_back(static_cast<char>(q & 0xFF));
    }
    write_all(path, bytes);
}

Field read_image_pgm(const std::string& bytes, const std::filesystem::path& path) {
    std::size_t off = 2;  // caller checked "P5"
    auto next_token = [&]() -> std::string {
        while (off < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[off]))) ++off;
        const std::size_t start = off;
        while (off < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[off]))) ++off;
        if (start == off) throw IoError("truncated payload in '" + path.string() + "'");
        return bytes.substr(start, off - start);
    };
    const std::size_t w = std::stoull(next_token());
    const std::size_t h = std::stoull(next_token());
    const std::size_t maxval = std::stoull(next_token());
    if (maxval != 65535) throw IoError("header mismatch in '" + path.string() + "': expected maxval 65535");
    ++off;  // single whitespace after maxval
    if (bytes.size() - off < 2 * w * h) throw IoError("truncated payload in '" + path.string() + "'");
    Field img = Field::image(w, h);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + off;
    for (std::size_t i = 0; i < img.size(); ++i) {
        const std::uint32_t q = (static_cast<std::uint32_t>(p[2 * i]) << 8) | p[2 * i + 1];
        img[i] = static_cast<double>(q) / 65535.0;
    }
    return img;
}

}  // namespace

void write_image(const Field& img, const std::filesystem::path& path, ImageFormat format) {
    if (img.empty()) throw ValidationError("write_image: empty image");
    if (format == ImageFormat::Float)
        write_image_float(img, path);
    else
        write_image_pgm(img, path);
}

void write_image(const Field& img, const std::filesystem::path& path) {
    write_image(img, path, path.extension() == ".pgm" ? ImageFormat::Pgm : ImageFormat::Float);
}

Field read_image(const std::filesystem::path& path) {
    const std::string bytes = read_all(path);
    if (bytes.rfind(kImageMagic, 0) == 0) return read_image_float(path);
    if (bytes.rfind("P5", 0) == 0) return read_image_pgm(bytes, path);
    throw IoError("bad magic in '" + path.string() + "'");
}

void write_points(const Field& points, const std::filesystem::path& path) {
    if (points.cols != 2) throw ValidationError("write_points: expected Nx2 point set");
    std::string bytes = "x,y\n";
    char buf[80];
    for (std::size_t i = 0; i < points.rows; ++i) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g\n", points.at(i, 0), points.at(i, 1));
        bytes += buf;
    }
    write_all(path, bytes);
}

Field read_points(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::string line;
    if (!std::getline(in, line)) throw IoError("truncated payload in '" + path.string() + "': no header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,y") throw IoError("bad magic in '" + path.string() + "': expected header 'x,y'");

    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        bool ok = comma != std::string::npos;
        double x = 0.0, y = 0.0;
        if (ok) {
            std::size_t used_x = 0, used_y = 0;
            const std::string xs = line.substr(0, comma);
            const std::string ys = line.substr(comma + 1);
            try {
                x = std::stod(xs, &used_x);
                y = std::stod(ys, &used_y);
            } catch (const std::exception&) {
                ok = false;
            }
            if (ok && (used_x != xs.size() || used_y != ys.size())) ok = false;
        }
        if (!ok)
            throw IoError("parse error in '" + path.string() + "' at line " + std::to_string(line_no));
        values.push_back(x);
        values.push_back(y);
    }
    Field pts = Field::points(values.size() / 2);
    pts.data = std::move(values);
    return pts;
}

}  // namespace rflow
