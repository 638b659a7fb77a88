#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rflow/field.hpp"

namespace rflow {

enum class ImageFormat { Float, Pgm };

// Float images: magic "RFIMG1\n", little-endian u64 header length, UTF-8 JSON
// header {width, height, dtype:"f32", endianness:"LE"}, raw row-major
// little-endian f32 payload. Round-trips bit-exactly.
//
// PGM images: binary "P5" with maxval 65535 and big-endian 16-bit samples
// mapping [0,1] linearly; round-trip error is at most 1/(2*65535).
void write_image(const Field& img, const std::filesystem::path& path, ImageFormat format);
Field read_image(const std::filesystem::path& path);

// Picks the format from the file extension: ".pgm" writes PGM, anything else
// the float format.
void write_image(const Field& img, const std::filesystem::path& path);

// Point sets as CSV with header "x,y" and 9 significant digits per value.
void write_points(const Field& points, const std::filesystem::path& path);
Field read_points(const std::filesystem::path& points);

// Shared framing for the float image and checkpoint containers.
void write_framed_f32(const std::filesystem::path& path, const std::string& magic,
                      const nlohmann::json& header, const std::vector<float>& payload);

struct FramedFile {
    nlohmann::json header;
    std::vector<float> payload;
};

FramedFile read_framed_f32(const std::filesystem::path& path, const std::string& magic);

}  // namespace rflow
