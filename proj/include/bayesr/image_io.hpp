#pragma once

#include <filesystem>

#include "bayesr/image.hpp"

namespace bayesr {

// 8-bit PNG. Gray(+alpha) files load as one channel, color files as three;
// alpha is discarded. Values are scaled to [0, 1].
ImageStack read_png(const std::filesystem::path& path);
// Values are clamped to [0, 1] and rounded half-to-even to 8 bits.
void write_png(const ImageStack& image, const std::filesystem::path& path);

// Portable float map: "Pf" (one channel) or "PF" (three), little-endian,
// rows stored bottom to top.
ImageStack read_pfm(const std::filesystem::path& path);
void write_pfm(const ImageStack& image, const std::filesystem::path& path);

// Dispatches on the extension (.png or .pfm, case-insensitive).
ImageStack read_image(const std::filesystem::path& path);
void write_image(const ImageStack& image, const std::filesystem::path& path);

// 8-bit code of a unit intensity: clamp, scale by 255, round half to even.
unsigned char to_byte(double v);

}  // namespace bayesr
