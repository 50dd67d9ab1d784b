#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "bayesr/error.hpp"
#include "bayesr/image_io.hpp"

namespace bayesr {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

float swap_bytes(float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  bits = ((bits & 0x000000ffu) << 24) | ((bits & 0x0000ff00u) << 8) |
         ((bits & 0x00ff0000u) >> 8) | ((bits & 0xff000000u) >> 24);
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace

unsigned char to_byte(double v) {
  const double scaled = std::clamp(v, 0.0, 1.0) * 255.0;
  return static_cast<unsigned char>(std::nearbyint(scaled));
}

ImageStack read_png(const std::filesystem::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.string().c_str())) {
    throw InvalidInput("cannot read PNG " + path.string() + ": " +
                       img.message);
  }
  const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = color ? 3 : 1;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw InvalidInput("cannot decode PNG " + path.string() + ": " + msg);
  }
  const int h = static_cast<int>(img.height);
  const int w = static_cast<int>(img.width);
  std::vector<ImagePlane> planes(channels, ImagePlane(h, w));
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t base =
          (static_cast<std::size_t>(r) * w + c) * channels;
      for (int ch = 0; ch < channels; ++ch) {
        planes[ch](r, c) = buffer[base + ch] / 255.0;
      }
    }
  }
  return ImageStack(std::move(planes));
}

void write_png(const ImageStack& image, const std::filesystem::path& path) {
  const int channels = image.channels();
  if (channels != 1 && channels != 3) {
    throw InvalidInput("write_png: expected 1 or 3 channels");
  }
  const Shape s = image.shape();
  std::vector<png_byte> buffer(s.size() * channels);
  for (int r = 0; r < s.height; ++r) {
    for (int c = 0; c < s.width; ++c) {
      const std::size_t base =
          (static_cast<std::size_t>(r) * s.width + c) * channels;
      for (int ch = 0; ch < channels; ++ch) {
        buffer[base + ch] = to_byte(image.channel(ch)(r, c));
      }
    }
  }
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(s.width);
  img.height = static_cast<png_uint_32>(s.height);
  img.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&img, path.string().c_str(), 0, buffer.data(),
                               0, nullptr)) {
    throw InvalidInput("cannot write PNG " + path.string() + ": " +
                       img.message);
  }
}

ImageStack read_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open PFM " + path.string());
  std::string magic;
  int w = 0;
  int h = 0;
  double scale = 0.0;
  in >> magic >> w >> h >> scale;
  if (!in || (magic != "Pf" && magic != "PF") || w <= 0 || h <= 0 ||
      scale == 0.0) {
    throw InvalidInput("PFM " + path.string() + ": bad header");
  }
  in.get();  // single whitespace before the raster
  const int channels = magic == "PF" ? 3 : 1;
  const bool little = scale < 0.0;
  const bool swap = little != (std::endian::native == std::endian::little);
  std::vector<float> raster(static_cast<std::size_t>(w) * h * channels);
  in.read(reinterpret_cast<char*>(raster.data()),
          static_cast<std::streamsize>(raster.size() * sizeof(float)));
  if (!in) throw InvalidInput("PFM " + path.string() + ": truncated raster");
  std::vector<ImagePlane> planes(channels, ImagePlane(h, w));
  for (int row = 0; row < h; ++row) {
    const int r = h - 1 - row;
    for (int c = 0; c < w; ++c) {
      for (int ch = 0; ch < channels; ++ch) {
        float v = raster[(static_cast<std::size_t>(row) * w + c) * channels +
                         ch];
        if (swap) v = swap_bytes(v);
        if (!std::isfinite(v)) {
          throw InvalidInput("PFM " + path.string() + ": non-finite value");
        }
        planes[ch](r, c) = v;
      }
    }
  }
  return ImageStack(std::move(planes));
}

void write_pfm(const ImageStack& image, const std::filesystem::path& path) {
  const int channels = image.channels();
  if (channels != 1 && channels != 3) {
    throw InvalidInput("write_pfm: expected 1 or 3 channels");
  }
  const Shape s = image.shape();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write PFM " + path.string());
  const bool little = std::endian::native == std::endian::little;
  out << (channels == 3 ? "PF" : "Pf") << '\n'
      << s.width << ' ' << s.height << '\n'
      << (little ? "-1.0" : "1.0") << '\n';
  std::vector<float> row(static_cast<std::size_t>(s.width) * channels);
  for (int r = s.height - 1; r >= 0; --r) {
    for (int c = 0; c < s.width; ++c) {
      for (int ch = 0; ch < channels; ++ch) {
        row[static_cast<std::size_t>(c) * channels + ch] =
            static_cast<float>(image.channel(ch)(r, c));
      }
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) throw InvalidInput("failed writing PFM " + path.string());
}

ImageStack read_image(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pfm") return read_pfm(path);
  throw InvalidInput("unsupported image extension '" + ext + "' for " +
                     path.string());
}

void write_image(const ImageStack& image, const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return write_png(image, path);
  if (ext == ".pfm") return write_pfm(image, path);
  throw InvalidInput("unsupported image extension '" + ext + "' for " +
                     path.string());
}

}  // namespace bayesr
