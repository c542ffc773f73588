#pragma once

#include <filesystem>

#include "plotdig/raster.hpp"

namespace plotdig {

// Decodes a PNG or JPEG file. Alpha is composited over white; grayscale is
// expanded to equal RGB channels. The container is sniffed from the file
// header, not the extension.
RasterImage load_image(const std::filesystem::path& path);

// Debug/golden-test helper; writes an 8-bit RGB PNG.
void dump_png(const RasterImage& img, const std::filesystem::path& path);

}  // namespace plotdig
