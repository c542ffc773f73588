#include "plotdig/image_io.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "plotdig/errors.hpp"

namespace plotdig {

namespace {

RasterImage decode_png(const std::filesystem::path& path)
{
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;

    if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
        throw UndecodableImage("PNG decode failed: " + std::string(image.message));
    }
    image.format = PNG_FORMAT_RGBA;

    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        std::string msg(image.message);
        png_image_free(&image);
        throw UndecodableImage("PNG decode failed: " + msg);
    }

    RasterImage out(int(image.width), int(image.height));
    const std::uint8_t* p = buffer.data();
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x, p += 4) {
            const int a = p[3];
            // Composite over a white page background.
            auto over_white = [a](int c) { return std::uint8_t((c * a + 255 * (255 - a)) / 255); };
            out.set(x, y, Color{over_white(p[0]), over_white(p[1]), over_white(p[2])});
        }
    }
    return out;
}

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo)
{
    auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    std::longjmp(mgr->jump, 1);
}

RasterImage decode_jpeg(const std::filesystem::path& path)
{
    std::FILE* file = std::fopen(path.string().c_str(), "rb");
    if (!file) {
        throw FileNotFound("cannot open " + path.string());
    }

    jpeg_decompress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_exit;

    std::vector<std::uint8_t> row;
    std::unique_ptr<RasterImage> out;

    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        std::fclose(file);
        throw UndecodableImage("JPEG decode failed: " + path.string());
    }

    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, file);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;  // grayscale sources expand to RGB
    jpeg_start_decompress(&cinfo);

    out = std::make_unique<RasterImage>(int(cinfo.output_width), int(cinfo.output_height));
    row.resize(std::size_t(cinfo.output_width) * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        const int y = int(cinfo.output_scanline);
        JSAMPROW rows[1] = {row.data()};
        jpeg_read_scanlines(&cinfo, rows, 1);
        for (int x = 0; x < out->width(); ++x) {
            out->set(x, y, Color{row[3 * x], row[std::size_t(3) * x + 1], row[std::size_t(3) * x + 2]});
        }
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    std::fclose(file);
    return *out;
}

}  // namespace

RasterImage load_image(const std::filesystem::path& path)
{
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) {
        throw FileNotFound("no such file: " + path.string());
    }

    std::ifstream in(path, std::ios::binary);
    unsigned char magic[4] = {0, 0, 0, 0};
    in.read(reinterpret_cast<char*>(magic), sizeof(magic));
    if (!in) {
        throw UndecodableImage("file too short: " + path.string());
    }
    in.close();

    static const unsigned char png_sig[4] = {0x89, 'P', 'N', 'G'};
    if (std::memcmp(magic, png_sig, 4) == 0) {
        return decode_png(path);
    }
    if (magic[0] == 0xFF && magic[1] == 0xD8) {
        return decode_jpeg(path);
    }
    throw UndecodableImage("unsupported image format: " + path.string());
}

void dump_png(const RasterImage& img, const std::filesystem::path& path)
{
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = png_uint_32(img.width());
    image.height = png_uint_32(img.height());
    image.format = PNG_FORMAT_RGB;

    std::vector<std::uint8_t> buffer(std::size_t(img.width()) * img.height() * 3);
    std::uint8_t* p = buffer.data();
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const Color c = img.at(x, y);
            *p++ = c.r;
            *p++ = c.g;
            *p++ = c.b;
        }
    }
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, buffer.data(), 0, nullptr)) {
        throw Error("PNG write failed: " + std::string(image.message));
    }
}

}  // namespace plotdig
