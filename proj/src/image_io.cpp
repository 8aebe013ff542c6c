#include "colorseg/image_io.hpp"

#include <png.h>

#include <bit>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

namespace colorseg {

static_assert(sizeof(Rgb8) == 3, "Rgb8 rows are passed to libpng as packed bytes");

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr fp(std::fopen(path.c_str(), mode));
    if (!fp) throw IoError("cannot open " + path);
    return fp;
}

bool has_extension(const std::string& path, const char* ext) {
    const std::size_t n = std::strlen(ext);
    if (path.size() < n) return false;
    return path.compare(path.size() - n, n, ext) == 0;
}

// ---- PPM (P6, maxval 255) ----

Image<Rgb8> read_ppm(std::FILE* fp, const std::string& path) {
    const auto next_token = [&]() -> std::string {
        std::string tok;
        int c;
        while ((c = std::fgetc(fp)) != EOF) {
            if (c == '#') {
                while ((c = std::fgetc(fp)) != EOF && c != '\n') {
                }
                continue;
            }
            if (std::isspace(c)) {
                if (!tok.empty()) return tok;
                continue;
            }
            tok.push_back(static_cast<char>(c));
        }
        return tok;
    };
    const std::string magic = next_token();
    if (magic != "P6") throw IoError(path + ": not a binary PPM");
    const int w = std::atoi(next_token().c_str());
    const int h = std::atoi(next_token().c_str());
    const int maxval = std::atoi(next_token().c_str());
    if (w <= 0 || h <= 0 || maxval != 255) throw IoError(path + ": unsupported PPM header");
    Image<Rgb8> img(w, h);
    if (std::fread(img.data.data(), 3, img.size(), fp) != img.size()) {
        throw IoError(path + ": truncated PPM payload");
    }
    return img;
}

void write_ppm(const std::string& path, const Image<Rgb8>& image) {
    FilePtr fp = open_file(path, "wb");
    std::fprintf(fp.get(), "P6\n%d %d\n255\n", image.width, image.height);
    if (std::fwrite(image.data.data(), 3, image.size(), fp.get()) != image.size()) {
        throw IoError("short write: " + path);
    }
}

// ---- PNG ----

struct PngRead {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngRead() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct PngWrite {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWrite() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

Image<Rgb8> read_png_rgb8(std::FILE* fp, const std::string& path) {
    PngRead ctx;
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (ctx.png) ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw IoError("libpng allocation failed");

    Image<Rgb8> img;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(ctx.png))) throw IoError(path + ": PNG decode failed");

    png_init_io(ctx.png, fp);
    png_read_info(ctx.png, ctx.info);
    const png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
    const png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
    const int color_type = png_get_color_type(ctx.png, ctx.info);
    const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);
    if (bit_depth == 16) png_set_strip_16(ctx.png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(ctx.png);
    }
    png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);
    if (png_get_rowbytes(ctx.png, ctx.info) != w * 3) throw IoError(path + ": unexpected PNG layout");

    img = Image<Rgb8>(static_cast<int>(w), static_cast<int>(h));
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) {
        rows[y] = reinterpret_cast<png_bytep>(img.data.data() + static_cast<std::size_t>(y) * w);
    }
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);
    return img;
}

void write_png_rgb8(const std::string& path, const Image<Rgb8>& image) {
    FilePtr fp = open_file(path, "wb");
    PngWrite ctx;
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (ctx.png) ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw IoError("libpng allocation failed");

    std::vector<png_bytep> rows(static_cast<std::size_t>(image.height));
    if (setjmp(png_jmpbuf(ctx.png))) throw IoError(path + ": PNG encode failed");

    png_init_io(ctx.png, fp.get());
    png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(image.width),
                 static_cast<png_uint_32>(image.height), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    for (int y = 0; y < image.height; ++y) {
        rows[static_cast<std::size_t>(y)] = reinterpret_cast<png_bytep>(
            const_cast<Rgb8*>(image.data.data() + static_cast<std::size_t>(y) * image.width));
    }
    png_write_image(ctx.png, rows.data());
    png_write_end(ctx.png, nullptr);
}

Image<std::uint16_t> read_png_gray16(const std::string& path) {
    FilePtr fp = open_file(path, "rb");
    PngRead ctx;
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (ctx.png) ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw IoError("libpng allocation failed");

    Image<std::uint16_t> img;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(ctx.png))) throw IoError(path + ": PNG decode failed");

    png_init_io(ctx.png, fp.get());
    png_read_info(ctx.png, ctx.info);
    const png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
    const png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
    const int color_type = png_get_color_type(ctx.png, ctx.info);
    const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
    if (color_type != PNG_COLOR_TYPE_GRAY) throw IoError(path + ": expected a single-channel PNG");

    if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(ctx.png);
    if constexpr (std::endian::native == std::endian::little) {
        if (bit_depth == 16) png_set_swap(ctx.png);
    }
    png_read_update_info(ctx.png, ctx.info);

    img = Image<std::uint16_t>(static_cast<int>(w), static_cast<int>(h));
    rows.resize(h);
    if (bit_depth == 16) {
        for (png_uint_32 y = 0; y < h; ++y) {
            rows[y] = reinterpret_cast<png_bytep>(img.data.data() + static_cast<std::size_t>(y) * w);
        }
        png_read_image(ctx.png, rows.data());
    } else {
        std::vector<std::uint8_t> bytes(static_cast<std::size_t>(w) * h);
        for (png_uint_32 y = 0; y < h; ++y) rows[y] = bytes.data() + static_cast<std::size_t>(y) * w;
        png_read_image(ctx.png, rows.data());
        for (std::size_t i = 0; i < img.size(); ++i) img[i] = bytes[i];
    }
    png_read_end(ctx.png, nullptr);
    return img;
}

void write_png_gray16(const std::string& path, const Image<std::uint16_t>& image) {
    FilePtr fp = open_file(path, "wb");
    PngWrite ctx;
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (ctx.png) ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw IoError("libpng allocation failed");

    std::vector<png_bytep> rows(static_cast<std::size_t>(image.height));
    if (setjmp(png_jmpbuf(ctx.png))) throw IoError(path + ": PNG encode failed");

    png_init_io(ctx.png, fp.get());
    png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(image.width),
                 static_cast<png_uint_32>(image.height), 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    if constexpr (std::endian::native == std::endian::little) png_set_swap(ctx.png);
    for (int y = 0; y < image.height; ++y) {
        rows[static_cast<std::size_t>(y)] = reinterpret_cast<png_bytep>(
            const_cast<std::uint16_t*>(image.data.data() + static_cast<std::size_t>(y) * image.width));
    }
    png_write_image(ctx.png, rows.data());
    png_write_end(ctx.png, nullptr);
}

Image<std::uint8_t> read_png_gray8(const std::string& path) {
    const Image<std::uint16_t> raw = read_png_gray16(path);
    Image<std::uint8_t> img(raw.width, raw.height);
    for (std::size_t i = 0; i < raw.size(); ++i) img[i] = raw[i] >= 128 ? 255 : 0;
    return img;
}

}  // namespace

Image<Rgb8> read_image_rgb8(const std::string& path) {
    FilePtr fp = open_file(path, "rb");
    unsigned char magic[2] = {0, 0};
    if (std::fread(magic, 1, 2, fp.get()) != 2) throw IoError(path + ": unreadable image");
    std::rewind(fp.get());
    if (magic[0] == 'P' && magic[1] == '6') return read_ppm(fp.get(), path);
    if (magic[0] == 0x89 && magic[1] == 'P') return read_png_rgb8(fp.get(), path);
    throw IoError(path + ": neither PNG nor binary PPM");
}

void write_image_rgb8(const std::string& path, const Image<Rgb8>& image) {
    if (image.empty()) throw IoError("refusing to write an empty image: " + path);
    if (has_extension(path, ".ppm")) {
        write_ppm(path, image);
    } else {
        write_png_rgb8(path, image);
    }
}

void write_label_map(const std::string& path, const LabelMap& labels) {
    if (labels.empty()) throw IoError("refusing to write an empty label map: " + path);
    Image<std::uint16_t> raw(labels.width, labels.height);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::int32_t l = labels[i];
        if (l < 0 || l > 65534) throw IoError("label out of the 16-bit range: " + std::to_string(l));
        raw[i] = static_cast<std::uint16_t>(l + 1);
    }
    write_png_gray16(path, raw);
}

LabelMap read_label_map(const std::string& path) {
    const Image<std::uint16_t> raw = read_png_gray16(path);
    LabelMap labels(raw.width, raw.height);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == 0) throw IoError(path + ": stored label 0 is reserved");
        labels[i] = static_cast<std::int32_t>(raw[i]) - 1;
    }
    return labels;
}

LabelMap read_gt_labels(const std::string& path) {
    const Image<std::uint16_t> raw = read_png_gray16(path);
    LabelMap labels(raw.width, raw.height);
    for (std::size_t i = 0; i < raw.size(); ++i) labels[i] = raw[i];
    return labels;
}

void write_gt_labels(const std::string& path, const LabelMap& labels) {
    Image<std::uint16_t> raw(labels.width, labels.height);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::int32_t l = labels[i];
        if (l < 0 || l > 65535) throw IoError("ground-truth label out of range: " + std::to_string(l));
        raw[i] = static_cast<std::uint16_t>(l);
    }
    write_png_gray16(path, raw);
}

Image<std::uint8_t> read_mask(const std::string& path) { return read_png_gray8(path); }

void write_mask(const std::string& path, const Image<std::uint8_t>& mask) {
    FilePtr fp = open_file(path, "wb");
    PngWrite ctx;
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (ctx.png) ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw IoError("libpng allocation failed");

    std::vector<std::uint8_t> bytes(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) bytes[i] = mask[i] >= 128 ? 255 : 0;
    std::vector<png_bytep> rows(static_cast<std::size_t>(mask.height));
    if (setjmp(png_jmpbuf(ctx.png))) throw IoError(path + ": PNG encode failed");

    png_init_io(ctx.png, fp.get());
    png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(mask.width),
                 static_cast<png_uint_32>(mask.height), 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    for (int y = 0; y < mask.height; ++y) {
        rows[static_cast<std::size_t>(y)] = bytes.data() + static_cast<std::size_t>(y) * mask.width;
    }
    png_write_image(ctx.png, rows.data());
    png_write_end(ctx.png, nullptr);
}

}  // namespace colorseg
