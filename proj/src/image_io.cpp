#include "umsli/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace umsli {

namespace {

std::string lower_ext(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext;
}

// --- PGM (P5) ---

int pgm_read_token(std::istream& in, std::size_t& offset, std::string& token) {
    token.clear();
    int c;
    // skip whitespace and '#' comments
    while ((c = in.get()) != EOF) {
        ++offset;
        if (c == '#') {
            while ((c = in.get()) != EOF) {
                ++offset;
                if (c == '\n') break;
            }
        } else if (!std::isspace(c)) {
            break;
        }
    }
    if (c == EOF) return EOF;
    token.push_back(static_cast<char>(c));
    while ((c = in.get()) != EOF) {
        ++offset;
        if (std::isspace(c)) break;
        token.push_back(static_cast<char>(c));
    }
    return 0;
}

long pgm_read_int(std::istream& in, std::size_t& offset, const char* what) {
    std::string tok;
    std::size_t start = offset;
    if (pgm_read_token(in, offset, tok) == EOF)
        throw FormatError(std::string("PGM: unexpected end of header reading ") + what, start);
    try {
        std::size_t pos = 0;
        long v = std::stol(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw FormatError(std::string("PGM: bad ") + what + " '" + tok + "'", start);
    }
}

Image load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::size_t offset = 0;
    std::string magic;
    if (pgm_read_token(in, offset, magic) == EOF || magic != "P5")
        throw FormatError("PGM: missing P5 magic", 0);
    long w = pgm_read_int(in, offset, "width");
    long h = pgm_read_int(in, offset, "height");
    long maxval = pgm_read_int(in, offset, "maxval");
    if (w <= 0 || h <= 0)
        throw FormatError("PGM: non-positive dimensions", offset);
    if (maxval <= 0 || maxval > 65535)
        throw FormatError("PGM: maxval out of range", offset);
    // the token reader consumed exactly one whitespace byte after maxval
    const int bytes = maxval > 255 ? 2 : 1;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    std::vector<unsigned char> buf(n * bytes);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size())
        throw FormatError("PGM: truncated pixel data",
                          offset + static_cast<std::size_t>(in.gcount()));
    Image img(static_cast<int>(w), static_cast<int>(h));
    const double scale = 1.0 / static_cast<double>(maxval);
    auto px = img.pixels();
    if (bytes == 1) {
        for (std::size_t i = 0; i < n; ++i) px[i] = buf[i] * scale;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            unsigned v = (static_cast<unsigned>(buf[2 * i]) << 8) | buf[2 * i + 1];
            px[i] = v * scale;
        }
    }
    return img;
}

void save_pgm(const Image& img, const std::filesystem::path& path, int bit_depth) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    const long maxval = bit_depth == 16 ? 65535 : 255;
    out << "P5\n" << img.width() << " " << img.height() << "\n" << maxval << "\n";
    auto px = img.pixels();
    if (bit_depth == 16) {
        std::vector<unsigned char> buf(px.size() * 2);
        for (std::size_t i = 0; i < px.size(); ++i) {
            double v = std::clamp(px[i], 0.0, 1.0);
            unsigned q = static_cast<unsigned>(std::lround(v * maxval));
            buf[2 * i] = static_cast<unsigned char>(q >> 8);
            buf[2 * i + 1] = static_cast<unsigned char>(q & 0xff);
        }
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    } else {
        std::vector<unsigned char> buf(px.size());
        for (std::size_t i = 0; i < px.size(); ++i) {
            double v = std::clamp(px[i], 0.0, 1.0);
            buf[i] = static_cast<unsigned char>(std::lround(v * maxval));
        }
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    }
    if (!out) throw IoError("write failed for " + path.string());
}

// --- PNG (grayscale, 8/16-bit) ---

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};

void png_error_fn(png_structp png, png_const_charp msg) {
    // transfer control back to the caller's setjmp point
    (void)msg;
    longjmp(png_jmpbuf(png), 1);
}

void png_warn_fn(png_structp, png_const_charp) {}

Image load_png(const std::filesystem::path& path) {
    std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw IoError("cannot open " + path.string());

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw FormatError("PNG: bad signature", 0);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                             png_error_fn, png_warn_fn);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng init failed");
    }

    std::vector<std::vector<png_byte>> rows;
    int width = 0, height = 0, bit_depth = 0, color_type = 0;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("PNG: decode error in " + path.string(), 0);
    }

    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    width = static_cast<int>(png_get_image_width(png, info));
    height = static_cast<int>(png_get_image_height(png, info));
    bit_depth = png_get_bit_depth(png, info);
    color_type = png_get_color_type(png, info);

    if (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw FormatError("PNG: not a grayscale image: " + path.string(), 0);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_strip_alpha(png);
    if (bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);

    const std::size_t rowbytes = png_get_rowbytes(png, info);
    rows.assign(static_cast<std::size_t>(height), std::vector<png_byte>(rowbytes));
    std::vector<png_bytep> row_ptrs(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) row_ptrs[static_cast<std::size_t>(y)] = rows[static_cast<std::size_t>(y)].data();
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    Image img(width, height);
    if (bit_depth == 16) {
        const double scale = 1.0 / 65535.0;
        for (int y = 0; y < height; ++y) {
            const png_byte* r = rows[static_cast<std::size_t>(y)].data();
            for (int x = 0; x < width; ++x) {
                unsigned v = (static_cast<unsigned>(r[2 * x]) << 8) | r[2 * x + 1];
                img.at(x, y) = v * scale;
            }
        }
    } else {
        const double scale = 1.0 / 255.0;
        for (int y = 0; y < height; ++y) {
            const png_byte* r = rows[static_cast<std::size_t>(y)].data();
            for (int x = 0; x < width; ++x) img.at(x, y) = r[x] * scale;
        }
    }
    return img;
}

void save_png(const Image& img, const std::filesystem::path& path, int bit_depth) {
    std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw IoError("cannot write " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              png_error_fn, png_warn_fn);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG: encode error for " + path.string());
    }

    png_init_io(png, fp.get());
    // fixed compression settings keep output byte-stable across runs
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()),
                 static_cast<png_uint_32>(img.height()), bit_depth,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const int w = img.width(), h = img.height();
    if (bit_depth == 16) {
        std::vector<png_byte> row(static_cast<std::size_t>(w) * 2);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double v = std::clamp(img.at(x, y), 0.0, 1.0);
                unsigned q = static_cast<unsigned>(std::lround(v * 65535.0));
                row[static_cast<std::size_t>(2 * x)] = static_cast<png_byte>(q >> 8);
                row[static_cast<std::size_t>(2 * x + 1)] = static_cast<png_byte>(q & 0xff);
            }
            png_write_row(png, row.data());
        }
    } else {
        std::vector<png_byte> row(static_cast<std::size_t>(w));
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double v = std::clamp(img.at(x, y), 0.0, 1.0);
                row[static_cast<std::size_t>(x)] = static_cast<png_byte>(std::lround(v * 255.0));
            }
            png_write_row(png, row.data());
        }
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
    const std::string ext = lower_ext(path);
    if (ext == ".pgm") return load_pgm(path);
    if (ext == ".png") return load_png(path);
    throw InvalidParam("unsupported image extension: " + path.string());
}

void save_image(const Image& img, const std::filesystem::path& path, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16)
        throw InvalidParam("bit depth must be 8 or 16");
    const std::string ext = lower_ext(path);
    if (ext == ".pgm") return save_pgm(img, path, bit_depth);
    if (ext == ".png") return save_png(img, path, bit_depth);
    throw InvalidParam("unsupported image extension: " + path.string());
}

Mask load_mask(const std::filesystem::path& path) {
    return image_to_mask(load_image(path));
}

void save_mask(const Mask& mask, const std::filesystem::path& path) {
    save_image(mask_to_image(mask), path, 8);
}

Image mask_to_image(const Mask& mask) {
    Image img(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            img.at(x, y) = mask.get(x, y) ? 1.0 : 0.0;
    return img;
}

Mask image_to_mask(const Image& img, double threshold) {
    Mask m(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            m.set(x, y, img.at(x, y) >= threshold);
    return m;
}

}  // namespace umsli
