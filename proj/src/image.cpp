#include "restore/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace restore {

ImageGrid::ImageGrid(int rows_, int cols_, double fill)
    : rows(rows_), cols(cols_) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("ImageGrid: dimensions must be >= 1");
    data.assign(static_cast<size_t>(rows) * cols, fill);
    if (!std::isfinite(fill))
        throw std::invalid_argument("ImageGrid: fill value must be finite");
}

ImageGrid::ImageGrid(int rows_, int cols_, std::vector<double> values)
    : rows(rows_), cols(cols_), data(std::move(values)) {
    validate();
}

void ImageGrid::validate() const {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("ImageGrid: dimensions must be >= 1");
    if (data.size() != static_cast<size_t>(rows) * cols)
        throw std::invalid_argument("ImageGrid: data length does not match rows*cols");
    for (double v : data)
        if (!std::isfinite(v))
            throw std::invalid_argument("ImageGrid: non-finite pixel value");
}

unsigned char pixel_to_byte(double v) {
    // round-half-away-from-zero, after clamping to [0, 255]
    return static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 255.0)));
}

namespace {

// ---- PGM ----

int next_pgm_int(std::istream& in) {
    // skips whitespace and '#' comments between header tokens
    int c = in.peek();
    while (c != EOF) {
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
        c = in.peek();
    }
    int value = -1;
    if (!(in >> value))
        throw std::runtime_error("PGM: malformed header");
    return value;
}

ImageGrid load_pgm(std::istream& in, const std::string& path) {
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != 'P' || m1 != '5')
        throw std::runtime_error("PGM: not a P5 file: " + path);
    const int cols = next_pgm_int(in);
    const int rows = next_pgm_int(in);
    const int maxval = next_pgm_int(in);
    if (cols < 1 || rows < 1)
        throw std::runtime_error("PGM: bad dimensions in " + path);
    if (maxval != 255)
        throw std::runtime_error("PGM: only maxval 255 is supported: " + path);
    in.get();  // single whitespace byte after maxval

    std::vector<unsigned char> raw(static_cast<size_t>(rows) * cols);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(in.gcount()) != raw.size())
        throw std::runtime_error("PGM: truncated pixel data in " + path);

    ImageGrid img(rows, cols);
    for (size_t i = 0; i < raw.size(); ++i) img.data[i] = raw[i];
    return img;
}

void save_pgm(const ImageGrid& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("PGM: cannot open for writing: " + path);
    out << "P5\n" << img.cols << " " << img.rows << "\n255\n";
    std::vector<unsigned char> raw(img.pixel_count());
    for (size_t i = 0; i < raw.size(); ++i) raw[i] = pixel_to_byte(img.data[i]);
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out)
        throw std::runtime_error("PGM: write failed: " + path);
}

// ---- PNG (via libpng) ----

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

ImageGrid load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp)
        throw std::runtime_error("PNG: cannot open: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png)
        throw std::runtime_error("PNG: out of memory");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("PNG: out of memory");
    }

    std::vector<unsigned char> raw;
    int rows = 0, cols = 0;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("PNG: decode error in " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int depth = png_get_bit_depth(png, info);
    const int color = png_get_color_type(png, info);
    if (depth != 8 || color != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("PNG: only 8-bit grayscale is supported: " + path);
    }

    rows = static_cast<int>(h);
    cols = static_cast<int>(w);
    raw.resize(static_cast<size_t>(rows) * cols);
    std::vector<png_bytep> row_ptrs(rows);
    for (int r = 0; r < rows; ++r)
        row_ptrs[r] = raw.data() + static_cast<size_t>(r) * cols;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    ImageGrid img(rows, cols);
    for (size_t i = 0; i < raw.size(); ++i) img.data[i] = raw[i];
    return img;
}

void save_png(const ImageGrid& img, const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp)
        throw std::runtime_error("PNG: cannot open for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png)
        throw std::runtime_error("PNG: out of memory");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("PNG: out of memory");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("PNG: encode error for " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.cols), static_cast<png_uint_32>(img.rows),
                 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<unsigned char> raw(img.pixel_count());
    for (size_t i = 0; i < raw.size(); ++i) raw[i] = pixel_to_byte(img.data[i]);
    std::vector<png_bytep> row_ptrs(img.rows);
    for (int r = 0; r < img.rows; ++r)
        row_ptrs[r] = raw.data() + static_cast<size_t>(r) * img.cols;
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

bool ends_with_nocase(const std::string& s, const std::string& suffix) {
    if (s.size() < suffix.size()) return false;
    for (size_t i = 0; i < suffix.size(); ++i)
        if (std::tolower(s[s.size() - suffix.size() + i]) != suffix[i]) return false;
    return true;
}

}  // namespace

ImageGrid load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open image file: " + path);
    unsigned char magic[2] = {0, 0};
    in.read(reinterpret_cast<char*>(magic), 2);
    if (in.gcount() != 2)
        throw std::runtime_error("image file too short: " + path);
    in.seekg(0);
    if (magic[0] == 'P' && magic[1] == '5')
        return load_pgm(in, path);
    if (magic[0] == 0x89 && magic[1] == 'P') {
        in.close();
        return load_png(path);
    }
    throw std::runtime_error("unrecognized image format (want PGM P5 or PNG): " + path);
}

void save_image(const ImageGrid& img, const std::string& path) {
    if (ends_with_nocase(path, ".png"))
        save_png(img, path);
    else if (ends_with_nocase(path, ".pgm"))
        save_pgm(img, path);
    else
        throw std::runtime_error("unsupported output extension (want .pgm or .png): " + path);
}

Patch extract_patch(const ImageGrid& img, int r, int c, int w) {
    if (w < 1 || w % 2 == 0)
        throw std::invalid_argument("extract_patch: width must be odd and >= 1");
    const int h = w / 2;
    if (r - h < 0 || c - h < 0 || r + h >= img.rows || c + h >= img.cols)
        throw std::invalid_argument("extract_patch: window overruns image boundary");
    Patch p;
    p.width = w;
    p.center_row = r;
    p.center_col = c;
    p.values.reserve(static_cast<size_t>(w) * w);
    for (int dr = -h; dr <= h; ++dr)
        for (int dc = -h; dc <= h; ++dc)
            p.values.push_back(img.at(r + dr, c + dc));
    return p;
}

double min_value(const ImageGrid& img) {
    return *std::min_element(img.data.begin(), img.data.end());
}

double max_value(const ImageGrid& img) {
    return *std::max_element(img.data.begin(), img.data.end());
}

double mean_value(const ImageGrid& img) {
    double sum = 0.0;
    for (double v : img.data) sum += v;
    return sum / static_cast<double>(img.pixel_count());
}

double variance(const ImageGrid& img) {
    const double mu = mean_value(img);
    double ss = 0.0;
    for (double v : img.data) ss += (v - mu) * (v - mu);
    return ss / static_cast<double>(img.pixel_count());
}

}  // namespace restore
