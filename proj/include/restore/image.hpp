#pragma once

#include <string>
#include <vector>

namespace restore {

/// Row-major grid of real-valued pixel intensities. The universal currency
/// of the toolkit: every stage consumes and produces one of these.
///
/// Invariants: rows >= 1, cols >= 1, data.size() == rows * cols, all values
/// finite. Integer pixel formats are converted to/from double only at the
/// file I/O boundary.
struct ImageGrid {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    ImageGrid() = default;
    ImageGrid(int rows_, int cols_, double fill = 0.0);
    ImageGrid(int rows_, int cols_, std::vector<double> values);

    double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

    size_t pixel_count() const { return data.size(); }

    bool same_shape(const ImageGrid& other) const {
        return rows == other.rows && cols == other.cols;
    }

    /// Throws std::invalid_argument if any invariant is violated.
    void validate() const;
};

/// Square window of pixels copied out of an image, row-major, together with
/// the source coordinates of its center. Input vector for the SOM stages.
struct Patch {
    int width = 0;  // odd
    std::vector<double> values;
    int center_row = 0;
    int center_col = 0;
};

/// Reads a binary PGM (P5, maxval 255) or an 8-bit grayscale PNG. The format
/// is detected from the file's magic bytes, not the extension. Pixel value p
/// maps to the real value p, no rescaling.
ImageGrid load_image(const std::string& path);

/// Writes an image. ".pgm" produces byte-exact P5 output: header
/// "P5\n<cols> <rows>\n255\n" followed by raw bytes; ".png" produces an 8-bit
/// grayscale PNG (encoder-dependent bytes, pixel-exact). Each value is
/// written as round(clamp(v, 0, 255)) with halves rounded away from zero.
void save_image(const ImageGrid& img, const std::string& path);

/// The byte a real intensity maps to on save. Exposed so golden tests can
/// pin the rounding convention.
unsigned char pixel_to_byte(double v);

/// Copies the w-by-w window centered at (r, c). The window must lie fully
/// inside the image; w must be odd.
Patch extract_patch(const ImageGrid& img, int r, int c, int w);

double min_value(const ImageGrid& img);
double max_value(const ImageGrid& img);
double mean_value(const ImageGrid& img);
/// Population variance (divides by N).
double variance(const ImageGrid& img);

}  // namespace restore
