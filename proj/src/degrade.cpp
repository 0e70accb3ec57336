#include "restore/degrade.hpp"

#include <cmath>
#include <stdexcept>

#include "restore/rng.hpp"

namespace restore {

BlurKernel BlurKernel::identity() {
    BlurKernel k;
    k.size = 1;
    k.weights = {1.0};
    k.variance = 0.0;
    return k;
}

BlurKernel gaussian_kernel(int size, double variance) {
    if (size < 1 || size % 2 == 0)
        throw std::invalid_argument("gaussian_kernel: size must be odd and >= 1");
    if (variance <= 0.0)
        throw std::invalid_argument("gaussian_kernel: variance must be > 0");
    BlurKernel k;
    k.size = size;
    k.variance = variance;
    k.weights.resize(static_cast<size_t>(size) * size);
    const int h = size / 2;
    double sum = 0.0;
    for (int i = -h; i <= h; ++i)
        for (int j = -h; j <= h; ++j) {
            const double w = std::exp(-(i * i + j * j) / (2.0 * variance));
            k.weights[static_cast<size_t>(i + h) * size + (j + h)] = w;
            sum += w;
        }
    for (double& w : k.weights) w /= sum;
    return k;
}

ImageGrid convolve_periodic(const ImageGrid& img, const BlurKernel& kernel) {
    if (kernel.size > img.rows || kernel.size > img.cols)
        throw std::invalid_argument("convolve_periodic: kernel larger than image");
    const int h = kernel.size / 2;
    ImageGrid out(img.rows, img.cols);
    for (int r = 0; r < img.rows; ++r) {
        for (int c = 0; c < img.cols; ++c) {
            double acc = 0.0;
            for (int i = -h; i <= h; ++i) {
                // wrapped source row for offset i (true convolution: r - i)
                int sr = (r - i) % img.rows;
                if (sr < 0) sr += img.rows;
                for (int j = -h; j <= h; ++j) {
                    int sc = (c - j) % img.cols;
                    if (sc < 0) sc += img.cols;
                    acc += kernel.at(i, j) * img.at(sr, sc);
                }
            }
            out.at(r, c) = acc;
        }
    }
    return out;
}

ImageGrid convolve_valid(const ImageGrid& img, int mask_rows, int mask_cols,
                         const std::vector<double>& mask) {
    if (mask_rows < 1 || mask_cols < 1 ||
        mask.size() != static_cast<size_t>(mask_rows) * mask_cols)
        throw std::invalid_argument("convolve_valid: bad mask shape");
    if (mask_rows > img.rows || mask_cols > img.cols)
        throw std::invalid_argument("convolve_valid: mask larger than image");
    const int out_rows = img.rows - mask_rows + 1;
    const int out_cols = img.cols - mask_cols + 1;
    ImageGrid out(out_rows, out_cols);
    for (int i = 0; i < out_rows; ++i)
        for (int j = 0; j < out_cols; ++j) {
            double acc = 0.0;
            for (int p = 0; p < mask_rows; ++p)
                for (int q = 0; q < mask_cols; ++q)
                    acc += img.at(i + p, j + q) * mask[static_cast<size_t>(p) * mask_cols + q];
            out.at(i, j) = acc;
        }
    return out;
}

ImageGrid apply_additive(const ImageGrid& img, double sigma_n, uint64_t seed) {
    if (sigma_n < 0.0)
        throw std::invalid_argument("apply_additive: sigma_n must be >= 0");
    if (sigma_n == 0.0) return img;
    NoiseRng rng(seed);
    ImageGrid out = img;
    for (double& v : out.data) v += sigma_n * rng.gaussian();
    return out;
}

ImageGrid apply_speckle(const ImageGrid& img, const NoiseSpec& spec) {
    for (double v : img.data)
        if (v < 0.0)
            throw std::domain_error("apply_speckle: input pixels must be nonnegative");
    NoiseRng rng(spec.seed);
    ImageGrid out = img;
    switch (spec.kind) {
        case NoiseKind::speckle_amplitude_single_look: {
            const double scale = std::sqrt(2.0 / M_PI);  // unit mean
            for (double& v : out.data) v *= rng.rayleigh(scale);
            break;
        }
        case NoiseKind::speckle_intensity_single_look:
            for (double& v : out.data) v *= rng.exponential();
            break;
        case NoiseKind::speckle_multilook: {
            if (spec.looks < 1)
                throw std::invalid_argument("apply_speckle: looks must be >= 1");
            for (double& v : out.data) v *= rng.gamma_unit_mean(spec.looks);
            break;
        }
        case NoiseKind::additive_gaussian:
            throw std::invalid_argument("apply_speckle: spec is not a speckle kind");
    }
    return out;
}

double sigma_for_bsnr(const ImageGrid& blurred, double target_bsnr_db) {
    const double power = variance(blurred);
    if (power == 0.0)
        throw std::domain_error("sigma_for_bsnr: blurred image is constant, BSNR undefined");
    return std::sqrt(power / std::pow(10.0, target_bsnr_db / 10.0));
}

}  // namespace restore
