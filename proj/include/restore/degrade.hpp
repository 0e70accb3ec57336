#pragma once

#include <cstdint>
#include <vector>

#include "restore/image.hpp"

namespace restore {

/// Spatial convolution kernel standing in for the linear degradation
/// operator. Always unit volume (weights sum to 1).
struct BlurKernel {
    int size = 1;                 // odd
    std::vector<double> weights;  // size*size, row-major over offsets
    double variance = 0.0;        // sigma^2 of the generating Gaussian, if any

    double at(int i, int j) const {  // i, j are offsets in [-(size-1)/2, (size-1)/2]
        const int h = size / 2;
        return weights[static_cast<size_t>(i + h) * size + (j + h)];
    }

    /// Weight 1 at the center: blur is the identity.
    static BlurKernel identity();
};

enum class NoiseKind {
    additive_gaussian,
    speckle_amplitude_single_look,
    speckle_intensity_single_look,
    speckle_multilook,
};

struct NoiseSpec {
    NoiseKind kind = NoiseKind::additive_gaussian;
    double sigma_n = 0.0;  // additive case
    int looks = 1;         // multi-look case, >= 1
    uint64_t seed = 0;
};

/// Sampled unit-volume Gaussian kernel: weights proportional to
/// exp(-(i^2+j^2)/(2*variance)) over integer offsets, normalized to sum 1.
BlurKernel gaussian_kernel(int size, double variance);

/// Circular (periodic-boundary) convolution of the image with the kernel;
/// output has the same dimensions. out(r,c) = sum_k k(i,j) * img(r-i, c-j)
/// with wrapped indices, which makes the frequency-domain representation of
/// the blur exact.
ImageGrid convolve_periodic(const ImageGrid& img, const BlurKernel& kernel);

/// Valid-region mask convolution, correlation-style index order:
/// out(i,j) = sum_{p,q} img(i+p, j+q) * mask(p,q) (0-indexed). Output has
/// (R-r+1) x (C-c+1) pixels for an R x C image and an r x c mask.
ImageGrid convolve_valid(const ImageGrid& img, int mask_rows, int mask_cols,
                         const std::vector<double>& mask);

/// g = img + n with n ~ N(0, sigma_n^2) i.i.d., raster-scan order per seed.
ImageGrid apply_additive(const ImageGrid& img, double sigma_n, uint64_t seed);

/// Multiplicative speckle: out = img .* S with unit-mean S drawn per spec.
/// Amplitude single-look: Rayleigh(scale sqrt(2/pi)); intensity single-look:
/// Exponential(mean 1); multi-look L: Gamma(shape L, scale 1/L). The input
/// must be nonnegative.
ImageGrid apply_speckle(const ImageGrid& img, const NoiseSpec& spec);

/// Noise standard deviation that yields the target blurred SNR:
/// sigma_n = sqrt(P / 10^(target/10)) where P is the mean-removed power of
/// the blurred image. Throws std::domain_error if the image is constant.
double sigma_for_bsnr(const ImageGrid& blurred, double target_bsnr_db);

}  // namespace restore
