#pragma once

#include <vector>

#include "restore/image.hpp"
#include "restore/wavelet.hpp"

namespace restore {

/// Directional-smoothing parameters. The reference algorithm is the 3x3,
/// 4-direction case; larger odd windows (up to 33) keep the same four
/// directions with kernel_size collinear samples each.
struct DsConfig {
    int kernel_size = 3;   // odd, in [3, 33]
    int n_directions = 4;  // fixed by the reference algorithm
};

enum class ShrinkKind {
    linear_gaussian,       // Gaussian prior, linear attenuation
    soft_laplacian,        // Laplacian prior, soft threshold
    mask_convolution,      // fixed-mask convolution of the subband
    directional_smoothing  // DS filter on the subband
};

/// Tagged choice of subband treatment for the wavelet denoiser. sigma and
/// sigma_n are optional for the closed-form rules; when <= 0 they are
/// estimated per image (sigma_n from the diagonal subband median, sigma from
/// the excess subband variance).
struct ShrinkageRule {
    ShrinkKind kind = ShrinkKind::directional_smoothing;
    double sigma = 0.0;    // signal prior scale; > 0 when supplied
    double sigma_n = 0.0;  // noise std-dev; >= 0 when supplied
    int mask_rows = 0;     // mask_convolution case
    int mask_cols = 0;
    std::vector<double> mask;
    DsConfig ds;
};

/// soft(g, tau) = sign(g) * max(|g| - tau, 0).
double soft(double g, double tau);

/// Linear MAP attenuation under a zero-mean Gaussian signal prior:
/// w = sigma^2 / (sigma^2 + sigma_n^2) * y.
double shrink_linear(double y, double sigma, double sigma_n);

/// Soft threshold derived from the Laplacian prior:
/// w = soft(y, sqrt(2) * sigma_n^2 / sigma).
double shrink_soft_laplacian(double y, double sigma, double sigma_n);

/// Valid-region mask convolution of a coefficient grid, written back over
/// the interior; the border ring keeps the original coefficients so the
/// subband shape is preserved for reconstruction.
ImageGrid shrink_mask(const ImageGrid& coeffs, int mask_rows, int mask_cols,
                      const std::vector<double>& mask);

/// Directional smoothing, 3x3 reference algorithm: sequential row-major scan
/// of the interior; at each pixel the four 3-point directional averages
/// (horizontal, vertical, main diagonal, anti-diagonal) are compared and the
/// one closest to the pixel replaces it in place, so later pixels see
/// already-updated values. First direction wins ties. Border unchanged.
ImageGrid ds_filter(const ImageGrid& img);

/// Generalized window: same four directions, kernel_size collinear samples
/// per direction, border of (kernel_size-1)/2 pixels unchanged.
ImageGrid ds_filter(const ImageGrid& img, const DsConfig& cfg);

/// The despeckler: decompose, directionally smooth every detail subband at
/// every level, leave approximations untouched, reconstruct. No
/// log-transform anywhere.
ImageGrid smooth_shrink(const ImageGrid& img, WaveletFamily family, int levels,
                        const DsConfig& ds = DsConfig{});

/// Wavelet denoiser with a selectable subband rule; the
/// directional_smoothing rule reproduces smooth_shrink.
ImageGrid shrink_denoise(const ImageGrid& img, WaveletFamily family, int levels,
                         const ShrinkageRule& rule);

/// Robust noise estimate from the finest diagonal subband:
/// median(|cdd|) / 0.6745.
double estimate_noise_sigma(const ImageGrid& cdd);

/// Signal prior scale from the excess variance of a subband:
/// sqrt(max(var - sigma_n^2, 0)), floored at a tiny positive value so the
/// closed-form rules stay defined on pure-noise subbands.
double estimate_signal_sigma(const ImageGrid& subband, double sigma_n);

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
};

enum class PriorKind { gaussian, laplacian };

/// Brute-force grid argmax of the posterior objective
/// -(y-w)^2 / (2 sigma_n^2) + log prior(w). Validation oracle for the
/// closed-form estimators; never on any production path.
double map_grid_oracle(double y, PriorKind prior, double sigma, double sigma_n,
                       const GridSpec& grid);

}  // namespace restore
