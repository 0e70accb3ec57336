#include "restore/shrinkage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "restore/degrade.hpp"

namespace restore {

double soft(double g, double tau) {
    if (tau < 0.0) throw std::invalid_argument("soft: negative threshold");
    double mag = std::abs(g) - tau;
    if (mag <= 0.0) return 0.0;
    return g < 0.0 ? -mag : mag;
}

double shrink_linear(double y, double sigma, double sigma_n) {
    if (sigma <= 0.0) throw std::invalid_argument("shrink_linear: sigma must be positive");
    if (sigma_n < 0.0) throw std::invalid_argument("shrink_linear: negative sigma_n");
    double s2 = sigma * sigma;
    return s2 / (s2 + sigma_n * sigma_n) * y;
}

double shrink_soft_laplacian(double y, double sigma, double sigma_n) {
    if (sigma <= 0.0) throw std::invalid_argument("shrink_soft_laplacian: sigma must be positive");
    if (sigma_n < 0.0) throw std::invalid_argument("shrink_soft_laplacian: negative sigma_n");
    return soft(y, std::sqrt(2.0) * sigma_n * sigma_n / sigma);
}

ImageGrid shrink_mask(const ImageGrid& coeffs, int mask_rows, int mask_cols,
                      const std::vector<double>& mask) {
    coeffs.validate();
    ImageGrid valid = convolve_valid(coeffs, mask_rows, mask_cols, mask);
    // Re-embed the valid region so the subband keeps its shape; the ring that
    // the valid convolution cannot reach keeps the input coefficients.
    ImageGrid out = coeffs;
    int off_r = (mask_rows - 1) / 2;
    int off_c = (mask_cols - 1) / 2;
    for (int r = 0; r < valid.rows; ++r)
        for (int c = 0; c < valid.cols; ++c)
            out.at(r + off_r, c + off_c) = valid.at(r, c);
    return out;
}

ImageGrid ds_filter(const ImageGrid& img) {
    return ds_filter(img, DsConfig{});
}

ImageGrid ds_filter(const ImageGrid& img, const DsConfig& cfg) {
    img.validate();
    if (cfg.kernel_size < 3 || cfg.kernel_size > 33 || cfg.kernel_size % 2 == 0)
        throw std::invalid_argument("ds_filter: kernel_size must be odd, in [3, 33]");
    if (cfg.n_directions != 4)
        throw std::invalid_argument("ds_filter: only the 4-direction variant exists");

    ImageGrid x = img;  // filtered in place: later pixels see updated neighbors
    int half = (cfg.kernel_size - 1) / 2;
    double len = static_cast<double>(cfg.kernel_size);
    for (int r = half; r < x.rows - half; ++r) {
        for (int c = half; c < x.cols - half; ++c) {
            double d[4] = {0.0, 0.0, 0.0, 0.0};
            for (int t = -half; t <= half; ++t) {
                d[0] += x.at(r, c + t);      // horizontal
                d[1] += x.at(r + t, c);      // vertical
                d[2] += x.at(r + t, c + t);  // main diagonal
                d[3] += x.at(r + t, c - t);  // anti-diagonal
            }
            // sum/len, not sum*(1/len): division is correctly rounded, so
            // averages of equal values reproduce the value bit-for-bit
            double center = x.at(r, c);
            int best = 0;
            double best_dev = std::abs(d[0] / len - center);
            for (int n = 1; n < 4; ++n) {
                double dev = std::abs(d[n] / len - center);
                if (dev < best_dev) {  // strict: first direction wins ties
                    best_dev = dev;
                    best = n;
                }
            }
            x.at(r, c) = d[best] / len;
        }
    }
    return x;
}

ImageGrid smooth_shrink(const ImageGrid& img, WaveletFamily family, int levels,
                        const DsConfig& ds) {
    std::vector<SubbandSet> pyramid = dwt2_multi(img, family, levels);
    for (SubbandSet& sb : pyramid) {
        sb.chd = ds_filter(sb.chd, ds);
        sb.cvd = ds_filter(sb.cvd, ds);
        sb.cdd = ds_filter(sb.cdd, ds);
    }
    return idwt2_multi(pyramid);
}

namespace {

void apply_pointwise(ImageGrid& band, ShrinkKind kind, double sigma, double sigma_n) {
    for (double& v : band.data)
        v = kind == ShrinkKind::linear_gaussian ? shrink_linear(v, sigma, sigma_n)
                                                : shrink_soft_laplacian(v, sigma, sigma_n);
}

}  // namespace

ImageGrid shrink_denoise(const ImageGrid& img, WaveletFamily family, int levels,
                         const ShrinkageRule& rule) {
    if (rule.kind == ShrinkKind::directional_smoothing)
        return smooth_shrink(img, family, levels, rule.ds);

    std::vector<SubbandSet> pyramid = dwt2_multi(img, family, levels);
    if (rule.kind == ShrinkKind::mask_convolution) {
        for (SubbandSet& sb : pyramid) {
            sb.chd = shrink_mask(sb.chd, rule.mask_rows, rule.mask_cols, rule.mask);
            sb.cvd = shrink_mask(sb.cvd, rule.mask_rows, rule.mask_cols, rule.mask);
            sb.cdd = shrink_mask(sb.cdd, rule.mask_rows, rule.mask_cols, rule.mask);
        }
        return idwt2_multi(pyramid);
    }

    // Closed-form rules: noise scale from the finest diagonal subband unless
    // supplied, signal scale per subband from its excess variance.
    double sigma_n = rule.sigma_n > 0.0 ? rule.sigma_n : estimate_noise_sigma(pyramid.front().cdd);
    for (SubbandSet& sb : pyramid) {
        for (ImageGrid* band : {&sb.chd, &sb.cvd, &sb.cdd}) {
            double sigma = rule.sigma > 0.0 ? rule.sigma : estimate_signal_sigma(*band, sigma_n);
            apply_pointwise(*band, rule.kind, sigma, sigma_n);
        }
    }
    return idwt2_multi(pyramid);
}

double estimate_noise_sigma(const ImageGrid& cdd) {
    cdd.validate();
    std::vector<double> mags(cdd.data.size());
    for (size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(cdd.data[i]);
    size_t n = mags.size();
    size_t mid = n / 2;
    std::nth_element(mags.begin(), mags.begin() + mid, mags.end());
    double med = mags[mid];
    if (n % 2 == 0) {
        double lower = *std::max_element(mags.begin(), mags.begin() + mid);
        med = 0.5 * (lower + med);
    }
    return med / 0.6745;
}

double estimate_signal_sigma(const ImageGrid& subband, double sigma_n) {
    double excess = variance(subband) - sigma_n * sigma_n;
    double sigma = std::sqrt(std::max(excess, 0.0));
    return sigma < 1e-12 ? 1e-12 : sigma;
}

double map_grid_oracle(double y, PriorKind prior, double sigma, double sigma_n,
                       const GridSpec& grid) {
    if (sigma <= 0.0 || sigma_n <= 0.0)
        throw std::invalid_argument("map_grid_oracle: scales must be positive");
    if (grid.step <= 0.0 || grid.hi < grid.lo)
        throw std::invalid_argument("map_grid_oracle: bad grid");

    long n_steps = static_cast<long>(std::floor((grid.hi - grid.lo) / grid.step));
    double best_w = grid.lo;
    double best_obj = -std::numeric_limits<double>::infinity();
    for (long k = 0; k <= n_steps; ++k) {
        double w = grid.lo + static_cast<double>(k) * grid.step;
        double resid = y - w;
        double obj = -resid * resid / (2.0 * sigma_n * sigma_n);
        obj += prior == PriorKind::gaussian ? -w * w / (2.0 * sigma * sigma)
                                            : -std::sqrt(2.0) * std::abs(w) / sigma;
        if (obj > best_obj) {  // strict: earliest grid point wins ties
            best_obj = obj;
            best_w = w;
        }
    }
    return best_w;
}

}  // namespace restore
