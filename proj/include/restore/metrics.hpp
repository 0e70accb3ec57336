#pragma once

#include <optional>
#include <string>
#include <vector>

#include "restore/image.hpp"

namespace restore {

/// One evaluated pipeline's scores; fields a run did not compute stay empty
/// and serialize to blank CSV cells.
struct MetricsReport {
    std::string pipeline;
    std::optional<double> isnr_db;
    std::optional<double> bsnr_db;
    std::optional<double> mse;
    std::optional<double> psnr_db;
    std::optional<double> enl;
};

/// Blurred signal-to-noise ratio: mean-removed power of the noiseless
/// blurred image over the noise variance, in dB.
double bsnr(const ImageGrid& blurred_clean, double sigma_n);

/// Improvement in SNR: 10 log10(sum |f-g|^2 / sum |f-f_hat|^2). Perfect
/// restoration (f_hat == f) has no finite value and throws; f == g returns
/// -infinity (the degradation added nothing to improve on).
double isnr(const ImageGrid& original, const ImageGrid& degraded,
            const ImageGrid& restored);

double mse(const ImageGrid& a, const ImageGrid& b);

/// 10 log10(255^2 / mse); identical images throw (infinite PSNR).
double psnr(const ImageGrid& a, const ImageGrid& b);

/// Equivalent number of looks over a homogeneous region: mean^2 / variance.
double enl(const ImageGrid& region);

/// CSV with header "pipeline,isnr_db,bsnr_db,mse,psnr_db,enl", one row per
/// report, six decimal places, empty cell for absent fields.
void write_metrics_csv(const std::string& path,
                       const std::vector<MetricsReport>& reports);
std::string metrics_csv_string(const std::vector<MetricsReport>& reports);

}  // namespace restore
