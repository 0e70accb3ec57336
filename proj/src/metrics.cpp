#include "restore/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace restore {

namespace {

double sum_squared_diff(const ImageGrid& a, const ImageGrid& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("metrics: shape mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        double d = a.data[i] - b.data[i];
        s += d * d;
    }
    return s;
}

}  // namespace

double bsnr(const ImageGrid& blurred_clean, double sigma_n) {
    blurred_clean.validate();
    if (sigma_n <= 0.0) throw std::domain_error("bsnr: sigma_n must be positive");
    double power = variance(blurred_clean);  // population var = mean-removed power
    if (power <= 0.0) throw std::domain_error("bsnr: constant image has no signal power");
    return 10.0 * std::log10(power / (sigma_n * sigma_n));
}

double isnr(const ImageGrid& original, const ImageGrid& degraded,
            const ImageGrid& restored) {
    double num = sum_squared_diff(original, degraded);
    double den = sum_squared_diff(original, restored);
    if (den == 0.0)
        throw std::domain_error("isnr: restoration is exact, improvement unbounded");
    if (num == 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(num / den);
}

double mse(const ImageGrid& a, const ImageGrid& b) {
    return sum_squared_diff(a, b) / static_cast<double>(a.data.size());
}

double psnr(const ImageGrid& a, const ImageGrid& b) {
    double err = mse(a, b);
    if (err == 0.0) throw std::domain_error("psnr: images identical");
    return 10.0 * std::log10(255.0 * 255.0 / err);
}

double enl(const ImageGrid& region) {
    region.validate();
    double m = mean_value(region);
    double v = variance(region);
    if (v == 0.0) throw std::domain_error("enl: zero-variance region");
    return m * m / v;
}

namespace {

void append_cell(std::string& row, const std::optional<double>& v) {
    row += ',';
    if (!v) return;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    row += buf;
}

}  // namespace

std::string metrics_csv_string(const std::vector<MetricsReport>& reports) {
    std::string out = "pipeline,isnr_db,bsnr_db,mse,psnr_db,enl\n";
    for (const MetricsReport& r : reports) {
        std::string row = r.pipeline;
        append_cell(row, r.isnr_db);
        append_cell(row, r.bsnr_db);
        append_cell(row, r.mse);
        append_cell(row, r.psnr_db);
        append_cell(row, r.enl);
        out += row;
        out += '\n';
    }
    return out;
}

void write_metrics_csv(const std::string& path,
                       const std::vector<MetricsReport>& reports) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_metrics_csv: cannot open " + path);
    f << metrics_csv_string(reports);
    if (!f) throw std::runtime_error("write_metrics_csv: write failed for " + path);
}

}  // namespace restore
