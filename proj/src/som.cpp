#include "restore/som.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "restore/rng.hpp"

namespace restore {

namespace {

void validate_config(const SomConfig& cfg) {
    if (cfg.n_neurons < 2)
        throw std::invalid_argument("som: need at least 2 neurons");
    if (cfg.patch_width < 1 || cfg.patch_width % 2 == 0)
        throw std::invalid_argument("som: patch_width must be odd and positive");
    if (cfg.alpha0 < 0.0 || cfg.alpha0 > 1.0)
        throw std::invalid_argument("som: alpha0 must lie in [0, 1]");
    if (cfg.sigma_end <= 0.0)
        throw std::invalid_argument("som: sigma_end must be positive");
    if (som_sigma0(cfg) < cfg.sigma_end)
        throw std::invalid_argument("som: sigma0 must be >= sigma_end");
    if (som_total_steps(cfg) < 2)
        throw std::invalid_argument("som: need at least 2 training steps");
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace

double som_sigma0(const SomConfig& cfg) {
    return cfg.sigma0 > 0.0 ? cfg.sigma0 : cfg.n_neurons / 2.0;
}

long som_total_steps(const SomConfig& cfg) {
    return cfg.total_steps > 0 ? cfg.total_steps : 100L * cfg.n_neurons;
}

double alpha_schedule(const SomConfig& cfg, long k) {
    long t = som_total_steps(cfg);
    if (k < 0 || k > t) throw std::invalid_argument("alpha_schedule: step out of range");
    return cfg.alpha0 * (1.0 - static_cast<double>(k) / static_cast<double>(t));
}

double sigma_schedule(const SomConfig& cfg, long k) {
    long t = som_total_steps(cfg);
    if (k < 0 || k > t - 1) throw std::invalid_argument("sigma_schedule: step out of range");
    double s0 = som_sigma0(cfg);
    if (k == 0) return s0;                // endpoints exact; pow() need not
    if (k == t - 1) return cfg.sigma_end;  // hit them bit-for-bit
    double frac = static_cast<double>(k) / static_cast<double>(t - 1);
    return s0 * std::pow(cfg.sigma_end / s0, frac);
}

double kernel_weight(const SomConfig& cfg, long k, int leader, int i) {
    double alpha = alpha_schedule(cfg, k);
    double sigma = sigma_schedule(cfg, k);
    double d = static_cast<double>(leader - i);
    return alpha * std::exp(-d * d / (2.0 * sigma * sigma));
}

int winner(const SomMap& map, const std::vector<double>& x) {
    if (map.n_neurons < 1) throw std::invalid_argument("winner: empty map");
    int best = 0;
    double best_d = -1.0;
    for (int i = 0; i < map.n_neurons; ++i) {
        if (map.weights[i].size() != x.size())
            throw std::invalid_argument("winner: input length does not match weights");
        double d = squared_distance(map.weights[i], x);
        if (best_d < 0.0 || d < best_d) {  // strict: lowest index wins ties
            best_d = d;
            best = i;
        }
    }
    return best;
}

double quant_error(const SomMap& map, const std::vector<double>& x) {
    return std::sqrt(squared_distance(map.weights[winner(map, x)], x));
}

SomMap som_train(const ImageGrid& img, const SomConfig& cfg) {
    img.validate();
    validate_config(cfg);
    if (img.rows < cfg.patch_width || img.cols < cfg.patch_width)
        throw std::invalid_argument("som_train: image smaller than the patch window");

    long t_total = som_total_steps(cfg);
    int half = (cfg.patch_width - 1) / 2;
    int span_r = img.rows - 2 * half;
    int span_c = img.cols - 2 * half;
    long n_positions = static_cast<long>(span_r) * span_c;
    size_t wlen = static_cast<size_t>(cfg.patch_width) * cfg.patch_width;

    SomMap map;
    map.n_neurons = cfg.n_neurons;
    map.patch_width = cfg.patch_width;
    map.labels.assign(cfg.n_neurons, NeuronLabel::mean);
    map.quant_error_trace.reserve(t_total);

    NoiseRng rng(cfg.seed);
    double lo = min_value(img);
    double hi = max_value(img);
    map.weights.assign(cfg.n_neurons, std::vector<double>(wlen));
    for (auto& w : map.weights)
        for (double& v : w) v = lo + (hi - lo) * rng.uniform_pos();

    std::vector<double> x(wlen);
    for (long k = 0; k < t_total; ++k) {
        long pos = cfg.scan == ScanOrder::ordered
                       ? k % n_positions
                       : std::min(n_positions - 1,
                                  static_cast<long>(rng.uniform_pos() * n_positions));
        int r = half + static_cast<int>(pos / span_c);
        int c = half + static_cast<int>(pos % span_c);
        size_t idx = 0;
        for (int i = -half; i <= half; ++i)
            for (int j = -half; j <= half; ++j) x[idx++] = img.at(r + i, c + j);

        int leader = winner(map, x);
        map.quant_error_trace.push_back(
            std::sqrt(squared_distance(map.weights[leader], x)));

        for (int i = 0; i < cfg.n_neurons; ++i) {
            double h = kernel_weight(cfg, k, leader, i);
            if (h == 0.0) continue;
            std::vector<double>& w = map.weights[i];
            for (size_t m = 0; m < wlen; ++m) w[m] += h * (x[m] - w[m]);
        }
    }
    return map;
}

std::vector<double> distance_graph(const SomMap& map) {
    std::vector<double> g(map.n_neurons);
    for (int i = 0; i < map.n_neurons; ++i) {
        double s = 0.0;
        for (double v : map.weights[i]) s += v * v;
        g[i] = std::sqrt(s);
    }
    return g;
}

SomMap calibrate(const SomMap& map, double threshold_ratio) {
    if (threshold_ratio < 0.0)
        throw std::invalid_argument("calibrate: negative threshold ratio");
    std::vector<double> vars(map.n_neurons);
    for (int i = 0; i < map.n_neurons; ++i) {
        const std::vector<double>& w = map.weights[i];
        double mean = 0.0;
        for (double v : w) mean += v;
        mean /= static_cast<double>(w.size());
        double var = 0.0;
        for (double v : w) var += (v - mean) * (v - mean);
        vars[i] = var / static_cast<double>(w.size());
    }
    std::vector<double> sorted = vars;
    std::sort(sorted.begin(), sorted.end());
    size_t n = sorted.size();
    double median = n % 2 == 1 ? sorted[n / 2]
                               : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    SomMap out = map;
    out.labels.resize(map.n_neurons);
    for (int i = 0; i < map.n_neurons; ++i)
        out.labels[i] = vars[i] > threshold_ratio * median ? NeuronLabel::edge
                                                           : NeuronLabel::mean;
    return out;
}

ImageGrid som_reconstruct(const ImageGrid& img, const SomMap& map) {
    img.validate();
    if (map.n_neurons < 1 || map.patch_width < 1)
        throw std::invalid_argument("som_reconstruct: untrained map");
    if (img.rows < map.patch_width || img.cols < map.patch_width)
        throw std::invalid_argument("som_reconstruct: image smaller than the patch window");

    int half = (map.patch_width - 1) / 2;
    size_t wlen = static_cast<size_t>(map.patch_width) * map.patch_width;
    size_t center = static_cast<size_t>(half) * map.patch_width + half;
    ImageGrid out = img;  // border rows/cols keep the input values
    std::vector<double> x(wlen);
    for (int r = half; r < img.rows - half; ++r) {
        for (int c = half; c < img.cols - half; ++c) {
            size_t idx = 0;
            for (int i = -half; i <= half; ++i)
                for (int j = -half; j <= half; ++j) x[idx++] = img.at(r + i, c + j);
            out.at(r, c) = map.weights[winner(map, x)][center];
        }
    }
    return out;
}

ImageGrid window_deblur(const ImageGrid& img, int sigma, double alfa) {
    img.validate();
    if (sigma < 3 || sigma % 2 == 0)
        throw std::invalid_argument("window_deblur: sigma must be odd and >= 3");
    if (sigma > img.rows || sigma > img.cols)
        throw std::invalid_argument("window_deblur: window larger than image");

    ImageGrid out = img;  // updated in place as the scan advances
    int d = sigma / 2;
    double area = static_cast<double>(sigma) * sigma;
    for (int r = d; r < out.rows - d; ++r) {
        for (int c = d; c < out.cols - d; ++c) {
            double sum = 0.0;
            for (int i = -d; i <= d; ++i)
                for (int j = -d; j <= d; ++j) sum += out.at(r + i, c + j);
            double e = out.at(r, c) - sum / area;  // division: exact on flats
            out.at(r, c) += alfa * e;
        }
    }
    return out;
}

void save_map(const std::string& path, const SomMap& map) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_map: cannot open " + path);
    size_t wlen = map.weights.empty() ? 0 : map.weights.front().size();
    f << "SOMMAP " << map.n_neurons << ' ' << wlen << '\n';
    char buf[32];
    for (const auto& w : map.weights) {
        for (size_t i = 0; i < w.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", w[i]);
            f << (i ? " " : "") << buf;
        }
        f << '\n';
    }
    for (int i = 0; i < map.n_neurons; ++i)
        f << (i ? " " : "") << (map.labels[i] == NeuronLabel::edge ? "edge" : "mean");
    f << '\n';
    if (!f) throw std::runtime_error("save_map: write failed for " + path);
}

SomMap load_map(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_map: cannot open " + path);
    std::string magic;
    int n = 0;
    long wlen = 0;
    if (!(f >> magic >> n >> wlen) || magic != "SOMMAP" || n < 1 || wlen < 1)
        throw std::runtime_error("load_map: bad header in " + path);
    int p = static_cast<int>(std::lround(std::sqrt(static_cast<double>(wlen))));
    if (static_cast<long>(p) * p != wlen)
        throw std::runtime_error("load_map: weight length is not a square window");

    SomMap map;
    map.n_neurons = n;
    map.patch_width = p;
    map.weights.assign(n, std::vector<double>(wlen));
    for (auto& w : map.weights)
        for (double& v : w)
            if (!(f >> v)) throw std::runtime_error("load_map: truncated weights in " + path);
    map.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        std::string tok;
        if (!(f >> tok) || (tok != "mean" && tok != "edge"))
            throw std::runtime_error("load_map: bad label line in " + path);
        map.labels[i] = tok == "edge" ? NeuronLabel::edge : NeuronLabel::mean;
    }
    return map;
}

}  // namespace restore
