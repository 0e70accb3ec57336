#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "restore/image.hpp"

namespace restore {

enum class ScanOrder { ordered, random };
enum class NeuronLabel { mean, edge };

/// One-dimensional Kohonen network over square image patches.
/// sigma0 <= 0 and total_steps <= 0 select the usual sizings n/2 and 100*n.
struct SomConfig {
    int n_neurons = 256;
    int patch_width = 3;  // odd; weight vectors have patch_width^2 entries
    double alpha0 = 0.9;
    double sigma0 = 0.0;
    double sigma_end = 0.1;
    long total_steps = 0;
    ScanOrder scan = ScanOrder::ordered;
    std::uint64_t seed = 1;
};

struct SomMap {
    int n_neurons = 0;
    int patch_width = 0;
    std::vector<std::vector<double>> weights;  // n vectors of patch_width^2
    std::vector<NeuronLabel> labels;           // all "mean" until calibrated
    std::vector<double> quant_error_trace;     // winner distance per step,
                                               // sampled before the update
};

double som_sigma0(const SomConfig& cfg);
long som_total_steps(const SomConfig& cfg);

/// Learning rate at step k: alpha0 * (1 - k/T). Zero exactly at k = T.
double alpha_schedule(const SomConfig& cfg, long k);

/// Kernel width at step k: sigma0 * (sigma_end/sigma0)^(k/(T-1)), with the
/// endpoints returned exactly.
double sigma_schedule(const SomConfig& cfg, long k);

/// Neighborhood weight H = alpha[k] * exp(-(leader-i)^2 / (2 sigma[k]^2)).
double kernel_weight(const SomConfig& cfg, long k, int leader, int i);

/// Index of the neuron nearest to x (Euclidean); lowest index wins ties.
int winner(const SomMap& map, const std::vector<double>& x);

/// Distance from x to its winning neuron's weights.
double quant_error(const SomMap& map, const std::vector<double>& x);

/// Competitive training over interior patches of img. Weights start uniform
/// in the image's value range (seeded); each step updates every neuron by
/// H * (x - w). The returned trace holds one winner distance per step.
SomMap som_train(const ImageGrid& img, const SomConfig& cfg);

/// Per-neuron Euclidean distance to the origin, in array order. Smoothness
/// of this curve is the before/after-training diagnostic.
std::vector<double> distance_graph(const SomMap& map);

/// Labels each neuron: "edge" when its weight-vector variance exceeds
/// threshold_ratio times the median per-neuron variance, else "mean".
SomMap calibrate(const SomMap& map, double threshold_ratio);

/// Vector-quantization decode: every interior pixel becomes the center
/// weight of its patch's winning neuron; the border is copied through.
ImageGrid som_reconstruct(const ImageGrid& img, const SomMap& map);

/// Sliding-window sharpener: d = sigma/2; scanning the interior row by row,
/// each pixel moves away from its sigma x sigma window mean by alfa times
/// the difference, in place, so later windows see updated pixels.
ImageGrid window_deblur(const ImageGrid& img, int sigma, double alfa);

/// Plain-text map exchange: "SOMMAP <n> <weight_len>" header, one line of
/// weights per neuron, then a line of n mean/edge tokens.
void save_map(const std::string& path, const SomMap& map);
SomMap load_map(const std::string& path);

}  // namespace restore
