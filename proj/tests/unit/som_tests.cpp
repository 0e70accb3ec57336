#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "../support/phantoms.hpp"
#include "restore/rng.hpp"
#include "restore/som.hpp"

using restore::ImageGrid;
using restore::NeuronLabel;
using restore::SomConfig;
using restore::SomMap;

namespace {

SomMap make_map(std::vector<std::vector<double>> weights, int patch_width = 0) {
    SomMap m;
    m.n_neurons = static_cast<int>(weights.size());
    m.patch_width = patch_width;
    m.weights = std::move(weights);
    m.labels.assign(m.n_neurons, NeuronLabel::mean);
    return m;
}

}  // namespace

TEST_CASE("schedule defaults and golden values") {
    SomConfig cfg;  // n = 256, sigma0/steps defaulted
    CHECK(restore::som_sigma0(cfg) == 128.0);
    CHECK(restore::som_total_steps(cfg) == 25600);

    cfg.sigma0 = 256.0;
    cfg.sigma_end = 0.1;
    cfg.total_steps = 11;
    CHECK(restore::sigma_schedule(cfg, 0) == 256.0);    // endpoints exact
    CHECK(restore::sigma_schedule(cfg, 10) == 0.1);
    CHECK(restore::sigma_schedule(cfg, 5) ==
          doctest::Approx(5.059644256269407).epsilon(1e-13));

    cfg.alpha0 = 0.9;
    cfg.total_steps = 10;
    CHECK(restore::alpha_schedule(cfg, 0) == 0.9);
    CHECK(restore::alpha_schedule(cfg, 5) == 0.45);
    CHECK(restore::alpha_schedule(cfg, 10) == 0.0);  // exactly zero at k = T

    CHECK_THROWS_AS(restore::alpha_schedule(cfg, -1), std::invalid_argument);
    CHECK_THROWS_AS(restore::alpha_schedule(cfg, 11), std::invalid_argument);
    CHECK_THROWS_AS(restore::sigma_schedule(cfg, 10), std::invalid_argument);
}

TEST_CASE("schedules decay monotonically") {
    SomConfig cfg;
    cfg.n_neurons = 32;
    cfg.total_steps = 200;
    double pa = restore::alpha_schedule(cfg, 0);
    double ps = restore::sigma_schedule(cfg, 0);
    for (long k = 1; k < 200; ++k) {
        double a = restore::alpha_schedule(cfg, k);
        double s = restore::sigma_schedule(cfg, k);
        CHECK(a < pa);
        CHECK(s < ps);
        pa = a;
        ps = s;
    }
    CHECK(ps == cfg.sigma_end);
}

TEST_CASE("kernel weight golden and shape") {
    SomConfig cfg;
    cfg.alpha0 = 1.0;
    cfg.sigma_end = 1.0;
    cfg.total_steps = 2;
    // k = 1 = T-1: alpha = 0.5, sigma = sigma_end = 1
    CHECK(restore::kernel_weight(cfg, 1, 3, 4) ==
          doctest::Approx(0.3032653298563167).epsilon(1e-14));
    CHECK(restore::kernel_weight(cfg, 1, 7, 7) == 0.5);  // leader itself gets alpha
    // symmetric and decaying with array distance
    CHECK(restore::kernel_weight(cfg, 1, 3, 5) == restore::kernel_weight(cfg, 1, 5, 3));
    CHECK(restore::kernel_weight(cfg, 1, 3, 5) < restore::kernel_weight(cfg, 1, 3, 4));
}

TEST_CASE("winner picks the nearest neuron, lowest index on ties") {
    SomMap m = make_map({{0.0, 0.0}, {3.0, 4.0}});
    CHECK(restore::winner(m, {3.0, 4.0}) == 1);
    CHECK(restore::winner(m, {0.1, 0.1}) == 0);
    CHECK(restore::quant_error(m, {3.0, 4.0}) == 0.0);
    CHECK(restore::quant_error(m, {0.0, 0.0}) == 0.0);
    CHECK(restore::quant_error(m, {6.0, 8.0}) == doctest::Approx(5.0).epsilon(1e-12));

    SomMap tie = make_map({{1.0, 0.0}, {-1.0, 0.0}});
    CHECK(restore::winner(tie, {0.0, 0.0}) == 0);

    CHECK_THROWS_AS(restore::winner(m, {1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("winner agrees with a brute-force scan") {
    restore::NoiseRng rng(404);
    std::vector<std::vector<double>> w(8, std::vector<double>(9));
    for (auto& row : w)
        for (double& v : row) v = rng.uniform() * 10.0;
    SomMap m = make_map(w, 3);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<double> x(9);
        for (double& v : x) v = rng.uniform() * 10.0;
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 8; ++i) {
            double d = 0.0;
            for (int j = 0; j < 9; ++j) d += (m.weights[i][j] - x[j]) * (m.weights[i][j] - x[j]);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        CHECK(restore::winner(m, x) == best);
    }
}

TEST_CASE("training with alpha0 = 0 returns the seeded initial weights") {
    ImageGrid img = testsupport::texture_phantom(16, 16);
    SomConfig cfg;
    cfg.n_neurons = 4;
    cfg.patch_width = 3;
    cfg.alpha0 = 0.0;
    cfg.sigma_end = 0.1;
    cfg.total_steps = 10;
    cfg.seed = 9;
    SomMap m = restore::som_train(img, cfg);

    restore::NoiseRng rng(9);
    double lo = restore::min_value(img);
    double hi = restore::max_value(img);
    for (int i = 0; i < 4; ++i)
        for (int d = 0; d < 9; ++d)
            CHECK(m.weights[i][static_cast<size_t>(d)] == lo + (hi - lo) * rng.uniform_pos());
    CHECK(m.quant_error_trace.size() == 10);
}

TEST_CASE("training shrinks the quantization error and respects the value range") {
    ImageGrid img = testsupport::texture_phantom(32, 32);
    SomConfig cfg;
    cfg.n_neurons = 16;
    cfg.seed = 3;
    SomMap m = restore::som_train(img, cfg);
    REQUIRE(m.quant_error_trace.size() == 1600);  // default T = 100 n

    // the first entry is measured against the random initial weights; any
    // stretch of the converged trace sits far below it
    size_t decile = m.quant_error_trace.size() / 10;
    double tail = 0.0;
    for (size_t i = 0; i < decile; ++i)
        tail += m.quant_error_trace[m.quant_error_trace.size() - 1 - i];
    tail /= static_cast<double>(decile);
    CHECK(tail < m.quant_error_trace.front());
    CHECK(m.quant_error_trace.back() < m.quant_error_trace.front());

    double lo = restore::min_value(img);
    double hi = restore::max_value(img);
    for (const auto& w : m.weights)
        for (double v : w) {
            CHECK(v >= lo);
            CHECK(v <= hi);
        }
    for (NeuronLabel l : m.labels) CHECK(l == NeuronLabel::mean);
}

TEST_CASE("training rejects bad configurations and tiny images") {
    ImageGrid img = testsupport::texture_phantom(16, 16);
    SomConfig cfg;
    cfg.n_neurons = 4;
    cfg.total_steps = 10;

    SomConfig bad = cfg;
    bad.n_neurons = 1;
    CHECK_THROWS_AS(restore::som_train(img, bad), std::invalid_argument);
    bad = cfg;
    bad.patch_width = 4;
    CHECK_THROWS_AS(restore::som_train(img, bad), std::invalid_argument);
    bad = cfg;
    bad.alpha0 = 1.5;
    CHECK_THROWS_AS(restore::som_train(img, bad), std::invalid_argument);
    bad = cfg;
    bad.sigma_end = 0.0;
    CHECK_THROWS_AS(restore::som_train(img, bad), std::invalid_argument);
    bad = cfg;
    bad.sigma0 = 0.05;  // below sigma_end
    CHECK_THROWS_AS(restore::som_train(img, bad), std::invalid_argument);
    bad = cfg;
    bad.total_steps = 1;
    CHECK_THROWS_AS(restore::som_train(img, bad), std::invalid_argument);

    ImageGrid tiny(2, 2, 1.0);
    CHECK_THROWS_AS(restore::som_train(tiny, cfg), std::invalid_argument);
}

TEST_CASE("distance graph is the per-neuron norm") {
    SomMap m = make_map({{0.0, 0.0}, {3.0, 4.0}});
    std::vector<double> g = restore::distance_graph(m);
    REQUIRE(g.size() == 2);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("calibration labels high-variance neurons as edges") {
    SUBCASE("flat map stays all mean") {
        SomMap m = make_map({std::vector<double>(9, 5.0), std::vector<double>(9, 8.0),
                             std::vector<double>(9, 1.0)});
        SomMap out = restore::calibrate(m, 2.0);
        for (NeuronLabel l : out.labels) CHECK(l == NeuronLabel::mean);
    }
    SUBCASE("one high-contrast neuron among mild ones") {
        std::vector<std::vector<double>> w(9, std::vector<double>(9, 0.0));
        for (int i = 0; i < 9; ++i) {  // variance 2 each
            w[static_cast<size_t>(i)][0] = 3.0;
            w[static_cast<size_t>(i)][1] = -3.0;
        }
        w[4][0] = 30.0;  // variance 200
        w[4][1] = -30.0;
        SomMap out = restore::calibrate(make_map(std::move(w), 3), 2.0);
        for (int i = 0; i < 9; ++i)
            CHECK(out.labels[static_cast<size_t>(i)] ==
                  (i == 4 ? NeuronLabel::edge : NeuronLabel::mean));
    }
    SUBCASE("negative ratio is rejected") {
        SomMap m = make_map({{1.0, 2.0}});
        CHECK_THROWS_AS(restore::calibrate(m, -1.0), std::invalid_argument);
    }
}

TEST_CASE("reconstruction decodes interior pixels to winner centers") {
    std::vector<double> w(9, 0.0);
    w[4] = 42.0;  // center weight
    SomMap m = make_map({w}, 3);

    ImageGrid img = testsupport::random_grid(5, 6, 77, 0.0, 255.0);
    ImageGrid out = restore::som_reconstruct(img, m);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 6; ++c) {
            bool border = r == 0 || r == 4 || c == 0 || c == 5;
            CHECK(out.at(r, c) == (border ? img.at(r, c) : 42.0));
        }

    ImageGrid tiny(2, 2, 1.0);
    CHECK_THROWS_AS(restore::som_reconstruct(tiny, m), std::invalid_argument);
    SomMap untrained;
    CHECK_THROWS_AS(restore::som_reconstruct(img, untrained), std::invalid_argument);
}

TEST_CASE("window sharpener golden value") {
    ImageGrid img(3, 3, 5.0);
    img.at(1, 1) = 8.0;
    ImageGrid out = restore::window_deblur(img, 3, 0.5);
    CHECK(out.at(1, 1) == doctest::Approx(28.0 / 3.0).epsilon(1e-12));
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            if (r != 1 || c != 1) CHECK(out.at(r, c) == 5.0);
}

TEST_CASE("window sharpener identities") {
    SUBCASE("constants are exact fixed points") {
        ImageGrid img(7, 7, 64.0);
        ImageGrid out = restore::window_deblur(img, 3, 0.8);
        CHECK(testsupport::max_abs_diff(img, out) == 0.0);
    }
    SUBCASE("alfa = 0 changes nothing") {
        ImageGrid img = testsupport::random_grid(8, 8, 15, 0.0, 255.0);
        ImageGrid out = restore::window_deblur(img, 3, 0.0);
        CHECK(testsupport::max_abs_diff(img, out) == 0.0);
    }
    SUBCASE("operator is linear") {
        ImageGrid x = testsupport::random_grid(8, 8, 16, 0.0, 100.0);
        ImageGrid y = testsupport::random_grid(8, 8, 17, 0.0, 100.0);
        ImageGrid mix(8, 8);
        for (size_t i = 0; i < mix.data.size(); ++i)
            mix.data[i] = 1.5 * x.data[i] - 0.25 * y.data[i];
        ImageGrid fx = restore::window_deblur(x, 3, 0.7);
        ImageGrid fy = restore::window_deblur(y, 3, 0.7);
        ImageGrid fm = restore::window_deblur(mix, 3, 0.7);
        for (size_t i = 0; i < mix.data.size(); ++i)
            CHECK(fm.data[i] ==
                  doctest::Approx(1.5 * fx.data[i] - 0.25 * fy.data[i]).epsilon(1e-9));
    }
    SUBCASE("parameter checks") {
        ImageGrid img(8, 8, 1.0);
        CHECK_THROWS_AS(restore::window_deblur(img, 4, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(restore::window_deblur(img, 1, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(restore::window_deblur(img, 9, 0.5), std::invalid_argument);
    }
}

TEST_CASE("map files round-trip exactly") {
    std::string dir = testsupport::scratch_dir("som_io");
    ImageGrid img = testsupport::texture_phantom(16, 16);
    SomConfig cfg;
    cfg.n_neurons = 4;
    cfg.total_steps = 50;
    cfg.seed = 21;
    SomMap m = restore::calibrate(restore::som_train(img, cfg), 1.0);

    std::string path = dir + "/map.txt";
    restore::save_map(path, m);
    SomMap back = restore::load_map(path);
    CHECK(back.n_neurons == m.n_neurons);
    CHECK(back.patch_width == m.patch_width);
    for (int i = 0; i < 4; ++i) {
        CHECK(back.labels[static_cast<size_t>(i)] == m.labels[static_cast<size_t>(i)]);
        for (int d = 0; d < 9; ++d)
            CHECK(back.weights[static_cast<size_t>(i)][static_cast<size_t>(d)] ==
                  m.weights[static_cast<size_t>(i)][static_cast<size_t>(d)]);
    }
    CHECK(back.quant_error_trace.empty());  // trace is not part of the exchange format
}

TEST_CASE("map loader rejects malformed files") {
    std::string dir = testsupport::scratch_dir("som_io_bad");
    auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream f(dir + "/" + name);
        f << body;
        return dir + "/" + name;
    };
    CHECK_THROWS_AS(restore::load_map(dir + "/missing.txt"), std::runtime_error);
    CHECK_THROWS_AS(restore::load_map(write("magic.txt", "SOMX 1 9\n")), std::runtime_error);
    CHECK_THROWS_AS(restore::load_map(write("nonsq.txt", "SOMMAP 1 3\n1 2 3\nmean\n")),
                    std::runtime_error);
    CHECK_THROWS_AS(restore::load_map(write("trunc.txt", "SOMMAP 2 9\n1 2 3\n")),
                    std::runtime_error);
    CHECK_THROWS_AS(
        restore::load_map(write("label.txt", "SOMMAP 1 1\n4.5\nfoo\n")),
        std::runtime_error);
}
