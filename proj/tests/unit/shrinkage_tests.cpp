#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "../support/phantoms.hpp"
#include "restore/degrade.hpp"
#include "restore/rng.hpp"
#include "restore/shrinkage.hpp"

using restore::DsConfig;
using restore::GridSpec;
using restore::ImageGrid;
using restore::PriorKind;
using restore::ShrinkageRule;
using restore::ShrinkKind;
using restore::WaveletFamily;

TEST_CASE("soft threshold") {
    double tau = 0.7071067811865476;
    CHECK(restore::soft(2.5, tau) == 2.5 - tau);
    CHECK(restore::soft(-2.5, tau) == -(2.5 - tau));
    CHECK(restore::soft(0.5, tau) == 0.0);
    CHECK(restore::soft(-0.5, tau) == 0.0);
    CHECK(restore::soft(0.7, 0.7) == 0.0);  // boundary maps to zero
    CHECK(restore::soft(3.0, 0.0) == 3.0);
    CHECK_THROWS_AS(restore::soft(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("linear attenuation under the Gaussian prior") {
    CHECK(restore::shrink_linear(2.5, 2.0, 1.0) == 2.0);  // 4/5 * 2.5
    CHECK(restore::shrink_linear(-10.0, 1.0, 1.0) == -5.0);
    for (double y : {-3.0, 0.0, 0.25, 100.0})
        CHECK(restore::shrink_linear(y, 2.0, 0.0) == y);  // no noise, no shrink
    CHECK_THROWS_AS(restore::shrink_linear(1.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(restore::shrink_linear(1.0, -2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(restore::shrink_linear(1.0, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("Laplacian-prior rule is a soft threshold at sqrt(2) sigma_n^2 / sigma") {
    CHECK(restore::shrink_soft_laplacian(3.0, 1.0, 1.0) == 3.0 - std::sqrt(2.0));
    restore::NoiseRng rng(77);
    for (int i = 0; i < 50; ++i) {
        double y = (rng.uniform() - 0.5) * 10.0;
        double sigma = 0.5 + 2.0 * rng.uniform();
        double sigma_n = 0.2 + rng.uniform();
        double tau = std::sqrt(2.0) * sigma_n * sigma_n / sigma;
        CHECK(restore::shrink_soft_laplacian(y, sigma, sigma_n) == restore::soft(y, tau));
    }
    CHECK_THROWS_AS(restore::shrink_soft_laplacian(1.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("closed forms agree with the grid-search posterior argmax") {
    GridSpec grid{-30.0, 30.0, 1e-3};
    restore::NoiseRng rng(123);
    for (int i = 0; i < 20; ++i) {
        double y = (rng.uniform() - 0.5) * 12.0;
        double sigma = 0.5 + 2.5 * rng.uniform();
        double sigma_n = 0.3 + 1.7 * rng.uniform();

        double w_lin = restore::shrink_linear(y, sigma, sigma_n);
        double g_lin = restore::map_grid_oracle(y, PriorKind::gaussian, sigma, sigma_n, grid);
        CHECK(std::abs(w_lin - g_lin) <= grid.step);

        double w_soft = restore::shrink_soft_laplacian(y, sigma, sigma_n);
        double g_soft = restore::map_grid_oracle(y, PriorKind::laplacian, sigma, sigma_n, grid);
        CHECK(std::abs(w_soft - g_soft) <= grid.step);
    }
    CHECK_THROWS_AS(restore::map_grid_oracle(1.0, PriorKind::gaussian, 0.0, 1.0, grid),
                    std::invalid_argument);
    CHECK_THROWS_AS(restore::map_grid_oracle(1.0, PriorKind::gaussian, 1.0, 1.0,
                                             GridSpec{0.0, 1.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("ds_filter: unit impulse collapses to a single directional average") {
    ImageGrid img(5, 5, 0.0);
    img.at(2, 2) = 1.0;
    ImageGrid out = restore::ds_filter(img);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) {
            if (r == 2 && c == 2)
                CHECK(out.at(r, c) == 1.0 / 3.0);
            else
                CHECK(out.at(r, c) == 0.0);
        }
}

TEST_CASE("ds_filter: constants are bit-exact fixed points") {
    for (double v : {0.0, 1.0, 7.0, 64.0, 128.0, 255.0, 0.5, 0.25}) {
        ImageGrid img(7, 6, v);
        ImageGrid out = restore::ds_filter(img);
        for (size_t i = 0; i < img.data.size(); ++i) CHECK(out.data[i] == v);
    }
}

TEST_CASE("ds_filter: sequential in-place scan, ties to the first direction") {
    // At (1,1) the vertical and main-diagonal averages are equidistant from
    // the center (1/3 each, equal even in floating point); the earlier
    // direction wins, so (1,1) becomes 28/3. (1,2) is filtered after (1,1)
    // and must see the updated value, giving ((28/3 + 11) + 12) / 3.
    ImageGrid img(3, 4,
                  std::vector<double>{5.0, 9.0, 9.0, 11.0,   //
                                      1.0, 9.0, 11.0, 12.0,  //
                                      0.0, 10.0, 12.0, 11.0});
    ImageGrid out = restore::ds_filter(img);
    CHECK(out.at(1, 1) == 28.0 / 3.0);
    CHECK(out.at(1, 2) == ((28.0 / 3.0 + 11.0) + 12.0) / 3.0);
    // border untouched
    for (int c = 0; c < 4; ++c) {
        CHECK(out.at(0, c) == img.at(0, c));
        CHECK(out.at(2, c) == img.at(2, c));
    }
    CHECK(out.at(1, 0) == 1.0);
    CHECK(out.at(1, 3) == 12.0);
}

TEST_CASE("ds_filter: output range stays inside the input range") {
    ImageGrid img = testsupport::random_grid(16, 16, 31, 10.0, 200.0);
    ImageGrid out = restore::ds_filter(img);
    auto [lo, hi] = std::minmax_element(img.data.begin(), img.data.end());
    for (double v : out.data) {
        CHECK(v >= *lo);
        CHECK(v <= *hi);
    }
}

TEST_CASE("ds_filter parameter checks") {
    ImageGrid img(8, 8, 1.0);
    CHECK_THROWS_AS(restore::ds_filter(img, DsConfig{4, 4}), std::invalid_argument);
    CHECK_THROWS_AS(restore::ds_filter(img, DsConfig{1, 4}), std::invalid_argument);
    CHECK_THROWS_AS(restore::ds_filter(img, DsConfig{35, 4}), std::invalid_argument);
    CHECK_THROWS_AS(restore::ds_filter(img, DsConfig{3, 8}), std::invalid_argument);
    // a window larger than the interior leaves everything on the border
    ImageGrid small(4, 4, std::vector<double>(16, 3.0));
    small.at(1, 1) = 9.0;
    ImageGrid out = restore::ds_filter(small, DsConfig{5, 4});
    CHECK(testsupport::max_abs_diff(small, out) == 0.0);
}

TEST_CASE("shrink_mask re-embeds the valid convolution over the interior") {
    ImageGrid ramp(4, 4);
    for (int i = 0; i < 16; ++i) ramp.data[static_cast<size_t>(i)] = i;
    std::vector<double> mean9(9, 1.0 / 9.0);
    ImageGrid out = restore::shrink_mask(ramp, 3, 3, mean9);
    CHECK(out.at(1, 1) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(out.at(1, 2) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(out.at(2, 1) == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(out.at(2, 2) == doctest::Approx(10.0).epsilon(1e-12));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            if (r == 0 || r == 3 || c == 0 || c == 3) CHECK(out.at(r, c) == ramp.at(r, c));
    CHECK_THROWS_AS(restore::shrink_mask(ramp, 3, 3, std::vector<double>(8, 0.1)),
                    std::invalid_argument);
}

TEST_CASE("smooth_shrink leaves constants unchanged") {
    for (WaveletFamily fam : {WaveletFamily::haar, WaveletFamily::db4}) {
        ImageGrid img(32, 32, 77.0);
        ImageGrid out = restore::smooth_shrink(img, fam, 2);
        CHECK(testsupport::max_abs_diff(img, out) <= 1e-9);
    }
}

TEST_CASE("smooth_shrink reduces speckle on the piecewise phantom") {
    ImageGrid clean = testsupport::piecewise_phantom(64, 64);
    restore::NoiseSpec spec;
    spec.kind = restore::NoiseKind::speckle_multilook;
    spec.looks = 4;
    spec.seed = 42;
    ImageGrid noisy = restore::apply_speckle(clean, spec);
    ImageGrid out = restore::smooth_shrink(noisy, WaveletFamily::haar, 2);
    double err_before = 0.0, err_after = 0.0;
    for (size_t i = 0; i < clean.data.size(); ++i) {
        err_before += (clean.data[i] - noisy.data[i]) * (clean.data[i] - noisy.data[i]);
        err_after += (clean.data[i] - out.data[i]) * (clean.data[i] - out.data[i]);
    }
    CHECK(err_after < err_before);
}

TEST_CASE("shrink_denoise rule dispatch") {
    ImageGrid img = testsupport::texture_phantom(32, 32);

    SUBCASE("directional_smoothing reproduces smooth_shrink") {
        ShrinkageRule rule;
        rule.kind = ShrinkKind::directional_smoothing;
        ImageGrid a = restore::shrink_denoise(img, WaveletFamily::haar, 2, rule);
        ImageGrid b = restore::smooth_shrink(img, WaveletFamily::haar, 2);
        CHECK(testsupport::max_abs_diff(a, b) == 0.0);
    }

    SUBCASE("1x1 unit mask is a round trip") {
        ShrinkageRule rule;
        rule.kind = ShrinkKind::mask_convolution;
        rule.mask_rows = 1;
        rule.mask_cols = 1;
        rule.mask = {1.0};
        ImageGrid out = restore::shrink_denoise(img, WaveletFamily::haar, 2, rule);
        CHECK(testsupport::max_abs_diff(img, out) <= 1e-9);
    }

    SUBCASE("negligible threshold is a round trip") {
        ShrinkageRule rule;
        rule.kind = ShrinkKind::soft_laplacian;
        rule.sigma = 1e12;
        rule.sigma_n = 1e-6;
        ImageGrid out = restore::shrink_denoise(img, WaveletFamily::db4, 2, rule);
        CHECK(testsupport::max_abs_diff(img, out) <= 1e-9);
    }

    SUBCASE("linear rule shrinks detail energy toward the approximation") {
        ShrinkageRule rule;
        rule.kind = ShrinkKind::linear_gaussian;
        rule.sigma = 1.0;
        rule.sigma_n = 3.0;
        ImageGrid out = restore::shrink_denoise(img, WaveletFamily::haar, 1, rule);
        restore::SubbandSet sb_in = restore::dwt2(img, WaveletFamily::haar);
        restore::SubbandSet sb_out = restore::dwt2(out, WaveletFamily::haar);
        double e_in = 0.0, e_out = 0.0;
        for (double v : sb_in.cdd.data) e_in += v * v;
        for (double v : sb_out.cdd.data) e_out += v * v;
        CHECK(e_out < e_in);
        // factor 1/10 on coefficients, 1/100 on energy
        CHECK(e_out == doctest::Approx(e_in / 100.0).epsilon(1e-6));
    }
}

TEST_CASE("noise scale estimate from the diagonal subband") {
    ImageGrid even(2, 2, std::vector<double>{-1.0, 2.0, -3.0, 4.0});
    CHECK(restore::estimate_noise_sigma(even) == doctest::Approx(2.5 / 0.6745).epsilon(1e-12));
    ImageGrid odd(1, 3, std::vector<double>{-1.0, 5.0, -2.0});
    CHECK(restore::estimate_noise_sigma(odd) == doctest::Approx(2.0 / 0.6745).epsilon(1e-12));
    // Gaussian sample: estimate tracks the true sigma
    restore::NoiseRng rng(9);
    ImageGrid g(64, 64);
    for (double& v : g.data) v = 3.0 * rng.gaussian();
    CHECK(restore::estimate_noise_sigma(g) == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("signal scale from excess variance") {
    ImageGrid band(1, 2, std::vector<double>{0.0, 10.0});  // population variance 25
    CHECK(restore::estimate_signal_sigma(band, 3.0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(restore::estimate_signal_sigma(band, 10.0) == 1e-12);  // floored, stays positive
}
