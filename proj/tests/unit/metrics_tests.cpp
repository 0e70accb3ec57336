#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "../support/phantoms.hpp"
#include "restore/degrade.hpp"
#include "restore/metrics.hpp"
#include "restore/rng.hpp"

using restore::ImageGrid;
using restore::MetricsReport;

TEST_CASE("bsnr golden values") {
    ImageGrid img(2, 2, std::vector<double>{10.0, -10.0, 10.0, -10.0});  // power 100
    CHECK(restore::bsnr(img, 1.0) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(restore::bsnr(img, 10.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(restore::bsnr(img, 0.0), std::domain_error);
    CHECK_THROWS_AS(restore::bsnr(ImageGrid(4, 4, 9.0), 1.0), std::domain_error);
}

TEST_CASE("bsnr round-trips through sigma_for_bsnr") {
    ImageGrid img = testsupport::texture_phantom(64, 64);
    for (double target : {10.0, 17.5, 20.0, 40.0}) {
        double sigma = restore::sigma_for_bsnr(img, target);
        CHECK(restore::bsnr(img, sigma) == doctest::Approx(target).epsilon(1e-9));
    }
}

TEST_CASE("isnr") {
    ImageGrid f(1, 2, std::vector<double>{0.0, 0.0});
    ImageGrid g(1, 2, std::vector<double>{2.0, 0.0});

    SUBCASE("no-op restoration scores zero") {
        CHECK(restore::isnr(f, g, g) == 0.0);
    }
    SUBCASE("halving the error amplitude gains 10 log10 4") {
        ImageGrid fh(1, 2, std::vector<double>{1.0, 0.0});
        CHECK(restore::isnr(f, g, fh) == doctest::Approx(6.020599913279624).epsilon(1e-12));
    }
    SUBCASE("exact restoration is unbounded") {
        CHECK_THROWS_AS(restore::isnr(f, g, f), std::domain_error);
    }
    SUBCASE("clean degradation yields minus infinity") {
        double v = restore::isnr(f, f, g);
        CHECK(std::isinf(v));
        CHECK(v < 0.0);
    }
    SUBCASE("shape mismatch") {
        ImageGrid other(2, 1, std::vector<double>{0.0, 0.0});
        CHECK_THROWS_AS(restore::isnr(f, other, g), std::invalid_argument);
    }
}

TEST_CASE("mse and psnr") {
    ImageGrid a = testsupport::random_grid(6, 7, 3, 0.0, 255.0);
    CHECK(restore::mse(a, a) == 0.0);
    CHECK_THROWS_AS(restore::psnr(a, a), std::domain_error);

    ImageGrid b = a;
    for (double& v : b.data) v += 1.0;
    CHECK(restore::mse(a, b) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(restore::psnr(a, b) == doctest::Approx(48.1308036086791).epsilon(1e-12));
    CHECK(restore::mse(a, b) == restore::mse(b, a));

    ImageGrid c(7, 6, 0.0);
    CHECK_THROWS_AS(restore::mse(a, c), std::invalid_argument);
}

TEST_CASE("enl tracks the look count of homogeneous speckle") {
    restore::NoiseRng rng(2024);
    ImageGrid exp_field(256, 256);
    for (double& v : exp_field.data) v = rng.exponential();
    CHECK(restore::enl(exp_field) == doctest::Approx(1.0).epsilon(0.10));

    ImageGrid gamma_field(256, 256);
    for (double& v : gamma_field.data) v = rng.gamma_unit_mean(4);
    CHECK(restore::enl(gamma_field) == doctest::Approx(4.0).epsilon(0.15));

    ImageGrid scaled = gamma_field;
    for (double& v : scaled.data) v *= 37.5;
    CHECK(restore::enl(scaled) == doctest::Approx(restore::enl(gamma_field)).epsilon(1e-9));

    CHECK_THROWS_AS(restore::enl(ImageGrid(4, 4, 3.0)), std::domain_error);
}

TEST_CASE("csv serialization golden") {
    MetricsReport r1;
    r1.pipeline = "despeckle";
    r1.isnr_db = 1.234567891;
    r1.mse = 10.5;
    r1.psnr_db = 20.0;
    MetricsReport r2;
    r2.pipeline = "degrade";
    r2.bsnr_db = 20.0;

    std::string expected =
        "pipeline,isnr_db,bsnr_db,mse,psnr_db,enl\n"
        "despeckle,1.234568,,10.500000,20.000000,\n"
        "degrade,,20.000000,,,\n";
    CHECK(restore::metrics_csv_string({r1, r2}) == expected);

    std::string dir = testsupport::scratch_dir("metrics_csv");
    std::string path = dir + "/metrics.csv";
    restore::write_metrics_csv(path, {r1, r2});
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == expected);
}
