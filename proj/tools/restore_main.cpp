#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "restore/image.hpp"
#include "restore/metrics.hpp"
#include "restore/pipeline.hpp"

namespace {

using restore::ConfigError;
using restore::PipelineConfig;

// Collects "key = value" lines synthesized from flags; a flag is dropped
// with a warning when the config file already sets its key (config wins).
struct FlagLayer {
    std::vector<std::pair<std::string, std::string>> entries;

    void set(const std::string& key, const std::string& value) {
        entries.emplace_back(key, value);
    }

    std::string apply(const std::string& base_text) const {
        std::set<std::string> present = restore::config_keys(base_text);
        std::string text = base_text;
        for (const auto& [key, value] : entries) {
            if (present.count(key)) {
                std::cerr << "warning: flag value for '" << key
                          << "' ignored, the config file sets it (config wins)\n";
                continue;
            }
            text += "\n" + key + " = " + value;
        }
        return text;
    }
};

int run_config(const std::string& text) {
    PipelineConfig cfg = restore::parse_config_text(text);
    return restore::run_pipeline(cfg);
}

int cmd_run(const std::string& config_path, const FlagLayer& flags) {
    std::ifstream f(config_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config file: " + config_path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return run_config(flags.apply(buf.str()));
}

int cmd_score(const std::string& original, const std::string& degraded,
              const std::string& restored, const std::string& label,
              const std::string& out_path) {
    restore::ImageGrid orig = restore::load_image(original);
    restore::ImageGrid rest = restore::load_image(restored);
    restore::MetricsReport r;
    r.pipeline = label;
    if (!degraded.empty()) {
        restore::ImageGrid deg = restore::load_image(degraded);
        try {
            double v = restore::isnr(orig, deg, rest);
            if (std::isfinite(v)) r.isnr_db = v;
        } catch (const std::domain_error&) {
        }
    }
    r.mse = restore::mse(orig, rest);
    try {
        r.psnr_db = restore::psnr(orig, rest);
    } catch (const std::domain_error&) {
    }
    try {
        r.enl = restore::enl(rest);
    } catch (const std::domain_error&) {
    }
    std::cout << restore::metrics_csv_string({r});
    if (!out_path.empty()) restore::write_metrics_csv(out_path, {r});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SAR image restoration pipeline: degrade, despeckle, deblur, score"};
    app.require_subcommand(1);

    // ---- run ----
    auto* run = app.add_subcommand("run", "execute a pipeline config file");
    std::string run_config_path;
    run->add_option("config", run_config_path, "pipeline config file")->required();
    std::string run_input, run_outdir, run_seed;
    bool run_quiet = false;
    std::vector<std::string> run_stage_sets;
    run->add_option("--input", run_input, "input image (config file wins conflicts)");
    run->add_option("--outdir", run_outdir, "output directory");
    run->add_option("--seed", run_seed, "pipeline seed");
    run->add_flag("--quiet", run_quiet, "suppress logs (artifacts always written)");
    run->add_option("--stage", run_stage_sets,
                    "extra stage parameter as N.param=value (repeatable)");

    // ---- degrade ----
    auto* degrade = app.add_subcommand("degrade", "blur and/or add noise to an image");
    std::string dg_input, dg_outdir, dg_seed, dg_noise, dg_blur_size, dg_blur_var,
        dg_sigma_n, dg_bsnr, dg_looks;
    bool dg_quiet = false;
    degrade->add_option("--input", dg_input)->required();
    degrade->add_option("--outdir", dg_outdir)->required();
    degrade->add_option("--seed", dg_seed);
    degrade->add_option("--noise", dg_noise,
                        "gaussian | speckle_amplitude | speckle_intensity | speckle_multilook");
    degrade->add_option("--blur-size", dg_blur_size, "odd Gaussian kernel width, 1 = none");
    degrade->add_option("--blur-variance", dg_blur_var);
    degrade->add_option("--sigma-n", dg_sigma_n, "additive noise std-dev");
    degrade->add_option("--bsnr", dg_bsnr, "target BSNR in dB (alternative to --sigma-n)");
    degrade->add_option("--looks", dg_looks, "multi-look count");
    degrade->add_flag("--quiet", dg_quiet);

    // ---- denoise ----
    auto* denoise = app.add_subcommand("denoise", "wavelet-domain despeckling");
    std::string dn_input, dn_outdir, dn_seed, dn_family, dn_levels, dn_rule, dn_sigma,
        dn_sigma_n, dn_ds_kernel, dn_mask_rows, dn_mask_cols, dn_mask;
    bool dn_quiet = false;
    denoise->add_option("--input", dn_input)->required();
    denoise->add_option("--outdir", dn_outdir)->required();
    denoise->add_option("--seed", dn_seed);
    denoise->add_option("--family", dn_family, "haar | db4");
    denoise->add_option("--levels", dn_levels);
    denoise->add_option("--rule", dn_rule,
                        "linear | soft | mask | ds (default: directional smoothing)");
    denoise->add_option("--sigma", dn_sigma);
    denoise->add_option("--sigma-n", dn_sigma_n);
    denoise->add_option("--ds-kernel", dn_ds_kernel);
    denoise->add_option("--mask-rows", dn_mask_rows);
    denoise->add_option("--mask-cols", dn_mask_cols);
    denoise->add_option("--mask", dn_mask, "space-separated mask weights");
    denoise->add_flag("--quiet", dn_quiet);

    // ---- deblur ----
    auto* deblur = app.add_subcommand("deblur", "sharpen a denoised image");
    std::string db_input, db_outdir, db_seed, db_method = "window", db_sigma, db_alfa,
        db_neurons, db_patch, db_alpha0, db_sigma0, db_sigma_end, db_steps, db_scan,
        db_map_out, db_ratio, db_reconstruct, db_lambda, db_bsnr, db_blur_size, db_blur_var;
    bool db_quiet = false;
    deblur->add_option("--input", db_input)->required();
    deblur->add_option("--outdir", db_outdir)->required();
    deblur->add_option("--seed", db_seed);
    deblur->add_option("--method", db_method, "window | som | cls")
        ->check(CLI::IsMember({"window", "som", "cls"}));
    deblur->add_option("--sigma", db_sigma, "window width (window method)");
    deblur->add_option("--alfa", db_alfa, "sharpening gain (window method)");
    deblur->add_option("--n-neurons", db_neurons);
    deblur->add_option("--patch-width", db_patch);
    deblur->add_option("--alpha0", db_alpha0);
    deblur->add_option("--sigma0", db_sigma0);
    deblur->add_option("--sigma-end", db_sigma_end);
    deblur->add_option("--total-steps", db_steps);
    deblur->add_option("--scan", db_scan, "ordered | random");
    deblur->add_option("--map-out", db_map_out, "trained map filename inside outdir");
    deblur->add_option("--calibrate-ratio", db_ratio);
    deblur->add_option("--reconstruct", db_reconstruct, "true | false");
    deblur->add_option("--lambda", db_lambda, "CLS regularization weight");
    deblur->add_option("--bsnr", db_bsnr, "CLS: derive lambda as 1/BSNR_dB");
    deblur->add_option("--blur-size", db_blur_size, "CLS: blur kernel width to invert");
    deblur->add_option("--blur-variance", db_blur_var);
    deblur->add_flag("--quiet", db_quiet);

    // ---- score ----
    auto* score = app.add_subcommand("score", "metrics for a restored image");
    std::string sc_original, sc_degraded, sc_restored, sc_label = "score", sc_out;
    score->add_option("--original", sc_original)->required();
    score->add_option("--degraded", sc_degraded, "needed for ISNR");
    score->add_option("--restored", sc_restored)->required();
    score->add_option("--label", sc_label, "row label in the CSV");
    score->add_option("--out", sc_out, "also write the CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad flags are config errors
    }

    try {
        if (app.got_subcommand(run)) {
            FlagLayer flags;
            if (!run_input.empty()) flags.set("input", run_input);
            if (!run_outdir.empty()) flags.set("outdir", run_outdir);
            if (!run_seed.empty()) flags.set("seed", run_seed);
            if (run_quiet) flags.set("quiet", "true");
            for (const std::string& s : run_stage_sets) {
                size_t eq = s.find('=');
                if (eq == std::string::npos || eq == 0)
                    throw ConfigError("--stage expects N.param=value, got '" + s + "'");
                flags.set("stage." + s.substr(0, eq), s.substr(eq + 1));
            }
            return cmd_run(run_config_path, flags);
        }

        if (app.got_subcommand(score))
            return cmd_score(sc_original, sc_degraded, sc_restored, sc_label, sc_out);

        // Single-stage shortcuts share the pipeline runner so artifacts and
        // metrics come out identical to a one-stage config file.
        std::ostringstream t;
        auto stage = [&t](const std::string& key, const std::string& value) {
            if (!value.empty()) t << "stage.0." << key << " = " << value << "\n";
        };
        if (app.got_subcommand(degrade)) {
            t << "input = " << dg_input << "\noutdir = " << dg_outdir << "\n";
            if (!dg_seed.empty()) t << "seed = " << dg_seed << "\n";
            if (dg_quiet) t << "quiet = true\n";
            t << "stage.0.name = degrade\n";
            stage("noise", dg_noise);
            stage("blur_size", dg_blur_size);
            stage("blur_variance", dg_blur_var);
            stage("sigma_n", dg_sigma_n);
            stage("bsnr", dg_bsnr);
            stage("looks", dg_looks);
        } else if (app.got_subcommand(denoise)) {
            t << "input = " << dn_input << "\noutdir = " << dn_outdir << "\n";
            if (!dn_seed.empty()) t << "seed = " << dn_seed << "\n";
            if (dn_quiet) t << "quiet = true\n";
            if (dn_rule.empty()) {
                t << "stage.0.name = smooth_shrink\n";
            } else {
                t << "stage.0.name = shrink\n";
                stage("rule", dn_rule);
                stage("sigma", dn_sigma);
                stage("sigma_n", dn_sigma_n);
                stage("mask_rows", dn_mask_rows);
                stage("mask_cols", dn_mask_cols);
                stage("mask", dn_mask);
            }
            stage("family", dn_family);
            stage("levels", dn_levels);
            stage("ds_kernel", dn_ds_kernel);
        } else if (app.got_subcommand(deblur)) {
            t << "input = " << db_input << "\noutdir = " << db_outdir << "\n";
            if (!db_seed.empty()) t << "seed = " << db_seed << "\n";
            if (db_quiet) t << "quiet = true\n";
            if (db_method == "window") {
                t << "stage.0.name = window_deblur\n";
                stage("sigma", db_sigma);
                stage("alfa", db_alfa);
            } else if (db_method == "som") {
                t << "stage.0.name = som_train\n";
                stage("n_neurons", db_neurons);
                stage("patch_width", db_patch);
                stage("alpha0", db_alpha0);
                stage("sigma0", db_sigma0);
                stage("sigma_end", db_sigma_end);
                stage("total_steps", db_steps);
                stage("scan", db_scan);
                stage("map_out", db_map_out);
                stage("calibrate_ratio", db_ratio);
                stage("reconstruct", db_reconstruct);
            } else {
                t << "stage.0.name = cls\n";
                stage("lambda", db_lambda);
                stage("bsnr", db_bsnr);
                stage("blur_size", db_blur_size);
                stage("blur_variance", db_blur_var);
            }
        }
        return run_config(t.str());
    } catch (const ConfigError& e) {
        std::cerr << "config error:\n" << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
