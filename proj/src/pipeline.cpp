#include "restore/pipeline.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "restore/cls.hpp"
#include "restore/degrade.hpp"
#include "restore/image.hpp"
#include "restore/metrics.hpp"
#include "restore/shrinkage.hpp"
#include "restore/som.hpp"
#include "restore/wavelet.hpp"

namespace fs = std::filesystem;

namespace restore {

namespace {

const std::vector<std::string> kAllMetrics = {"isnr", "bsnr", "mse", "psnr", "enl"};

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
    if (s.empty() || s[0] == '-') return false;
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size()) return false;
    out = v;
    return true;
}

bool parse_long(const std::string& s, long& out) {
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    long v = std::strtol(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size()) return false;
    out = v;
    return true;
}

bool parse_real(const std::string& s, double& out) {
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size() || !std::isfinite(v)) return false;
    out = v;
    return true;
}

std::vector<double> parse_real_list(const std::string& s) {
    std::vector<double> vals;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
        double v = 0.0;
        if (!parse_real(tok, v)) return {};
        vals.push_back(v);
    }
    return vals;
}

// Per-stage parameter vocabulary; anything else is rejected by name.
const std::map<std::string, std::set<std::string>> kStageKeys = {
    {"degrade", {"noise", "blur_size", "blur_variance", "sigma_n", "bsnr", "looks", "seed"}},
    {"smooth_shrink", {"family", "levels", "ds_kernel"}},
    {"shrink", {"rule", "family", "levels", "sigma", "sigma_n", "mask_rows", "mask_cols",
                "mask", "ds_kernel"}},
    {"som_train", {"n_neurons", "patch_width", "alpha0", "sigma0", "sigma_end", "total_steps",
                   "scan", "seed", "map_out", "calibrate_ratio", "reconstruct"}},
    {"window_deblur", {"sigma", "alfa"}},
    {"cls", {"lambda", "bsnr", "blur_size", "blur_variance"}},
};

// Validates one stage, appending one message per fault so a bad config is
// reported in full rather than one error at a time.
void validate_stage(const StageConfig& s, long index, std::vector<std::string>& errors) {
    std::string prefix = "stage " + std::to_string(index) + " (" + s.name + "): ";
    auto fail = [&](const std::string& m) { errors.push_back(prefix + m); };

    auto known = kStageKeys.find(s.name);
    if (known == kStageKeys.end()) {
        errors.push_back("stage " + std::to_string(index) + ": unknown stage name '" +
                         s.name + "'");
        return;
    }
    for (const auto& [k, v] : s.params)
        if (!known->second.count(k)) fail("parameter '" + k + "' not recognized");

    auto get = [&](const char* k) -> const std::string* {
        auto it = s.params.find(k);
        return it == s.params.end() ? nullptr : &it->second;
    };
    auto opt_long = [&](const char* k, long lo, long dflt) {
        const std::string* v = get(k);
        if (!v) return dflt;
        long x = 0;
        if (!parse_long(*v, x)) {
            fail(std::string("parameter '") + k + "' must be an integer");
            return dflt;
        }
        if (x < lo) fail(std::string("parameter '") + k + "' must be >= " + std::to_string(lo));
        return x;
    };
    auto opt_real = [&](const char* k, double dflt) {
        const std::string* v = get(k);
        if (!v) return dflt;
        double x = 0.0;
        if (!parse_real(*v, x)) {
            fail(std::string("parameter '") + k + "' must be a number");
            return dflt;
        }
        return x;
    };
    auto require_odd = [&](const char* k, long value) {
        if (value % 2 == 0) fail(std::string("parameter '") + k + "' must be odd");
    };
    auto check_seed = [&] {
        std::uint64_t x = 0;
        if (const std::string* v = get("seed"); v && !parse_u64(*v, x))
            fail("parameter 'seed' must be an unsigned integer");
    };

    if (s.name == "degrade") {
        std::string noise = get("noise") ? *get("noise") : "gaussian";
        const std::set<std::string> kinds = {"gaussian", "speckle_amplitude",
                                             "speckle_intensity", "speckle_multilook"};
        if (!kinds.count(noise)) fail("parameter 'noise' has unknown value '" + noise + "'");
        long bs = opt_long("blur_size", 1, 1);
        require_odd("blur_size", bs);
        if (double bv = opt_real("blur_variance", 1.5); bv <= 0.0)
            fail("parameter 'blur_variance' must be positive");
        if (noise == "gaussian") {
            bool has_sn = get("sigma_n") != nullptr;
            bool has_bsnr = get("bsnr") != nullptr;
            if (has_sn == has_bsnr)
                fail("give exactly one of 'sigma_n' and 'bsnr' for gaussian noise");
            if (has_sn && opt_real("sigma_n", 1.0) <= 0.0)
                fail("parameter 'sigma_n' must be positive");
            if (has_bsnr) opt_real("bsnr", 0.0);
        } else if (kinds.count(noise)) {
            if (get("sigma_n")) fail("parameter 'sigma_n' only applies to gaussian noise");
            if (get("bsnr")) fail("parameter 'bsnr' only applies to gaussian noise");
        }
        long looks = opt_long("looks", 1, 1);
        (void)looks;
        if (get("looks") && noise != "speckle_multilook")
            fail("parameter 'looks' only applies to speckle_multilook noise");
        check_seed();
    } else if (s.name == "smooth_shrink" || s.name == "shrink") {
        std::string family = get("family") ? *get("family") : "haar";
        if (family != "haar" && family != "db4")
            fail("parameter 'family' must be haar or db4");
        opt_long("levels", 1, 1);
        std::string rule = get("rule") ? *get("rule") : "";
        if (s.name == "shrink") {
            const std::set<std::string> rules = {"linear", "soft", "mask", "ds"};
            if (rule.empty())
                fail("parameter 'rule' is required (linear, soft, mask, or ds)");
            else if (!rules.count(rule))
                fail("parameter 'rule' has unknown value '" + rule + "'");
            bool is_pointwise = rule == "linear" || rule == "soft";
            if (!is_pointwise) {
                if (get("sigma")) fail("parameter 'sigma' only applies to linear/soft rules");
                if (get("sigma_n")) fail("parameter 'sigma_n' only applies to linear/soft rules");
            } else {
                if (opt_real("sigma", 0.0) < 0.0) fail("parameter 'sigma' must be >= 0");
                if (opt_real("sigma_n", 0.0) < 0.0) fail("parameter 'sigma_n' must be >= 0");
            }
            if (rule == "mask") {
                long mr = 0, mc = 0;
                if (!get("mask_rows") || !get("mask_cols") || !get("mask")) {
                    fail("mask rule requires 'mask_rows', 'mask_cols' and 'mask'");
                } else {
                    mr = opt_long("mask_rows", 1, 1);
                    mc = opt_long("mask_cols", 1, 1);
                    std::vector<double> vals = parse_real_list(*get("mask"));
                    if (vals.empty())
                        fail("parameter 'mask' must be space-separated numbers");
                    else if (static_cast<long>(vals.size()) != mr * mc)
                        fail("parameter 'mask' must hold mask_rows*mask_cols values");
                }
            } else {
                for (const char* k : {"mask_rows", "mask_cols", "mask"})
                    if (get(k)) fail(std::string("parameter '") + k +
                                     "' only applies to the mask rule");
            }
            if (rule != "ds" && get("ds_kernel"))
                fail("parameter 'ds_kernel' only applies to the ds rule");
        }
        if (s.name == "smooth_shrink" || rule == "ds") {
            long dk = opt_long("ds_kernel", 3, 3);
            require_odd("ds_kernel", dk);
            if (dk > 33) fail("parameter 'ds_kernel' must be <= 33");
        }
    } else if (s.name == "som_train") {
        opt_long("n_neurons", 2, 256);
        long pw = opt_long("patch_width", 1, 3);
        require_odd("patch_width", pw);
        double a0 = opt_real("alpha0", 0.9);
        if (a0 < 0.0 || a0 > 1.0) fail("parameter 'alpha0' must lie in [0, 1]");
        double s0 = opt_real("sigma0", 0.0);
        if (s0 < 0.0) fail("parameter 'sigma0' must be >= 0 (0 selects n/2)");
        double se = opt_real("sigma_end", 0.1);
        if (se <= 0.0) fail("parameter 'sigma_end' must be positive");
        if (s0 > 0.0 && s0 < se) fail("parameter 'sigma0' must be >= sigma_end");
        long ts = opt_long("total_steps", 0, 0);
        if (ts == 1) fail("parameter 'total_steps' must be >= 2 (0 selects 100*n)");
        if (std::string scan = get("scan") ? *get("scan") : "ordered";
            scan != "ordered" && scan != "random")
            fail("parameter 'scan' must be ordered or random");
        if (opt_real("calibrate_ratio", 2.0) < 0.0)
            fail("parameter 'calibrate_ratio' must be >= 0");
        if (const std::string* v = get("reconstruct"); v && *v != "true" && *v != "false")
            fail("parameter 'reconstruct' must be true or false");
        check_seed();
    } else if (s.name == "window_deblur") {
        long sigma = opt_long("sigma", 3, 3);
        require_odd("sigma", sigma);
        opt_real("alfa", 0.9);
    } else if (s.name == "cls") {
        bool has_lambda = get("lambda") != nullptr;
        bool has_bsnr = get("bsnr") != nullptr;
        if (has_lambda == has_bsnr) fail("give exactly one of 'lambda' and 'bsnr'");
        if (has_lambda && opt_real("lambda", 0.0) < 0.0)
            fail("parameter 'lambda' must be >= 0");
        if (has_bsnr && opt_real("bsnr", 20.0) <= 0.0)
            fail("parameter 'bsnr' must be positive");
        if (get("blur_size")) {
            long bs = opt_long("blur_size", 1, 1);
            require_odd("blur_size", bs);
        }
        if (get("blur_variance") && opt_real("blur_variance", 1.5) <= 0.0)
            fail("parameter 'blur_variance' must be positive");
    }
}

}  // namespace

PipelineConfig parse_config_text(const std::string& text) {
    std::vector<std::string> errors;
    std::map<std::string, std::string> top;
    std::map<long, StageConfig> stages;
    std::set<std::string> seen;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (size_t hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::string where = "line " + std::to_string(line_no) + ": ";

        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back(where + "expected key = value");
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            errors.push_back(where + "empty key");
            continue;
        }
        if (value.empty()) {
            errors.push_back(where + "empty value for '" + key + "'");
            continue;
        }
        if (!seen.insert(key).second) {
            errors.push_back(where + "duplicate key '" + key + "'");
            continue;
        }

        if (key.rfind("stage.", 0) == 0) {
            size_t dot = key.find('.', 6);
            if (dot == std::string::npos || dot == 6 || dot + 1 >= key.size()) {
                errors.push_back(where + "malformed stage key '" + key +
                                 "' (want stage.<index>.<param>)");
                continue;
            }
            std::uint64_t idx = 0;
            if (!parse_u64(key.substr(6, dot - 6), idx) || idx > 9999) {
                errors.push_back(where + "bad stage index in '" + key + "'");
                continue;
            }
            std::string param = key.substr(dot + 1);
            if (param == "name")
                stages[static_cast<long>(idx)].name = value;
            else
                stages[static_cast<long>(idx)].params[param] = value;
        } else if (key == "input" || key == "outdir" || key == "seed" || key == "quiet" ||
                   key == "metrics") {
            top[key] = value;
        } else {
            errors.push_back(where + "unknown key '" + key + "'");
        }
    }

    PipelineConfig cfg;
    if (auto it = top.find("input"); it != top.end())
        cfg.input = it->second;
    else
        errors.push_back("missing key: input");
    if (auto it = top.find("outdir"); it != top.end())
        cfg.outdir = it->second;
    else
        errors.push_back("missing key: outdir");
    if (auto it = top.find("seed"); it != top.end() && !parse_u64(it->second, cfg.seed))
        errors.push_back("key 'seed' must be an unsigned integer");
    if (auto it = top.find("quiet"); it != top.end()) {
        if (it->second == "true")
            cfg.quiet = true;
        else if (it->second != "false")
            errors.push_back("key 'quiet' must be true or false");
    }
    if (auto it = top.find("metrics"); it != top.end()) {
        std::istringstream ms(it->second);
        std::string tok;
        while (std::getline(ms, tok, ',')) {
            tok = trim(tok);
            if (std::find(kAllMetrics.begin(), kAllMetrics.end(), tok) == kAllMetrics.end())
                errors.push_back("key 'metrics' has unknown entry '" + tok + "'");
            else
                cfg.metrics.push_back(tok);
        }
    } else {
        cfg.metrics = kAllMetrics;
    }

    if (stages.empty()) {
        errors.push_back("no stages");
    } else {
        long expect = 0;
        for (const auto& [idx, stage] : stages) {
            if (idx != expect) {
                errors.push_back("stage indices must be contiguous from 0 (found " +
                                 std::to_string(idx) + ", expected " +
                                 std::to_string(expect) + ")");
                break;
            }
            ++expect;
        }
        for (const auto& [idx, stage] : stages) {
            if (stage.name.empty()) {
                errors.push_back("stage " + std::to_string(idx) + ": missing 'name'");
                continue;
            }
            validate_stage(stage, idx, errors);
        }
    }

    if (const char* env = std::getenv("RESTORE_SEED")) {
        std::uint64_t env_seed = 0;
        if (!parse_u64(env, env_seed))
            errors.push_back("RESTORE_SEED must be an unsigned integer");
        else
            cfg.seed = env_seed;
    }

    if (!errors.empty()) {
        std::string joined;
        for (size_t i = 0; i < errors.size(); ++i) {
            if (i) joined += '\n';
            joined += errors[i];
        }
        throw ConfigError(joined);
    }

    cfg.stages.reserve(stages.size());
    for (auto& [idx, stage] : stages) cfg.stages.push_back(std::move(stage));
    return cfg;
}

PipelineConfig parse_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config_text(buf.str());
}

std::set<std::string> config_keys(const std::string& text) {
    std::set<std::string> keys;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        if (size_t hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        size_t eq = raw.find('=');
        if (eq == std::string::npos) continue;
        std::string key = trim(raw.substr(0, eq));
        if (!key.empty()) keys.insert(key);
    }
    return keys;
}

std::string serialize_config(const PipelineConfig& cfg) {
    std::ostringstream out;
    out << "input = " << cfg.input << "\n";
    out << "outdir = " << cfg.outdir << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "quiet = " << (cfg.quiet ? "true" : "false") << "\n";
    out << "metrics = ";
    for (size_t i = 0; i < cfg.metrics.size(); ++i)
        out << (i ? "," : "") << cfg.metrics[i];
    out << "\n";
    for (size_t i = 0; i < cfg.stages.size(); ++i) {
        out << "stage." << i << ".name = " << cfg.stages[i].name << "\n";
        for (const auto& [k, v] : cfg.stages[i].params)
            out << "stage." << i << "." << k << " = " << v << "\n";
    }
    return out.str();
}

double stage_double(const StageConfig& s, const std::string& key, double fallback) {
    auto it = s.params.find(key);
    if (it == s.params.end()) return fallback;
    double v = 0.0;
    if (!parse_real(it->second, v))
        throw std::invalid_argument("parameter '" + key + "' is not a number");
    return v;
}

long stage_long(const StageConfig& s, const std::string& key, long fallback) {
    auto it = s.params.find(key);
    if (it == s.params.end()) return fallback;
    long v = 0;
    if (!parse_long(it->second, v))
        throw std::invalid_argument("parameter '" + key + "' is not an integer");
    return v;
}

std::string stage_string(const StageConfig& s, const std::string& key,
                         const std::string& fallback) {
    auto it = s.params.find(key);
    return it == s.params.end() ? fallback : it->second;
}

bool stage_bool(const StageConfig& s, const std::string& key, bool fallback) {
    auto it = s.params.find(key);
    if (it == s.params.end()) return fallback;
    if (it->second == "true") return true;
    if (it->second == "false") return false;
    throw std::invalid_argument("parameter '" + key + "' is not true/false");
}

namespace {

struct RunState {
    ImageGrid original;
    ImageGrid current;
    std::optional<ImageGrid> degraded;
    std::optional<ImageGrid> blurred_clean;
    std::optional<BlurKernel> blur_used;
    std::optional<double> sigma_n_used;
};

std::uint64_t stage_seed(const PipelineConfig& cfg, const StageConfig& s, size_t index) {
    auto it = s.params.find("seed");
    if (it != s.params.end()) {
        std::uint64_t v = 0;
        parse_u64(it->second, v);  // validated at parse time
        return v;
    }
    // Stages draw from distinct streams by default so reordering one stage
    // does not silently reuse another's noise.
    return cfg.seed + index;
}

void execute_stage(const PipelineConfig& cfg, const StageConfig& s, size_t index,
                   RunState& st) {
    if (s.name == "degrade") {
        long blur_size = stage_long(s, "blur_size", 1);
        BlurKernel kernel =
            blur_size > 1
                ? gaussian_kernel(static_cast<int>(blur_size),
                                  stage_double(s, "blur_variance", 1.5))
                : BlurKernel::identity();
        ImageGrid blurred =
            blur_size > 1 ? convolve_periodic(st.current, kernel) : st.current;
        st.blur_used = kernel;
        st.blurred_clean = blurred;

        std::string noise = stage_string(s, "noise", "gaussian");
        std::uint64_t seed = stage_seed(cfg, s, index);
        if (noise == "gaussian") {
            double sn = s.params.count("sigma_n")
                            ? stage_double(s, "sigma_n", 0.0)
                            : sigma_for_bsnr(blurred, stage_double(s, "bsnr", 0.0));
            st.current = apply_additive(blurred, sn, seed);
            st.sigma_n_used = sn;
        } else {
            NoiseSpec ns;
            ns.kind = noise == "speckle_amplitude"
                          ? NoiseKind::speckle_amplitude_single_look
                          : noise == "speckle_intensity"
                                ? NoiseKind::speckle_intensity_single_look
                                : NoiseKind::speckle_multilook;
            ns.looks = static_cast<int>(stage_long(s, "looks", 1));
            ns.seed = seed;
            st.current = apply_speckle(blurred, ns);
            st.sigma_n_used.reset();
        }
        st.degraded = st.current;
    } else if (s.name == "smooth_shrink") {
        WaveletFamily family = wavelet_family_from_name(stage_string(s, "family", "haar"));
        int levels = static_cast<int>(stage_long(s, "levels", 1));
        DsConfig ds{static_cast<int>(stage_long(s, "ds_kernel", 3)), 4};
        st.current = smooth_shrink(st.current, family, levels, ds);
    } else if (s.name == "shrink") {
        ShrinkageRule rule;
        std::string rn = stage_string(s, "rule", "ds");
        if (rn == "linear") rule.kind = ShrinkKind::linear_gaussian;
        else if (rn == "soft") rule.kind = ShrinkKind::soft_laplacian;
        else if (rn == "mask") rule.kind = ShrinkKind::mask_convolution;
        else rule.kind = ShrinkKind::directional_smoothing;
        rule.sigma = stage_double(s, "sigma", 0.0);
        rule.sigma_n = stage_double(s, "sigma_n", 0.0);
        if (rule.kind == ShrinkKind::mask_convolution) {
            rule.mask_rows = static_cast<int>(stage_long(s, "mask_rows", 0));
            rule.mask_cols = static_cast<int>(stage_long(s, "mask_cols", 0));
            rule.mask = parse_real_list(stage_string(s, "mask", ""));
        }
        rule.ds.kernel_size = static_cast<int>(stage_long(s, "ds_kernel", 3));
        WaveletFamily family = wavelet_family_from_name(stage_string(s, "family", "haar"));
        int levels = static_cast<int>(stage_long(s, "levels", 1));
        st.current = shrink_denoise(st.current, family, levels, rule);
    } else if (s.name == "som_train") {
        SomConfig sc;
        sc.n_neurons = static_cast<int>(stage_long(s, "n_neurons", 256));
        sc.patch_width = static_cast<int>(stage_long(s, "patch_width", 3));
        sc.alpha0 = stage_double(s, "alpha0", 0.9);
        sc.sigma0 = stage_double(s, "sigma0", 0.0);
        sc.sigma_end = stage_double(s, "sigma_end", 0.1);
        sc.total_steps = stage_long(s, "total_steps", 0);
        sc.scan = stage_string(s, "scan", "ordered") == "random" ? ScanOrder::random
                                                                 : ScanOrder::ordered;
        sc.seed = stage_seed(cfg, s, index);
        SomMap map = som_train(st.current, sc);
        map = calibrate(map, stage_double(s, "calibrate_ratio", 2.0));
        std::string map_name =
            stage_string(s, "map_out", std::to_string(index) + "_som_map.txt");
        save_map((fs::path(cfg.outdir) / map_name).string(), map);
        if (stage_bool(s, "reconstruct", true)) st.current = som_reconstruct(st.current, map);
    } else if (s.name == "window_deblur") {
        st.current = window_deblur(st.current, static_cast<int>(stage_long(s, "sigma", 3)),
                                   stage_double(s, "alfa", 0.9));
    } else if (s.name == "cls") {
        double lambda = s.params.count("lambda")
                            ? stage_double(s, "lambda", 0.0)
                            : rp_from_bsnr(stage_double(s, "bsnr", 20.0));
        BlurKernel kernel;
        if (s.params.count("blur_size")) {
            long bs = stage_long(s, "blur_size", 1);
            kernel = bs > 1 ? gaussian_kernel(static_cast<int>(bs),
                                              stage_double(s, "blur_variance", 1.5))
                            : BlurKernel::identity();
        } else if (st.blur_used) {
            kernel = *st.blur_used;  // invert the blur the pipeline applied
        } else {
            throw std::runtime_error(
                "no blur kernel available: set 'blur_size' or run a degrade stage first");
        }
        st.current = cls_restore(st.current, kernel, ClsConfig{lambda});
    } else {
        throw std::logic_error("unknown stage survived validation: " + s.name);
    }
}

MetricsReport stage_report(const PipelineConfig& cfg, const StageConfig& s, size_t index,
                           const RunState& st) {
    auto wanted = [&](const char* m) {
        return std::find(cfg.metrics.begin(), cfg.metrics.end(), m) != cfg.metrics.end();
    };
    MetricsReport r;
    r.pipeline = std::to_string(index) + "_" + s.name;
    if (wanted("bsnr") && s.name == "degrade" && st.blurred_clean && st.sigma_n_used) {
        try {
            r.bsnr_db = bsnr(*st.blurred_clean, *st.sigma_n_used);
        } catch (const std::domain_error&) {
        }
    }
    if (wanted("isnr") && st.degraded && s.name != "degrade") {
        try {
            double v = isnr(st.original, *st.degraded, st.current);
            if (std::isfinite(v)) r.isnr_db = v;
        } catch (const std::domain_error&) {
        }
    }
    if (wanted("mse")) r.mse = mse(st.original, st.current);
    if (wanted("psnr")) {
        try {
            r.psnr_db = psnr(st.original, st.current);
        } catch (const std::domain_error&) {
        }
    }
    if (wanted("enl")) {
        try {
            r.enl = enl(st.current);
        } catch (const std::domain_error&) {
        }
    }
    return r;
}

}  // namespace

int run_pipeline(const PipelineConfig& cfg) {
    RunState st;
    try {
        st.original = load_image(cfg.input);
    } catch (const std::exception& e) {
        std::cerr << "input: " << e.what() << "\n";
        return 3;
    }
    std::error_code ec;
    fs::create_directories(cfg.outdir, ec);
    if (ec) {
        std::cerr << "outdir: cannot create " << cfg.outdir << ": " << ec.message() << "\n";
        return 3;
    }

    st.current = st.original;
    std::vector<MetricsReport> reports;
    for (size_t i = 0; i < cfg.stages.size(); ++i) {
        const StageConfig& s = cfg.stages[i];
        try {
            execute_stage(cfg, s, i, st);
            fs::path img_path =
                fs::path(cfg.outdir) / (std::to_string(i) + "_" + s.name + ".pgm");
            save_image(st.current, img_path.string());
            reports.push_back(stage_report(cfg, s, i, st));
            write_metrics_csv((fs::path(cfg.outdir) / "metrics.csv").string(), reports);
            if (!cfg.quiet)
                std::cout << "stage " << i << " (" << s.name << "): wrote "
                          << img_path.string() << "\n";
        } catch (const std::exception& e) {
            std::cerr << "stage " << i << " (" << s.name << "): " << e.what() << "\n";
            return 3;
        }
    }
    return 0;
}

}  // namespace restore
