#include "ergo/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"

#include "ergo/expansive.hpp"
#include "ergo/heis.hpp"
#include "ergo/io.hpp"
#include "ergo/metrics.hpp"
#include "ergo/rng.hpp"
#include "ergo/skew.hpp"
#include "ergo/unipotent.hpp"

using nlohmann::json;

namespace ergo {

namespace {

const json& require(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object() || !j.contains(key))
        throw ConfigError(path + "." + key, "missing required field");
    return j.at(key);
}

double require_number(const json& j, const std::string& path, const std::string& key) {
    const json& v = require(j, path, key);
    if (!v.is_number()) throw ConfigError(path + "." + key, "expected a number");
    return v.get<double>();
}

long get_long(const json& j, const std::string& path, const std::string& key, long fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) throw ConfigError(path + "." + key, "expected an integer");
    return j.at(key).get<long>();
}

double get_number(const json& j, const std::string& key, double fallback) {
    return (j.is_object() && j.contains(key)) ? j.at(key).get<double>() : fallback;
}

FunctionSpec parse_function(const json& j, const std::string& path, int arity) {
    if (!j.is_object()) throw ConfigError(path, "expected an object {winding, harmonics}");
    FunctionSpec f(static_cast<int>(get_long(j, path, "winding", 0)), arity);
    if (j.contains("harmonics")) {
        const json& hs = j.at("harmonics");
        if (!hs.is_array()) throw ConfigError(path + ".harmonics", "expected an array");
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const json& h = hs[i];
            std::string hp = path + ".harmonics[" + std::to_string(i) + "]";
            if (!h.is_array() || h.size() != 3) throw ConfigError(hp, "expected [[k...], a, b]");
            Harmonic harm;
            harm.freq = h[0].get<std::vector<int>>();
            harm.a = h[1].get<double>();
            harm.b = h[2].get<double>();
            if (static_cast<int>(harm.freq.size()) != arity)
                throw ConfigError(hp, "frequency vector must have length " + std::to_string(arity));
            f.harmonics.push_back(std::move(harm));
        }
    }
    return f;
}

json function_json(const FunctionSpec& f) {
    json j;
    j["winding"] = f.winding;
    j["arity"] = f.arity;
    j["harmonics"] = json::array();
    for (const auto& h : f.harmonics) j["harmonics"].push_back({h.freq, h.a, h.b});
    return j;
}

SkewSystem parse_skew(const json& j, const std::string& path) {
    int d = static_cast<int>(require_number(j, path, "d"));
    double alpha = require_number(j, path, "alpha");
    const json& skews = require(j, path, "skews");
    if (!skews.is_array() || static_cast<int>(skews.size()) != d - 1)
        throw ConfigError(path + ".skews", "expected an array of d-1 maps");
    std::vector<FunctionSpec> fs;
    for (int i = 0; i < d - 1; ++i)
        fs.push_back(parse_function(skews[i], path + ".skews[" + std::to_string(i) + "]", i + 1));
    try {
        return SkewSystem(d, alpha, std::move(fs));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
}

ExpansiveSystem parse_expansive(const json& j, const std::string& path) {
    double alpha = require_number(j, path, "alpha");
    int p = static_cast<int>(require_number(j, path, "p"));
    FunctionSpec f = parse_function(require(j, path, "f"), path + ".f", 1);
    try {
        return ExpansiveSystem(alpha, p, std::move(f));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
}

struct SystemBundle {
    std::string type;
    int dim = 0;
    std::function<void(double*)> step;
    std::unique_ptr<SkewSystem> skew;
    std::unique_ptr<ExpansiveSystem> expansive;
    std::unique_ptr<NilRotation> nil;
};

SystemBundle parse_system(const json& cfg) {
    const json& j = require(cfg, "$", "system");
    SystemBundle b;
    b.type = require(j, "$.system", "type").get<std::string>();
    if (b.type == "skew") {
        b.skew = std::make_unique<SkewSystem>(parse_skew(j, "$.system"));
        b.dim = b.skew->d;
        const SkewSystem* s = b.skew.get();
        b.step = [s](double* p) { s->step(p); };
    } else if (b.type == "rotation") {
        int d = static_cast<int>(require_number(j, "$.system", "d"));
        std::vector<double> shift = require(j, "$.system", "shift").get<std::vector<double>>();
        if (static_cast<int>(shift.size()) != d)
            throw ConfigError("$.system.shift", "expected d components");
        b.dim = d;
        b.step = [shift, d](double* p) {
            for (int a = 0; a < d; ++a) p[a] = wrap(p[a] + shift[a]);
        };
    } else if (b.type == "expansive") {
        b.expansive = std::make_unique<ExpansiveSystem>(parse_expansive(j, "$.system"));
        b.dim = 2;
        const ExpansiveSystem* s = b.expansive.get();
        b.step = [s](double* p) { s->step(p); };
    } else if (b.type == "nilrotation") {
        HeisElem u{require_number(j, "$.system", "xu"), require_number(j, "$.system", "yu"),
                   get_number(j, "zu", 0.0)};
        try {
            b.nil = std::make_unique<NilRotation>(u);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("$.system", e.what());
        }
        b.dim = 3;
        const NilRotation* r = b.nil.get();
        b.step = [r](double* p) { nil_step(*r, p); };
    } else {
        throw ConfigError("$.system.type", "unknown system type '" + b.type + "'");
    }
    return b;
}

ParticleCloud parse_cloud(const json& cfg, const SystemBundle& sys) {
    const json& j = require(cfg, "$", "cloud");
    std::string ctor = require(j, "$.cloud", "constructor").get<std::string>();
    std::size_t size = static_cast<std::size_t>(require_number(j, "$.cloud", "size"));
    std::uint64_t seed = static_cast<std::uint64_t>(get_long(j, "$.cloud", "seed", 0));
    Space space = sys.type == "nilrotation" ? Space::heisenberg : Space::torus;
    if (ctor == "haar") return sample_haar(space, sys.dim, size, seed);
    if (ctor == "grid") {
        std::size_t m = static_cast<std::size_t>(
            std::llround(std::pow(double(size), 1.0 / sys.dim)));
        return stratified_grid_cloud(sys.dim, std::max<std::size_t>(m, 1));
    }
    if (ctor == "section") {
        double last = require_number(j, "$.cloud", "last_coord");
        std::size_t m = sys.dim == 2
                            ? size
                            : static_cast<std::size_t>(std::llround(
                                  std::pow(double(size), 1.0 / (sys.dim - 1))));
        return stratified_section_cloud(sys.dim, std::max<std::size_t>(m, 1), last, space);
    }
    if (ctor == "curve") {
        if (sys.dim != 2) throw ConfigError("$.cloud.constructor", "curve clouds are 2-D");
        FunctionSpec gamma = parse_function(require(j, "$.cloud", "curve"), "$.cloud.curve", 1);
        CurveSampling mode = CurveSampling::stratified;
        if (j.value("mode", "stratified") == std::string("iid")) mode = CurveSampling::iid;
        return cloud_on_curve(gamma, size, mode, seed);
    }
    if (ctor == "fiber_section") {
        if (space != Space::heisenberg)
            throw ConfigError("$.cloud.constructor", "fiber_section requires a nilrotation system");
        return fiber_section_cloud(require_number(j, "$.cloud", "z0"), size, seed);
    }
    throw ConfigError("$.cloud.constructor", "unknown constructor '" + ctor + "'");
}

struct MetricParams {
    int K = 8;
    double s = 1.0;
    int family_size = 32;
    std::uint64_t family_seed = 1;
};

MetricParams parse_metric(const json& cfg, int dim) {
    MetricParams m;
    m.K = MetricDefaults::K_for(dim);
    if (cfg.contains("metric")) {
        const json& j = cfg.at("metric");
        m.K = static_cast<int>(get_long(j, "$.metric", "K", m.K));
        m.s = get_number(j, "s", m.s);
        m.family_size = static_cast<int>(get_long(j, "$.metric", "family_size", m.family_size));
        m.family_seed =
            static_cast<std::uint64_t>(get_long(j, "$.metric", "family_seed", 1));
    }
    return m;
}

std::vector<long> parse_samples(const json& cfg) {
    const json& j = require(cfg, "$", "schedule");
    std::vector<long> samples;
    if (j.contains("samples")) {
        samples = j.at("samples").get<std::vector<long>>();
    } else {
        long n_max = get_long(j, "$.schedule", "n_max", -1);
        long stride = get_long(j, "$.schedule", "stride", 1);
        if (n_max < 0) throw ConfigError("$.schedule", "need samples or n_max");
        if (stride < 1) throw ConfigError("$.schedule.stride", "stride must be >= 1");
        for (long n = 0; n <= n_max; n += stride) samples.push_back(n);
    }
    if (samples.empty()) throw ConfigError("$.schedule.samples", "empty schedule");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (samples[i] <= samples[i - 1])
            throw ConfigError("$.schedule.samples", "samples must increase");
    return samples;
}

std::string profile_csv(const std::vector<ProfilePoint>& profile) {
    std::ostringstream os;
    os << "n,fourier_value,lipschitz_lower\n";
    os << std::scientific << std::setprecision(16);
    for (const auto& p : profile)
        os << p.n << "," << p.fourier_value << "," << p.lipschitz_lower << "\n";
    return os.str();
}

struct Emitter {
    std::string out_dir;
    json manifest_outputs = json::array();

    void emit(const std::string& name, const std::string& content) {
        std::filesystem::create_directories(out_dir);
        atomic_write((std::filesystem::path(out_dir) / name).string(), content);
        manifest_outputs.push_back(name);
    }
};

} // namespace

double calibrate_noise_floor(Space space, int dim, std::size_t n, int K, double s,
                             std::uint64_t seed, int repeats, bool stratified) {
    if (repeats < 3) throw std::invalid_argument("calibrate_noise_floor: repeats must be >= 3");
    std::vector<double> vals;
    for (int r = 0; r < repeats; ++r) {
        ParticleCloud cloud =
            stratified ? stratified_grid_cloud(dim, static_cast<std::size_t>(std::llround(
                                                        std::pow(double(n), 1.0 / dim))))
                       : sample_haar(space, dim, n, seed + 7919u * r);
        vals.push_back(haar_distance(cloud, K, s));
    }
    std::sort(vals.begin(), vals.end());
    return vals[vals.size() / 2];
}

void run_experiment(const std::string& config_text, const RunOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
#ifdef _OPENMP
    if (opts.threads > 0) omp_set_num_threads(opts.threads);
#endif
    json cfg;
    try {
        cfg = json::parse(config_text);
    } catch (const json::exception& e) {
        throw ConfigError("$", std::string("invalid JSON: ") + e.what());
    }
    std::string kind = require(cfg, "$", "kind").get<std::string>();
    Emitter out{opts.out_dir};
    std::map<std::string, double> summary;
    double noise_floor = std::numeric_limits<double>::quiet_NaN();

    auto calibrate_from_cfg = [&](int dim, std::size_t cloud_size, const MetricParams& m) {
        if (!cfg.contains("noise_floor")) return;
        const json& j = cfg.at("noise_floor");
        int repeats = static_cast<int>(get_long(j, "$.noise_floor", "repeats", 3));
        std::uint64_t seed = static_cast<std::uint64_t>(get_long(j, "$.noise_floor", "seed", 123));
        std::size_t n = static_cast<std::size_t>(get_long(
            j, "$.noise_floor", "size", static_cast<long>(cloud_size)));
        noise_floor = calibrate_noise_floor(Space::torus, dim, n, m.K, m.s, seed, repeats);
        summary["noise_floor"] = noise_floor;
    };

    if (kind == "distance_profile" || kind == "heisenberg") {
        SystemBundle sys = parse_system(cfg);
        if (kind == "heisenberg" && sys.type != "nilrotation")
            throw ConfigError("$.system.type", "heisenberg experiments need a nilrotation");
        ParticleCloud mu = parse_cloud(cfg, sys);
        MetricParams m = parse_metric(cfg, sys.dim);
        std::vector<long> samples = parse_samples(cfg);
        calibrate_from_cfg(sys.dim, mu.size(), m);
        if (kind == "heisenberg") summary["haar_n0_s0"] = haar_distance(mu, m.K, 0.0);
        auto profile = distance_profile_at(sys.step, mu, samples, m.K, m.s, m.family_seed,
                                           m.family_size);
        out.emit("profile.csv", profile_csv(profile));
        summary["haar_n0"] = profile.front().fourier_value;
        summary["haar_final"] = profile.back().fourier_value;
        std::vector<double> values;
        for (const auto& p : profile) values.push_back(p.fourier_value);
        summary["cesaro"] = cesaro_average(values, values.size());
        if (summary["haar_n0"] > 0.0)
            summary["cesaro_over_n0"] = summary["cesaro"] / summary["haar_n0"];
        if (!std::isnan(noise_floor) && noise_floor > 0.0)
            summary["haar_final_over_noise"] = summary["haar_final"] / noise_floor;
        if (cfg.contains("vertical_defect")) {
            if (!sys.skew)
                throw ConfigError("$.vertical_defect", "requires a skew system");
            const json& vd = cfg.at("vertical_defect");
            double t = require_number(vd, "$.vertical_defect", "t");
            long n = get_long(vd, "$.vertical_defect", "n", samples.back());
            summary["vertical_defect"] =
                vertical_rotation_defect(*sys.skew, mu, t, n, m.K, m.s);
            if (!std::isnan(noise_floor) && noise_floor > 0.0)
                summary["vertical_defect_over_noise"] = summary["vertical_defect"] / noise_floor;
        }
        if (cfg.contains("density")) {
            const json& dj = cfg.at("density");
            double eps = dj.contains("epsilon")
                             ? dj.at("epsilon").get<double>()
                             : get_number(dj, "epsilon_over_noise", 3.0) * noise_floor;
            if (!(eps > 0.0))
                throw ConfigError("$.density", "epsilon not positive (is noise_floor configured?)");
            DensityReport rep = density_statistics(values, eps);
            out.emit("density.json", density_report_json(rep));
            summary["exceptional_density"] = rep.density;
        }
    } else if (kind == "cocycle_met") {
        SystemBundle sys = parse_system(cfg);
        if (!sys.skew) throw ConfigError("$.system.type", "cocycle_met needs a skew system");
        CocycleSpec spec = derivative_cocycle(*sys.skew);
        if (!spec.base_minimal && !opts.assume_ergodic)
            throw ConfigError("$.system",
                              "base not certified minimal; pass --assume-ergodic to proceed");
        std::vector<long> samples = parse_samples(cfg);
        const json& st = require(cfg, "$", "starts");
        int count = static_cast<int>(get_long(st, "$.starts", "count", 1));
        std::uint64_t seed = static_cast<std::uint64_t>(get_long(st, "$.starts", "seed", 11));
        auto g = rng_stream(seed, "met_starts");
        // Worst deviation over starting points, per sample and per entry.
        std::vector<MetDeviation> worst;
        for (int c = 0; c < count; ++c) {
            std::vector<double> x(spec.base_dim);
            for (double& v : x) v = uniform01(g);
            auto devs = met_convergence_check(spec, x, samples);
            if (worst.empty()) {
                worst = devs;
            } else {
                for (std::size_t i = 0; i < devs.size(); ++i) {
                    worst[i].max_deviation =
                        std::max(worst[i].max_deviation, devs[i].max_deviation);
                    for (std::size_t e = 0; e < devs[i].by_entry.size(); ++e)
                        std::get<2>(worst[i].by_entry[e]) = std::max(
                            std::get<2>(worst[i].by_entry[e]), std::get<2>(devs[i].by_entry[e]));
                }
            }
        }
        std::ostringstream os;
        os << "n,max_deviation,entry_i,entry_j,deviation_ij\n";
        os << std::scientific << std::setprecision(16);
        for (const auto& dev : worst)
            for (const auto& [i, j, dij] : dev.by_entry)
                os << dev.n << "," << dev.max_deviation << "," << i << "," << j << "," << dij
                   << "\n";
        out.emit("convergence.csv", os.str());
        summary["max_deviation_final"] = worst.back().max_deviation;
        summary["lambda_2"] = boost::rational_cast<double>(lambda_constant(2));
    } else if (kind == "expansive_s" || kind == "example_5_5") {
        SystemBundle sys = parse_system(cfg);
        if (!sys.expansive)
            throw ConfigError("$.system.type", "this experiment needs an expansive system");
        FunctionSpec gamma(0, 1);
        if (kind == "example_5_5" ||
            (cfg.contains("gamma") && cfg.at("gamma").is_string() &&
             cfg.at("gamma").get<std::string>() == "example_5_5")) {
            gamma = make_example_5_5(*sys.expansive);
            out.emit("curve.json", function_json(gamma).dump(2));
        } else {
            gamma = parse_function(require(cfg, "$", "gamma"), "$.gamma", 1);
        }
        double eps = get_number(cfg, "epsilon", 0.01);
        int grid_n = static_cast<int>(get_long(cfg, "$", "grid_n", 10000));
        int N_trunc = static_cast<int>(get_long(cfg, "$", "N_trunc", 40));
        try {
            SSetReport rep = s_set(*sys.expansive, gamma, eps, grid_n, N_trunc);
            out.emit("s_set.json", s_set_report_json(rep));
            summary["beta"] = rep.beta;
            summary["kappa"] = rep.kappa;
        } catch (const std::invalid_argument& e) {
            throw ConfigError("$.epsilon", e.what());
        }
    } else if (kind == "coboundary") {
        SystemBundle sys = parse_system(cfg);
        if (!sys.expansive)
            throw ConfigError("$.system.type", "coboundary experiments need an expansive system");
        FunctionSpec gamma = parse_function(require(cfg, "$", "gamma"), "$.gamma", 1);
        if (cfg.value("construct_f_from_gamma", false))
            sys.expansive = std::make_unique<ExpansiveSystem>(
                sys.expansive->alpha, sys.expansive->p,
                coboundary_of(gamma, sys.expansive->alpha, sys.expansive->p));
        double residual = coboundary_residual(*sys.expansive, gamma);
        json j;
        j["residual"] = std::isinf(residual) ? json("inf") : json(residual);
        j["winding_identity_ok"] = !std::isinf(residual);
        out.emit("coboundary.json", j.dump(2));
        summary["residual"] = residual;
    } else {
        throw ConfigError("$.kind", "unknown experiment kind '" + kind + "'");
    }

    if (opts.check && cfg.contains("check")) {
        for (const auto& [key, bounds] : cfg.at("check").items()) {
            if (!summary.count(key))
                throw ConfigError("$.check." + key, "no such summary value");
            double v = summary.at(key);
            if (bounds.contains("max") && !(v <= bounds.at("max").get<double>()))
                throw AcceptanceCheckFailed(key + " = " + std::to_string(v) + " exceeds max " +
                                            std::to_string(bounds.at("max").get<double>()));
            if (bounds.contains("min") && !(v >= bounds.at("min").get<double>()))
                throw AcceptanceCheckFailed(key + " = " + std::to_string(v) + " below min " +
                                            std::to_string(bounds.at("min").get<double>()));
        }
    }

    json manifest;
    manifest["version"] = "ergodiclab 1.0";
    manifest["config"] = cfg;
    manifest["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!std::isnan(noise_floor)) manifest["noise_floor"] = noise_floor;
    json js;
    for (const auto& [k, v] : summary)
        js[k] = std::isinf(v) ? json("inf") : json(v);
    manifest["summary"] = js;
    out.emit("run_manifest.json", manifest.dump(2));
}

} // namespace ergo
