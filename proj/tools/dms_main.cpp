// Command-line front end: minimize / threshold / probe / density / gaussian /
// verify. JSON configs in, JSON + CSV + DMSF out, stable exit codes:
//   0 ok/converged, 1 config error, 2 not converged, 3 unbounded below,
//   4 numerically inconclusive or failed verification.

#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>

#include "dms/field_io.hpp"
#include "dms/optimizer.hpp"
#include "dms/thresholds.hpp"
#include "dms/verify.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitUnbounded = 3;
constexpr int kExitInconclusive = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::size_t default_quad_nodes() {
    if (const char* env = std::getenv("DMS_QUAD_NODES")) {
        const long v = std::atol(env);
        if (v < 2) throw ConfigError("DMS_QUAD_NODES must be an integer >= 2");
        return static_cast<std::size_t>(v);
    }
    return 64;
}

json load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
}

dms::GridSpec parse_grid(const json& cfg) {
    std::size_t n = 1024;
    double extent = 40.0;
    if (cfg.contains("grid")) {
        const auto& g = cfg.at("grid");
        n = g.value("n", n);
        extent = g.value("extent", extent);
    }
    return dms::GridSpec::make(n, extent);
}

dms::Potential parse_potential(const json& cfg) {
    if (!cfg.contains("potential")) throw ConfigError("config needs a \"potential\" block");
    const auto& p = cfg.at("potential");
    if (!p.contains("terms") || !p.at("terms").is_array() || p.at("terms").empty())
        throw ConfigError("potential.terms must be a non-empty array");
    std::vector<dms::PowerTerm> terms;
    for (const auto& t : p.at("terms")) terms.push_back({t.at("c").get<double>(), t.at("s").get<double>()});
    std::optional<double> g0, k0;
    if (p.contains("gamma0")) g0 = p.at("gamma0").get<double>();
    if (p.contains("kappa0")) k0 = p.at("kappa0").get<double>();
    try {
        return dms::Potential::make(std::move(terms), g0, k0);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad potential: ") + e.what());
    }
}

dms::DispersionProfile parse_profile(const json& spec) {
    if (spec.is_string()) {
        if (spec.get<std::string>() == "model") return dms::DispersionProfile::model();
        throw ConfigError("unknown profile alias: " + spec.get<std::string>());
    }
    if (!spec.contains("segments")) throw ConfigError("profile needs a \"segments\" array");
    std::vector<dms::ProfileSegment> segs;
    for (const auto& s : spec.at("segments"))
        segs.push_back({s.at("d0").get<double>(), s.at("len").get<double>()});
    try {
        return dms::DispersionProfile::make(std::move(segs));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad profile: ") + e.what());
    }
}

dms::RMeasure parse_measure(const json& cfg) {
    const std::size_t def = default_quad_nodes();
    if (!cfg.contains("measure")) return dms::RMeasure::uniform01(def);
    const auto& m = cfg.at("measure");
    const std::string kind = m.value("kind", "uniform01");
    try {
        if (kind == "uniform01") return dms::RMeasure::uniform01(m.value("nodes", def));
        if (kind == "profile")
            return dms::RMeasure::pushforward(parse_profile(m.at("profile")),
                                              m.value("nodes_per_segment", def));
        if (kind == "explicit")
            return dms::RMeasure::from_nodes(m.at("nodes").get<std::vector<double>>(),
                                             m.at("weights").get<std::vector<double>>());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad measure block: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad measure: ") + e.what());
    }
    throw ConfigError("measure.kind must be uniform01 | profile | explicit");
}

// Quadrature auto-refinement: double the node count until N of a reference
// Gaussian moves by less than 1e-10 relative (cap 1024 per segment).
dms::RMeasure resolve_measure(dms::RMeasure mu, const dms::GridSpec& grid, double lambda,
                              const dms::Potential& pot) {
    if (!mu.refinable()) return mu;
    const double s0 = std::max(2.0, 1.05 * 64.0 * grid.dx() * grid.dx());
    const dms::Field ref =
        dms::gaussian_field(dms::GaussianParams::make(lambda, s0), grid);
    std::size_t m = std::max<std::size_t>(2, mu.nodes_per_segment());
    double last = dms::evaluate_N(ref, mu.refined(m), pot);
    while (2 * m <= 1024) {
        const double next = dms::evaluate_N(ref, mu.refined(2 * m), pot);
        if (std::abs(next - last) <= 1e-10 * std::max(std::abs(next), 1e-300))
            return mu.refined(2 * m);
        last = next;
        m *= 2;
    }
    return mu.refined(m);
}

dms::MinimizeConfig parse_minimize_config(const json& cfg, std::uint64_t seed_override,
                                          bool has_seed_override) {
    dms::MinimizeConfig mc;
    mc.grid = parse_grid(cfg);
    mc.lambda = cfg.value("lambda", 1.0);
    mc.dav = cfg.value("dav", 1.0);
    if (cfg.contains("optimizer")) {
        const auto& o = cfg.at("optimizer");
        mc.max_iters = o.value("max_iters", mc.max_iters);
        mc.grad_tol = o.value("grad_tol", mc.grad_tol);
        mc.gauge_fix_every = o.value("gauge_fix_every", mc.gauge_fix_every);
        mc.seed = o.value("seed", mc.seed);
        if (o.contains("sigma0_init"))
            mc.sigma0_init = o.at("sigma0_init").get<std::vector<double>>();
    }
    if (has_seed_override) mc.seed = seed_override;
    try {
        mc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad optimizer config: ") + e.what());
    }
    return mc;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open output file: " + path.string());
    os << std::setprecision(17);
    return os;
}

void write_json(const fs::path& path, const json& j) {
    auto os = open_out(path);
    os << j.dump(2) << "\n";
}

int cmd_minimize(const json& cfg, const fs::path& outdir, std::uint64_t seed, bool has_seed) {
    const auto mc = parse_minimize_config(cfg, seed, has_seed);
    const auto pot = parse_potential(cfg);
    const auto mu = resolve_measure(parse_measure(cfg), mc.grid, mc.lambda, pot);
    const dms::MinimizeResult res = dms::minimize(mc, mu, pot);

    const std::string field_file =
        cfg.contains("output") ? cfg.at("output").value("field_file", "out.dmsf")
                               : std::string("out.dmsf");
    const std::string result_file =
        cfg.contains("output") ? cfg.at("output").value("result_file", "result.json")
                               : std::string("result.json");
    if (!res.unbounded) dms::write_dmsf((outdir / field_file).string(), res.field);

    json restarts = json::array();
    for (const auto& r : res.restarts)
        restarts.push_back({{"sigma0", r.sigma0},
                            {"energy", r.energy},
                            {"converged", r.converged},
                            {"diverged", r.diverged},
                            {"escaped", r.escaped},
                            {"iterations", r.iterations}});
    json out = {{"energy", res.energy},
                {"omega", res.omega},
                {"el_residual", res.el_residual},
                {"iterations", res.iterations},
                {"converged", res.converged},
                {"unbounded", res.unbounded},
                {"a2_warning", res.a2_warning},
                {"field_file", field_file},
                {"restarts", restarts}};
    write_json(outdir / result_file, out);
    std::cout << out.dump(2) << "\n";
    if (res.unbounded) return kExitUnbounded;
    return res.converged ? kExitOk : kExitNotConverged;
}

int cmd_threshold(const json& cfg, const fs::path& outdir, std::uint64_t seed, bool has_seed) {
    auto base = parse_minimize_config(cfg, seed, has_seed);
    const auto pot = parse_potential(cfg);
    const auto mu = resolve_measure(parse_measure(cfg), base.grid, base.lambda, pot);
    if (!cfg.contains("threshold")) throw ConfigError("config needs a \"threshold\" block");
    const auto& t = cfg.at("threshold");
    if (!t.contains("bracket") || t.at("bracket").size() != 2)
        throw ConfigError("threshold.bracket must be [lambda_lo, lambda_hi]");
    const double lo = t.at("bracket").at(0).get<double>();
    const double hi = t.at("bracket").at(1).get<double>();
    const double e_tol = t.value("e_tol", 1e-7);
    const double bisect_tol = t.value("bisect_tol", 1e-2);

    const dms::ThresholdScan scan =
        dms::threshold_scan(base.dav, pot, mu, {lo, hi}, e_tol, bisect_tol, base);

    const std::string csv_file =
        cfg.contains("output") ? cfg.at("output").value("csv_file", "scan.csv")
                               : std::string("scan.csv");
    auto os = open_out(outdir / csv_file);
    os << "lambda,energy,converged,iterations,omega\n";
    for (const auto& r : scan.records)
        os << r.lambda << "," << r.energy << "," << (r.converged ? 1 : 0) << "," << r.iterations
           << "," << r.omega << "\n";

    const char* status = scan.status == dms::ScanStatus::Bracketed        ? "bracketed"
                         : scan.status == dms::ScanStatus::BelowBracket ? "below_bracket"
                                                                        : "no_threshold_in_bracket";
    json out = {{"status", status},
                {"lambda_lo", scan.lambda_lo},
                {"lambda_hi", scan.lambda_hi},
                {"lambda_cr", scan.lambda_cr},
                {"csv_file", csv_file}};
    write_json(outdir / "threshold.json", out);
    std::cout << out.dump(2) << "\n";
    return scan.status == dms::ScanStatus::NoThresholdInBracket ? kExitInconclusive : kExitOk;
}

int cmd_probe(const json& cfg, const fs::path& outdir) {
    const auto pot = parse_potential(cfg);
    if (!pot.is_pure_power())
        throw ConfigError("probe needs a pure power potential (single term)");
    const auto mu = parse_measure(cfg);
    const double lambda = cfg.value("lambda", 1.0);
    const double dav = cfg.value("dav", 1.0);
    double s_hi = 1.0, s_lo = 1e-6;
    std::size_t points = 49;
    if (cfg.contains("probe")) {
        const auto& p = cfg.at("probe");
        s_hi = p.value("sigma0_hi", s_hi);
        s_lo = p.value("sigma0_lo", s_lo);
        points = p.value("points", points);
    }
    const auto rep = dms::nonexistence_probe(pot.terms().front().s, pot.terms().front().c, dav,
                                             lambda, mu, s_hi, s_lo, points);
    const std::string csv_file =
        cfg.contains("output") ? cfg.at("output").value("csv_file", "probe.csv")
                               : std::string("probe.csv");
    auto os = open_out(outdir / csv_file);
    os << "sigma0,N,H\n";
    for (const auto& r : rep.records)
        os << r.sigma0 << "," << r.n_value << "," << r.h_value << "\n";
    json out = {{"crossed_minus_1e3", rep.crossed},
                {"bounded_below_signature", rep.bounded_signature},
                {"min_H", rep.min_h},
                {"csv_file", csv_file}};
    write_json(outdir / "probe.json", out);
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_density(const json& cfg, const fs::path& outdir) {
    if (!cfg.contains("measure") || cfg.at("measure").value("kind", "") != "profile")
        throw ConfigError("density needs measure.kind == \"profile\"");
    const auto profile = parse_profile(cfg.at("measure").at("profile"));
    std::size_t samples = 101;
    if (cfg.contains("density")) samples = cfg.at("density").value("samples", samples);
    const auto mu = dms::RMeasure::pushforward(profile, 8);
    const std::string csv_file =
        cfg.contains("output") ? cfg.at("output").value("csv_file", "density.csv")
                               : std::string("density.csv");
    auto os = open_out(outdir / csv_file);
    os << "r,psi\n";
    const double lo = mu.support_lo(), hi = mu.support_hi();
    for (std::size_t i = 0; i < samples; ++i) {
        const double r = lo + (i + 0.5) * (hi - lo) / samples;
        try {
            os << r << "," << dms::density_at(profile, r) << "\n";
        } catch (const dms::DensityError&) {
            // fold point: no density value there
        }
    }
    std::cout << "wrote " << (outdir / csv_file).string() << "\n";
    return kExitOk;
}

int cmd_gaussian(const json& cfg, const fs::path& outdir) {
    const double lambda = cfg.value("lambda", 1.0);
    std::vector<double> sigmas = {1.0, 2.0, 4.0, 8.0};
    std::vector<double> rs = {0.0, 0.5, 1.0, 2.0};
    if (cfg.contains("gaussian")) {
        const auto& g = cfg.at("gaussian");
        if (g.contains("sigma0")) sigmas = g.at("sigma0").get<std::vector<double>>();
        if (g.contains("r")) rs = g.at("r").get<std::vector<double>>();
    }
    const std::string csv_file =
        cfg.contains("output") ? cfg.at("output").value("csv_file", "gaussian.csv")
                               : std::string("gaussian.csv");
    auto os = open_out(outdir / csv_file);
    os << "sigma0,r,l2_sq,grad_sq,abs_at_0,l4_norm_4\n";
    for (double s0 : sigmas) {
        const auto p = dms::GaussianParams::make(lambda, s0);
        for (double r : rs) {
            os << s0 << "," << r << "," << lambda << "," << (lambda / s0) << ","
               << std::abs(dms::gaussian_evolved(p, r, 0.0)) << ","
               << dms::gaussian_lgamma_norm(p, r, 4.0) << "\n";
        }
    }
    std::cout << "wrote " << (outdir / csv_file).string() << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& level) {
    const auto lv = level == "full" ? dms::VerifyLevel::Full : dms::VerifyLevel::Quick;
    const auto results = dms::run_verify(lv);
    std::size_t failed = 0;
    for (const auto& r : results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << std::left << std::setw(44) << r.name
                  << std::right << std::fixed << std::setprecision(2) << std::setw(8) << r.seconds
                  << "s  " << r.detail << "\n";
        if (!r.passed) ++failed;
    }
    std::cout << (failed == 0 ? "all checks passed" : "FAILED checks: ") << (failed == 0 ? "" : std::to_string(failed))
              << "\n";
    return failed == 0 ? kExitOk : kExitInconclusive;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dispersion-managed soliton variational solver"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", level = "quick";
    std::uint64_t seed = 0;
    bool has_seed = false;
    int threads = 0;

    app.add_option("--threads", threads, "worker threads (default: all cores)");
    auto* seed_opt = app.add_option("--seed", seed, "override the optimizer seed");

    auto add_config = [&](CLI::App* sub, bool required) {
        sub->fallthrough();  // let --seed/--threads appear after the subcommand
        auto* o = sub->add_option("--config", config_path, "JSON run configuration");
        if (required) o->required();
        sub->add_option("--out", out_dir, "output directory");
    };

    auto* s_min = app.add_subcommand("minimize", "constrained minimization of H");
    add_config(s_min, true);
    auto* s_thr = app.add_subcommand("threshold", "bisection scan for lambda_cr");
    add_config(s_thr, true);
    auto* s_probe = app.add_subcommand("probe", "closed-form Gaussian collapse probe");
    add_config(s_probe, true);
    auto* s_den = app.add_subcommand("density", "profile-to-density table");
    add_config(s_den, true);
    auto* s_gau = app.add_subcommand("gaussian", "closed-form Gaussian reference table");
    add_config(s_gau, false);
    auto* s_ver = app.add_subcommand("verify", "run the invariant suite");
    s_ver->fallthrough();
    s_ver->add_option("--level", level, "quick | full")
        ->check(CLI::IsMember({"quick", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitConfig : kExitOk;
    }
    has_seed = seed_opt->count() > 0;
    if (threads > 0) omp_set_num_threads(threads);

    try {
        const fs::path outdir(out_dir);
        if (!out_dir.empty()) fs::create_directories(outdir);
        if (s_ver->parsed()) return cmd_verify(level);
        json cfg = json::object();
        if (!config_path.empty()) cfg = load_config(config_path);
        if (s_min->parsed()) return cmd_minimize(cfg, outdir, seed, has_seed);
        if (s_thr->parsed()) return cmd_threshold(cfg, outdir, seed, has_seed);
        if (s_probe->parsed()) return cmd_probe(cfg, outdir);
        if (s_den->parsed()) return cmd_density(cfg, outdir);
        if (s_gau->parsed()) return cmd_gaussian(cfg, outdir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInconclusive;
    }
    return kExitConfig;
}
