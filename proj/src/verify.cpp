#include "dms/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "dms/field_io.hpp"
#include "dms/nonlinearity.hpp"
#include "dms/optimizer.hpp"
#include "dms/oracles.hpp"
#include "dms/spectral.hpp"
#include "dms/thresholds.hpp"

namespace dms {

namespace {

struct Harness {
    VerifyLevel level;
    std::vector<CheckResult> results;

    bool full() const { return level == VerifyLevel::Full; }

    void run(const std::string& name, const std::function<bool(std::ostringstream&)>& fn) {
        CheckResult r;
        r.name = name;
        std::ostringstream detail;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            r.passed = fn(detail);
        } catch (const std::exception& e) {
            r.passed = false;
            detail << "exception: " << e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.detail = detail.str();
        results.push_back(std::move(r));
    }
};

double rel_l2_diff(const Field& a, const Field& b) {
    return l2_norm(a - b) / std::max(l2_norm(b), 1e-300);
}

}  // namespace

std::vector<CheckResult> run_verify(VerifyLevel level) {
    Harness h{level, {}};
    const GridSpec grid = GridSpec::make(1024, 40.0);

    h.run("spectral.unitarity_group_law", [&](std::ostringstream& d) {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> uni(-5.0, 5.0);
        double worst_u = 0.0, worst_g = 0.0;
        const int reps = h.full() ? 40 : 12;
        for (int i = 0; i < reps; ++i) {
            const Field f = random_smooth_field(grid, 100 + i);
            const double r1 = uni(rng), r2 = uni(rng);
            worst_u = std::max(worst_u,
                               std::abs(l2_norm(propagate(f, r1)) - l2_norm(f)) / l2_norm(f));
            worst_g = std::max(
                worst_g, rel_l2_diff(propagate(propagate(f, r1), r2), propagate(f, r1 + r2)));
        }
        d << "unitarity " << worst_u << ", group law " << worst_g;
        return worst_u <= 1e-12 && worst_g <= 1e-12;
    });

    h.run("spectral.kato_bound", [&](std::ostringstream& d) {
        double worst = -1e300;
        const int reps = h.full() ? 50 : 15;
        for (int i = 0; i < reps; ++i) {
            const auto [lhs, rhs] = kato_check(random_smooth_field(grid, 300 + i));
            worst = std::max(worst, lhs - rhs * (1.0 + 1e-8));
        }
        d << "max(lhs - rhs(1+1e-8)) = " << worst;
        return worst <= 0.0;
    });

    h.run("spectral.gaussian_propagator", [&](std::ostringstream& d) {
        const std::vector<double> sig = {1.0, 2.0, 4.0, 8.0};
        const std::vector<double> rs = h.full()
                                           ? std::vector<double>{-2.0, -1.0, -0.5, -0.1, 0.1, 0.5,
                                                                 1.0, 2.0}
                                           : std::vector<double>{-2.0, 0.5};
        double worst = 0.0;
        for (double s0 : sig) {
            const auto p = GaussianParams::make(1.0, s0);
            const Field g = gaussian_field(p, grid);
            for (double r : rs) {
                const Field num = propagate(g, r);
                Field ref = Field::zeros(grid);
                for (std::size_t j = 0; j < grid.n; ++j)
                    ref.values[j] = gaussian_evolved_periodic(p, r, grid.x(j), grid.extent);
                worst = std::max(worst, rel_l2_diff(num, ref));
            }
        }
        d << "max rel L2 error " << worst;
        return worst <= 1e-9;
    });

    h.run("profiles.measure_invariants", [&](std::ostringstream& d) {
        const auto model = DispersionProfile::model();
        const auto two = DispersionProfile::make({{2.0, 1.0}, {-2.0, 1.0}});
        double worst = 0.0;
        for (const auto* p : {&model, &two}) {
            const RMeasure mu = RMeasure::pushforward(*p, 64);
            double wsum = 0.0, dmax = 0.0;
            for (double w : mu.weights()) {
                if (w < 0.0) return false;
                wsum += w;
            }
            worst = std::max(worst, std::abs(wsum - 1.0));
            for (const auto& s : p->segments()) dmax = std::max(dmax, std::abs(s.d0));
            if (mu.support_hi() - mu.support_lo() > 0.5 * p->period() * dmax + 1e-15) return false;
            // pushforward integral vs density quadrature on a fine grid
            auto F = [](double r) { return std::exp(-r) * std::cos(3.0 * r); };
            double via_mu = 0.0;
            for (std::size_t i = 0; i < mu.nodes().size(); ++i)
                via_mu += mu.weights()[i] * F(mu.nodes()[i]);
            const std::size_t m = 20000;
            double via_psi = 0.0;
            const double lo = mu.support_lo(), hi = mu.support_hi();
            const double dr = (hi - lo) / m;
            for (std::size_t i = 0; i < m; ++i) {
                const double r = lo + (i + 0.5) * dr;
                via_psi += F(r) * density_at(*p, r) * dr;
            }
            worst = std::max(worst, std::abs(via_mu - via_psi) / std::abs(via_psi));
        }
        d << "worst deviation " << worst;
        return worst <= 1e-8;
    });

    h.run("nonlinearity.homogeneity_and_a2", [&](std::ostringstream& d) {
        const RMeasure mu = RMeasure::uniform01(64);
        const Field f = gaussian_field(GaussianParams::make(1.0, 2.0), grid);
        const Potential kerr = Potential::kerr();
        const double n1 = evaluate_N(f, mu, kerr);
        double worst = 0.0;
        for (double s : {0.5, 1.3, 2.0}) {
            const double lhs = evaluate_N(s * f, mu, kerr);
            worst = std::max(worst, std::abs(lhs - std::pow(s, 4.0) * n1) /
                                        (std::pow(s, 4.0) * n1));
        }
        // A2 consequence for V = -a^4 + a^8, gamma0 = 4
        const Potential vmix = Potential::make({{-1.0, 4.0}, {1.0, 8.0}}, 4.0);
        if (!check_A2(vmix, 4.0)) return false;
        const double nm = evaluate_N(f, mu, vmix);
        bool ok = true;
        for (double rho : {1.0, 2.0, 4.0}) {
            const double lhs = evaluate_N(std::sqrt(rho) * f, mu, vmix);
            ok = ok && lhs >= std::pow(rho, 2.0) * nm - 1e-10 * (1.0 + std::abs(nm));
        }
        d << "pure-power homogeneity dev " << worst;
        return ok && worst <= 1e-12;
    });

    h.run("nonlinearity.gradient_fd", [&](std::ostringstream& d) {
        const RMeasure mu = RMeasure::uniform01(32);
        const GridSpec small = GridSpec::make(512, 40.0);
        const int reps = h.full() ? 20 : 6;
        double worst = 0.0;
        const Potential pots[] = {Potential::kerr(),
                                  Potential::make({{-1.0, 4.0}, {1.0, 8.0}}, 4.0)};
        for (const auto& pot : pots) {
            for (int i = 0; i < reps; ++i) {
                const Field f = random_smooth_field(small, 500 + i);
                const Field hdir = random_smooth_field(small, 900 + i);
                const double eps = 1e-5;
                Field fp = f, fm = f;
                axpy(eps, hdir, fp);
                axpy(-eps, hdir, fm);
                const double fd =
                    (evaluate_N(fp, mu, pot) - evaluate_N(fm, mu, pot)) / (2.0 * eps);
                const double an = inner(hdir, grad_N(f, mu, pot)).real();
                worst = std::max(worst, std::abs(fd - an) / std::max(std::abs(an), 1e-12));
            }
        }
        d << "max FD mismatch " << worst;
        return worst <= 1e-6;
    });

    h.run("nonlinearity.translation_boost_invariance", [&](std::ostringstream& d) {
        const RMeasure mu = RMeasure::uniform01(64);
        const Potential kerr = Potential::kerr();
        const Field f = gaussian_field(GaussianParams::make(1.0, 2.0), grid);
        const double n0 = evaluate_N(f, mu, kerr);
        const double y = 8.0 * grid.dx();
        const double vv = 2.0 * M_PI * 3.0 / grid.extent;
        const double n1 = evaluate_N(boost(translate(f, y), vv), mu, kerr);
        d << "rel drift " << std::abs(n1 - n0) / std::abs(n0);
        return std::abs(n1 - n0) <= 1e-9 * std::abs(n0);
    });

    h.run("nonlinearity.kernels_bitwise", [&](std::ostringstream& d) {
        const RMeasure mu = RMeasure::uniform01(48);
        const Potential kerr = Potential::kerr();
        const Field f = random_smooth_field(grid, 4242);
        const double a = evaluate_N(f, mu, kerr);
        const double b = evaluate_N_serial(f, mu, kerr);
        const Field ga = grad_N(f, mu, kerr);
        const Field gb = grad_N_serial(f, mu, kerr);
        bool same = a == b;
        for (std::size_t j = 0; j < ga.size() && same; ++j)
            same = ga.values[j] == gb.values[j];
        d << (same ? "parallel == serial bitwise" : "mismatch");
        return same;
    });

    h.run("thresholds.r_scaling_and_g_alpha", [&](std::ostringstream& d) {
        const RMeasure mu = RMeasure::uniform01(64);
        const Potential kerr = Potential::kerr();
        const Field hfield = gaussian_field(GaussianParams::make(1.0, 2.0), grid);
        const double r1 = r_value(1.0, hfield, mu, kerr);
        const double r4 = r_value(4.0, hfield, mu, kerr);
        const double dev = std::abs(r4 / r1 - 4.0) / 4.0;
        double prev = g_alpha(1.0, 1e-3);
        bool mono = true;
        for (double s = 1e-2; s <= 1e3; s *= 10.0) {
            const double cur = g_alpha(1.0, s);
            mono = mono && cur < prev;
            prev = cur;
        }
        d << "R scaling dev " << dev << ", G_alpha monotone " << mono;
        return dev <= 1e-12 && mono;
    });

    h.run("thresholds.probe_matches_grid", [&](std::ostringstream& d) {
        const RMeasure mu = RMeasure::uniform01(64);
        const Potential kerr = Potential::kerr();
        double worst = 0.0;
        for (double s0 : {0.5, 1.0, 2.0, 4.0}) {
            const double closed =
                0.5 * 1.0 / s0 - evaluate_N_gaussian_closed_form(kerr, mu, 1.0, s0);
            const Field g = gaussian_field(GaussianParams::make(1.0, s0), grid);
            const double on_grid = evaluate_H(g, 1.0, mu, kerr);
            worst = std::max(worst, std::abs(closed - on_grid) / std::abs(closed));
        }
        d << "max rel gap " << worst;
        return worst <= 1e-6;
    });

    h.run("oracles.lgamma_and_galilei", [&](std::ostringstream& d) {
        const auto p = GaussianParams::make(1.0, 2.0);
        const Field g = gaussian_field(p, grid);
        double worst = 0.0;
        for (double gam : {2.0, 3.0, 4.0, 6.0}) {
            for (double r : {0.0, 0.7}) {
                const double grid_val = std::pow(lp_norm(propagate(g, r), gam), gam);
                const double closed = gaussian_lgamma_norm(p, r, gam);
                worst = std::max(worst, std::abs(grid_val - closed) / closed);
            }
        }
        const Field f = random_smooth_field(grid, 77);
        const double y = 2.0 * grid.dx() * 5.0;
        const double vv = 2.0 * M_PI * 3.0 / grid.extent;
        const Field lhs = propagate(boost(translate(f, y), vv), 0.7);
        const Field rhs = galilei(f, y, vv, 0.7);
        const double gal = rel_l2_diff(lhs, rhs);
        d << "lgamma dev " << worst << ", galilei dev " << gal;
        return worst <= 1e-8 && gal <= 1e-10;
    });

    h.run("oracles.strichartz", [&](std::ostringstream& d) {
        const double bound = 1.0 / std::sqrt(12.0);
        const Field g = gaussian_field(GaussianParams::make(1.0, 2.0), grid);
        const auto res = strichartz_ratio(g);
        if (!res.conclusive || std::abs(res.ratio - bound) > 1e-4) {
            d << "gaussian ratio " << res.ratio;
            return false;
        }
        const int reps = h.full() ? 50 : 8;
        double worst = -1e300;
        for (int i = 0; i < reps; ++i) {
            const auto rr = strichartz_ratio(random_smooth_field(grid, 1000 + i));
            if (!rr.conclusive) continue;
            worst = std::max(worst, rr.ratio - bound);
        }
        d << "gaussian dev " << std::abs(res.ratio - bound) << ", corpus max excess " << worst;
        return worst <= 1e-6;
    });

    if (h.full()) {
        h.run("optimizer.kerr_minimizer", [&](std::ostringstream& d) {
            MinimizeConfig cfg;
            cfg.lambda = 1.0;
            cfg.dav = 1.0;
            const RMeasure mu = RMeasure::uniform01(64);
            const Potential kerr = Potential::kerr();
            const MinimizeResult res = minimize(cfg, mu, kerr);
            const double l2 = l2_norm(res.field);
            // best of the Gaussian starts, in closed form
            double gaussian_bound = 1e300;
            for (double s0 : cfg.sigma0_init)
                gaussian_bound =
                    std::min(gaussian_bound,
                             0.5 * cfg.dav * cfg.lambda / s0 -
                                 evaluate_N_gaussian_closed_form(kerr, mu, cfg.lambda, s0));
            bool mono = true;
            for (std::size_t i = 1; i < res.history.size(); ++i)
                mono = mono && res.history[i].energy <= res.history[i - 1].energy + 1e-13;
            d << "E " << res.energy << ", residual " << res.el_residual << ", omega "
              << res.omega;
            return res.converged && std::abs(l2 * l2 - 1.0) <= 1e-10 && mono &&
                   res.energy <= gaussian_bound && res.el_residual <= 1e-6 &&
                   res.omega < 2.0 * res.energy && res.omega < 0.0;
        });

        h.run("optimizer.translation_invariance", [&](std::ostringstream& d) {
            MinimizeConfig cfg;
            cfg.lambda = 1.0;
            cfg.dav = 1.0;
            cfg.sigma0_init = {2.0};
            const RMeasure mu = RMeasure::uniform01(64);
            const Potential kerr = Potential::kerr();
            const double e0 = minimize(cfg, mu, kerr).energy;
            cfg.init_shift = 64.0 * cfg.grid.dx();
            const double e1 = minimize(cfg, mu, kerr).energy;
            d << "E " << e0 << " vs shifted " << e1;
            return std::abs(e0 - e1) <= 1e-7;
        });
    }

    h.run("determinism.repeat_run", [&](std::ostringstream& d) {
        MinimizeConfig cfg;
        cfg.grid = GridSpec::make(256, 40.0);
        cfg.lambda = 1.0;
        cfg.dav = 1.0;
        cfg.sigma0_init = {2.0};
        cfg.max_iters = 40;
        cfg.seed = 5;
        const RMeasure mu = RMeasure::uniform01(32);
        const Potential kerr = Potential::kerr();
        const MinimizeResult a = minimize(cfg, mu, kerr);
        const MinimizeResult b = minimize(cfg, mu, kerr);
        bool same = a.energy == b.energy && a.iterations == b.iterations;
        for (std::size_t j = 0; j < a.field.size() && same; ++j)
            same = a.field.values[j] == b.field.values[j];
        d << (same ? "bitwise repeatable" : "runs differ");
        return same;
    });

    return h.results;
}

}  // namespace dms
