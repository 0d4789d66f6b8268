#pragma once

#include <vector>

#include "dms/nonlinearity.hpp"
#include "dms/oracles.hpp"

namespace dms {

// H(f) = dav/2 ||f'||^2 - N(f)
double evaluate_H(const Field& f, double dav, const RMeasure& mu, const Potential& pot);

// grad so that D_h H = Re<h, grad>: -dav f'' - grad_N(f)
Field grad_H(const Field& f, double dav, const RMeasure& mu, const Potential& pot);

// omega = Re<f, grad_H(f)> / lambda
double lagrange_multiplier(const Field& f, double dav, const RMeasure& mu, const Potential& pot);

// || omega f + dav f'' + grad_N(f) ||_2 / ||f||_2
double el_residual(const Field& f, double omega, double dav, const RMeasure& mu,
                   const Potential& pot);

struct MinimizeConfig {
    GridSpec grid = GridSpec::make(1024, 40.0);
    double lambda = 1.0;
    double dav = 1.0;
    std::size_t max_iters = 2000;
    double grad_tol = 1e-8;
    std::vector<double> sigma0_init = {1.0, 2.0, 4.0, 8.0};
    std::size_t gauge_fix_every = 50;
    std::uint64_t seed = 0;
    double backtrack = 0.5;
    double sufficient_decrease = 1e-4;
    double init_shift = 0.0;  // translate the initial Gaussians (testing hook)

    void validate() const;
};

struct HistoryEntry {
    std::size_t iter;
    double energy;
    double grad_norm;
};

struct RestartRecord {
    double sigma0 = 0.0;
    double energy = 0.0;
    bool converged = false;
    bool diverged = false;
    bool escaped = false;  // flow left the box's validity window
    std::size_t iterations = 0;
};

struct MinimizeResult {
    Field field;
    double energy = 0.0;
    double omega = 0.0;
    double el_residual = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    bool unbounded = false;    // divergence sentinel tripped (H < -1e12)
    bool a2_warning = false;   // potential failed check_A2 for its gamma0
    std::vector<HistoryEntry> history;     // best run
    std::vector<RestartRecord> restarts;   // one per sigma0 start
};

// Projected gradient descent on the sphere ||f||^2 = lambda, multi-start
// over Gaussians g_{sigma0}, Barzilai-Borwein step with backtracking,
// periodic gauge fixing (recenter; boost gauge when dav = 0; low-pass).
MinimizeResult minimize(const MinimizeConfig& cfg, const RMeasure& mu, const Potential& pot);

}  // namespace dms
