#pragma once

#include "dms/optimizer.hpp"

namespace dms {

// R(lambda, h) = N(sqrt(lambda) h) / (lambda ||h'||^2), for ||h|| = 1.
// The sign of E^dav_lambda is decided by whether this can exceed dav/2.
double r_value(double lambda, const Field& h, const RMeasure& mu, const Potential& pot);

struct ScanRecord {
    double lambda = 0.0;
    double energy = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    double omega = 0.0;
};

enum class ScanStatus {
    Bracketed,          // lambda_cr isolated inside the bracket
    BelowBracket,       // E < -E_tol already at lambda_lo: lambda_cr <= lambda_lo
    NoThresholdInBracket
};

struct ThresholdScan {
    double dav = 0.0;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    double lambda_cr = 0.0;  // estimate (upper end of the final bracket)
    ScanStatus status = ScanStatus::Bracketed;
    std::vector<ScanRecord> records;  // every minimize call, ascending lambda
};

// Bisect on the predicate E_est(lambda) < -E_tol. E_est values are upper
// bounds for the infimum, so E >= -E_tol is read as "E = 0 here".
ThresholdScan threshold_scan(double dav, const Potential& pot, const RMeasure& mu,
                             std::pair<double, double> lambda_bracket, double e_tol = 1e-7,
                             double bisect_tol = 1e-2, MinimizeConfig base = {});

struct ScalingReport {
    double lhs = 0.0;           // H(rho^{1/2} f)
    double rhs = 0.0;           // rho^{gamma0/2} H(f)
    double n_lhs = 0.0;         // N(rho^{1/2} f)
    double n_rhs = 0.0;         // rho^{gamma0/2} N(f)
    double margin = 0.0;        // rhs - lhs
    bool n_condition = false;   // N(rho^{1/2} f) >= rho^{gamma0/2} N(f)
    bool holds = false;
};

// Pointwise form of the energy scaling inequality: H(rho^{1/2} f) <=
// rho^{gamma0/2} H(f) whenever the N-side lower bound holds (rho >= 1).
ScalingReport scaling_check(const Field& f, double rho, double gamma0, double dav,
                            const RMeasure& mu, const Potential& pot);

struct SubadditivityReport {
    double e_lambda = 0.0;
    double e_lambda1 = 0.0;
    double e_lambda2 = 0.0;
    double factor = 0.0;   // 1 - (2^{gamma0/2} - 2) (delta/lambda)^{gamma0/2}
    double margin = 0.0;   // (E1 + E2) - factor * E_lambda
    bool conclusive = false;  // all three minimizations converged
    bool holds = false;       // margin >= -1e-2 * |E_lambda| (soft)
};

SubadditivityReport subadditivity_check(double lambda, double lambda1, double lambda2,
                                        double delta, double gamma0, double dav,
                                        const RMeasure& mu, const Potential& pot,
                                        MinimizeConfig base = {});

struct ProbeRecord {
    double sigma0 = 0.0;
    double n_value = 0.0;
    double h_value = 0.0;
};

struct ProbeReport {
    std::vector<ProbeRecord> records;  // sigma0 descending
    double min_h = 0.0;
    bool crossed = false;         // H < -1e3 somewhere on the schedule
    bool bounded_signature = false;  // sequence bottoms out (min is interior)
};

// Gaussian collapse probe, entirely in closed form (no grid): evaluates
// H(g_{sigma0}) along a geometric sigma0 schedule.
ProbeReport nonexistence_probe(double gamma, double c, double dav, double lambda,
                               const RMeasure& mu, double sigma0_hi = 1.0,
                               double sigma0_lo = 1e-6, std::size_t points = 49);

// Least-squares slope of log|H| vs log sigma0 over records with
// sigma0 in [lo, hi].
double fit_log_slope(const std::vector<ProbeRecord>& records, double lo, double hi);

struct CsReport {
    double lhs = 0.0;      // int_0^s int |T_r f_delta|^6
    double rhs = 0.0;      // int_0^{delta^2 s} int |T_r f|^6
    double rel_error = 0.0;
    bool conclusive = true;  // false when rescaling would alias
};

// Space-time scaling identity behind the s-independence of C_s(lambda):
// f_delta(x) = delta^{1/2} f(delta x), resampled spectrally.
CsReport cs_invariance_check(const Field& f, double s, double delta);

// G_alpha(s) = [(s+1)^{2 alpha/(1+2 alpha)} - 1]^{-1/2}; +inf for s <= 0.
double g_alpha(double alpha, double s);

}  // namespace dms
