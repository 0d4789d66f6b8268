#pragma once

#include <optional>
#include <vector>

#include "dms/grid.hpp"
#include "dms/profiles.hpp"

namespace dms {

// Signed sum of powers V(a) = sum_j c_j a^{s_j}, all s_j > 2 and strictly
// increasing; V(0) = 0 by construction. gamma1/gamma2 are the extreme
// exponents; gamma0 (growth exponent) and kappa0 (small-a exponent) are
// caller-provided metadata for the assumption checks.
struct PowerTerm {
    double c = 0.0;
    double s = 0.0;
};

class Potential {
  public:
    static Potential make(std::vector<PowerTerm> terms, std::optional<double> gamma0 = {},
                          std::optional<double> kappa0 = {});
    static Potential kerr() { return make({{1.0, 4.0}}, 4.0, 4.0); }
    static Potential pure_power(double c, double s) { return make({{c, s}}, s, s); }

    const std::vector<PowerTerm>& terms() const { return terms_; }
    double gamma1() const { return terms_.front().s; }
    double gamma2() const { return terms_.back().s; }
    std::optional<double> gamma0() const { return gamma0_; }
    std::optional<double> kappa0() const { return kappa0_; }
    bool is_pure_power() const { return terms_.size() == 1; }

  private:
    std::vector<PowerTerm> terms_;
    std::optional<double> gamma0_, kappa0_;
};

double v(const Potential& pot, double a);
double v_prime(const Potential& pot, double a);

// A2: V'(a) a >= gamma0 V(a) on a log-spaced sample set
// (default 1e-6..1e3, 1000 points).
bool check_A2(const Potential& pot, double gamma0, const std::vector<double>& a_samples = {});

// Growth form of A2: V(t a) >= t^{gamma0} V(a) for t >= 1.
bool check_homogeneity_lower(const Potential& pot, double gamma0,
                             const std::vector<double>& t_samples = {},
                             const std::vector<double>& a_samples = {});

// N(f) = sum_i w_i * dx * sum_j V(|T_{r_i} f (x_j)|).
//
// evaluate_N runs the quadrature nodes under OpenMP; evaluate_N_serial is
// the plain reference loop. Both feed per-node partials through the same
// index-ascending pairwise reduction, so they agree bitwise and the result
// does not depend on the thread count.
double evaluate_N(const Field& f, const RMeasure& mu, const Potential& pot);
double evaluate_N_serial(const Field& f, const RMeasure& mu, const Potential& pot);

// Doubles the measure's node count until N moves by < 1e-10 relative
// (cap 1024 per segment). Falls back to a single evaluation for explicit
// node measures.
double evaluate_N_adaptive(const Field& f, const RMeasure& mu, const Potential& pot);

// g = int T_r^{-1}[ V'(|T_r f|) sgn(T_r f) ] psi dr, so that the directional
// derivative of N at f in direction h is Re<h, g>; sgn(0) = 0.
Field grad_N(const Field& f, const RMeasure& mu, const Potential& pot);
Field grad_N_serial(const Field& f, const RMeasure& mu, const Potential& pot);

// N(g_{sigma0}) for a pure power V = c a^gamma in closed form: the grid
// never enters, only a 1-D integral against the measure, evaluated through
// the measure's interval decomposition so that arbitrarily small sigma0
// stays accurate.
double evaluate_N_gaussian_closed_form(const Potential& pot, const RMeasure& mu, double lambda,
                                       double sigma0);

}  // namespace dms
