#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dms/grid.hpp"

namespace dms {

struct DensityError : std::domain_error {
    using std::domain_error::domain_error;
};

// Piecewise-constant, mean-zero local dispersion d0 on a period [0, L].
struct ProfileSegment {
    double d0 = 0.0;
    double len = 0.0;
};

class DispersionProfile {
  public:
    static DispersionProfile make(std::vector<ProfileSegment> segments);

    // d0 = 1 on [0,1), -1 on [1,2): the standard two-fiber cell.
    static DispersionProfile model();

    const std::vector<ProfileSegment>& segments() const { return segs_; }
    double period() const { return period_; }

    // Any segment with d0 == 0 makes the pushforward measure singular.
    bool degenerate() const;

  private:
    std::vector<ProfileSegment> segs_;
    double period_ = 0.0;
};

// D(t) = integral of d0 from 0 to t; exact piecewise-linear accumulation,
// D(0) = D(L) = 0. t outside [0, L] is a range error.
double accumulate_D(const DispersionProfile& p, double t);

// One monotone piece of D: on [s_lo, s_hi] the map s -> D(s) covers
// [u_lo, u_hi] with slope d0, so  integral F dmu  picks up
// coeff * integral_{u_lo}^{u_hi} F(u) du  with coeff = 1/(L |d0|).
struct RInterval {
    double u_lo = 0.0;
    double u_hi = 0.0;
    double coeff = 0.0;
};

// Quadrature representation of the probability measure mu (equivalently the
// density psi). Carries realized nodes/weights plus, when available, the
// interval decomposition that generated them, which allows refinement and
// exact treatment of integrands that are sharply peaked near r = 0.
class RMeasure {
  public:
    enum class Kind { Pushforward, DensityQuadrature, Uniform01, Explicit };

    // Gauss-Legendre nodes s_i per segment mapped through D; weights sum to 1.
    static RMeasure pushforward(const DispersionProfile& p, std::size_t m_per_segment);

    // psi = 1 on [0,1] with m Gauss-Legendre nodes.
    static RMeasure uniform01(std::size_t m);

    static RMeasure from_nodes(std::vector<double> nodes, std::vector<double> weights);

    Kind kind() const { return kind_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    double support_lo() const { return r_lo_; }
    double support_hi() const { return r_hi_; }
    std::size_t nodes_per_segment() const { return m_; }

    // Empty for Explicit measures.
    const std::vector<RInterval>& intervals() const { return intervals_; }
    bool refinable() const { return !intervals_.empty(); }

    // Same measure realized with a different node count per segment.
    RMeasure refined(std::size_t m_per_segment) const;

  private:
    Kind kind_ = Kind::Explicit;
    std::vector<double> nodes_, weights_;
    std::vector<RInterval> intervals_;
    double r_lo_ = 0.0, r_hi_ = 0.0;
    std::size_t m_ = 0;

    void realize(std::size_t m);
    void validate() const;
};

// psi(r) = (1/L) sum over pre-images s of r of |d0(s)|^{-1}  (all d0 != 0).
// r at a fold point (a corner value of D) or outside the support is a
// DensityError.
double density_at(const DispersionProfile& p, double r);

// ||psi||_{L^p} computed by change of variables back to s, never sampling
// psi near its singularities:  ||psi||_p^p = (1/L) int_0^L psi(D(s))^{p-1} ds.
double density_lp_norm(const DispersionProfile& p, double pexp, std::size_t m = 64);

}  // namespace dms
