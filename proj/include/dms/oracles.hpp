#pragma once

#include "dms/grid.hpp"

namespace dms {

// Centered Gaussian g(x) = A0 e^{-x^2/sigma0} with A0 chosen so that
// ||g||^2 = lambda; sigma(r) = sigma0 + 4ir describes its free evolution.
struct GaussianParams {
    double lambda = 1.0;
    cplx sigma0 = 2.0;

    double amplitude() const {
        return std::pow(2.0 * sigma0.real() * lambda * lambda /
                            (M_PI * std::norm(sigma0)),
                        0.25);
    }
    cplx sigma(double r) const { return sigma0 + cplx(0.0, 4.0 * r); }

    static GaussianParams make(double lambda, cplx sigma0) {
        if (!(lambda > 0.0)) throw std::invalid_argument("GaussianParams: lambda must be > 0");
        if (!(sigma0.real() > 0.0))
            throw std::invalid_argument("GaussianParams: Re sigma0 must be > 0");
        return GaussianParams{lambda, sigma0};
    }
};

// Sampled Gaussian on the grid. Refuses grids that cannot resolve or
// contain it (dx <= sqrt(Re sigma0)/8, X >= 16*sqrt(Re sigma0 / 2)).
Field gaussian_field(const GaussianParams& p, const GridSpec& g);

// Closed-form value of (T_r g)(x). The square root (sigma0/sigma(r))^{1/2}
// uses the principal branch, which is continuous in r here because both
// sigma0 and sigma(r) stay in the right half plane.
cplx gaussian_evolved(const GaussianParams& p, double r, double x);

// Same evolution periodized onto a box of the given extent (sum over
// images); this is what a periodic propagator converges to.
cplx gaussian_evolved_periodic(const GaussianParams& p, double r, double x, double extent,
                               int images = 3);

// ||T_r g||_{L^gamma}^gamma in closed form.
double gaussian_lgamma_norm(const GaussianParams& p, double r, double gamma);

// Right-hand side of the Galilei identity:
//   T_r (boost_v translate_y f)(x) = e^{-i r v^2} e^{i v x} (T_r f)(x - y - 2 r v),
// assembled from propagate + shifts. y, v must be grid-commensurate.
Field galilei(const Field& f, double y, double v, double r);

// Space-time ratio  (integral over r of ||T_r f||_6^6) / ||f||^6.
// Bounded by 12^{-1/2}, with equality exactly for Gaussians. The r-range is
// limited to where the periodic box is still faithful; beyond that the tail
// is added analytically (a Lorentzian a/(b^2+16 r^2) with a = 4||fhat||_6^6
// pinned by the dispersive decay and b fitted at the cut; exact for
// Gaussians).
struct StrichartzResult {
    double ratio = 0.0;
    double r_cut = 0.0;      // where quadrature stopped
    double tail = 0.0;       // analytic tail added
    bool conclusive = true;  // false when the box was too small to start
};
StrichartzResult strichartz_ratio(const Field& f, double r_truncation = 0.0);

// (||f||_inf^2, ||f|| * ||f'||); the first never exceeds the second.
std::pair<double, double> kato_check(const Field& f);

}  // namespace dms
