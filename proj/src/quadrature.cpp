#include "dms/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace dms {

namespace {

// Newton iteration on P_m with the Chebyshev-like initial guess; standard
// construction, accurate to machine precision for the orders used here.
std::pair<std::vector<double>, std::vector<double>> build(std::size_t m) {
    if (m == 0) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    std::vector<double> x(m), w(m);
    const std::size_t half = (m + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = m * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[m - 1 - i] = w[i];
    }
    return {x, w};
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t m) {
    static std::mutex mtx;
    static std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::scoped_lock lock(mtx);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, build(m)).first;
    return it->second;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t m, double a,
                                                                   double b) {
    auto [x, w] = gauss_legendre(m);
    const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = mid + hw * x[i];
        w[i] *= hw;
    }
    return {x, w};
}

}  // namespace dms
