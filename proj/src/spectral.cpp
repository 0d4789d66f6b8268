#include "dms/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dms/fft.hpp"

namespace dms {

namespace {

// Apply a diagonal Fourier multiplier m(eta_k); the forward/backward pair is
// unnormalized, so divide by n at the end.
template <typename Mult>
Field apply_multiplier(const Field& f, Mult&& m) {
    const std::size_t n = f.grid.n;
    std::vector<cplx> spec(n), out(n);
    fft::forward(f.values.data(), spec.data(), n);
    for (std::size_t k = 0; k < n; ++k) spec[k] *= m(k);
    fft::backward(spec.data(), out.data(), n);
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& z : out) z *= inv;
    return Field{f.grid, std::move(out)};
}

}  // namespace

Field propagate(const Field& f, double r) {
    require_valid(f, "propagate");
    if (!std::isfinite(r)) throw std::invalid_argument("propagate: r is not finite");
    const std::size_t nyq = f.grid.nyquist_bin();
    return apply_multiplier(f, [&](std::size_t k) -> cplx {
        if (k == nyq) return 0.0;
        const double eta = f.grid.freq(k);
        return std::polar(1.0, -r * eta * eta);
    });
}

double l2_norm(const Field& f) {
    std::vector<double> sq(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) sq[j] = std::norm(f.values[j]);
    return std::sqrt(f.grid.dx() * pairwise_sum(sq));
}

double h1_seminorm(const Field& f) {
    require_valid(f, "h1_seminorm");
    const std::size_t n = f.grid.n;
    std::vector<cplx> spec(n);
    fft::forward(f.values.data(), spec.data(), n);
    std::vector<double> sq(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double eta = f.grid.freq(k);
        sq[k] = eta * eta * std::norm(spec[k]);
    }
    // dx * (1/n) * sum |eta F_k|^2 equals dx * sum_j |f'_j|^2 by Parseval.
    return std::sqrt(f.grid.dx() / static_cast<double>(n) * pairwise_sum(sq));
}

double lp_norm(const Field& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    std::vector<double> pw(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) pw[j] = std::pow(std::abs(f.values[j]), p);
    return std::pow(f.grid.dx() * pairwise_sum(pw), 1.0 / p);
}

double sup_norm(const Field& f) {
    double m = 0.0;
    for (const auto& z : f.values) m = std::max(m, std::abs(z));
    return m;
}

cplx inner(const Field& a, const Field& b) {
    if (a.grid != b.grid) throw std::invalid_argument("inner: grid mismatch");
    std::vector<cplx> prod(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) prod[j] = std::conj(a.values[j]) * b.values[j];
    return a.grid.dx() * pairwise_sum(prod);
}

Field translate(const Field& f, double y) {
    require_valid(f, "translate");
    if (y == 0.0) return f;
    const double steps = y / f.grid.dx();
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) < 1e-9) {
        // Exact circular shift: out_j = f_{j - m mod n}.
        const long n = static_cast<long>(f.grid.n);
        long m = static_cast<long>(rounded) % n;
        if (m < 0) m += n;
        Field out = Field::zeros(f.grid);
        for (long j = 0; j < n; ++j) out.values[(j + m) % n] = f.values[j];
        return out;
    }
    const std::size_t nyq = f.grid.nyquist_bin();
    return apply_multiplier(f, [&](std::size_t k) -> cplx {
        if (k == nyq) return 0.0;
        return std::polar(1.0, -y * f.grid.freq(k));
    });
}

Field boost(const Field& f, double v, bool strict) {
    require_valid(f, "boost");
    const double kf = v * f.grid.extent / (2.0 * M_PI);
    if (strict && std::abs(kf - std::round(kf)) > 1e-9)
        throw CommensurabilityError("boost: v is not a grid frequency 2*pi*k/X");
    Field out = f;
    for (std::size_t j = 0; j < f.size(); ++j)
        out.values[j] *= std::polar(1.0, v * f.grid.x(j));
    return out;
}

Field second_derivative(const Field& f) {
    require_valid(f, "second_derivative");
    return apply_multiplier(f, [&](std::size_t k) -> cplx {
        const double eta = f.grid.freq(k);
        return -eta * eta;
    });
}

Field low_pass(const Field& f, double frac) {
    require_valid(f, "low_pass");
    const double cut = frac * f.grid.freq_max();
    return apply_multiplier(f, [&](std::size_t k) -> cplx {
        return std::abs(f.grid.freq(k)) > cut ? 0.0 : 1.0;
    });
}

double boundary_mass(const Field& f) {
    const double lim = 0.4 * f.grid.extent;
    std::vector<double> sq;
    sq.reserve(f.size() / 4);
    for (std::size_t j = 0; j < f.size(); ++j)
        if (std::abs(f.grid.x(j)) > lim) sq.push_back(std::norm(f.values[j]));
    return f.grid.dx() * pairwise_sum(sq);
}

bool boundary_ok(const Field& f) {
    const double l2 = l2_norm(f);
    return boundary_mass(f) <= 1e-10 * l2 * l2;
}

Field random_smooth_field(const GridSpec& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t kcut = std::max<std::size_t>(4, g.n / 32);
    std::vector<cplx> spec(g.n, 0.0);
    for (std::size_t k = 0; k < g.n; ++k) {
        const double kk = (k < g.n / 2) ? static_cast<double>(k)
                                        : static_cast<double>(k) - static_cast<double>(g.n);
        if (std::abs(kk) > static_cast<double>(kcut)) continue;
        const double env = std::exp(-3.0 * (kk / kcut) * (kk / kcut));
        spec[k] = env * cplx(gauss(rng), gauss(rng));
    }
    std::vector<cplx> vals(g.n);
    fft::backward(spec.data(), vals.data(), g.n);
    Field f{g, std::move(vals)};
    // Quartic spatial envelope pins the boundary down far below 1e-12.
    for (std::size_t j = 0; j < g.n; ++j) {
        const double u = f.grid.x(j) / (0.16 * g.extent);
        f.values[j] *= std::exp(-u * u * u * u);
    }
    const double nrm = l2_norm(f);
    for (auto& z : f.values) z /= nrm;
    return f;
}

Field operator+(const Field& a, const Field& b) {
    if (a.grid != b.grid) throw std::invalid_argument("Field+: grid mismatch");
    Field out = a;
    for (std::size_t j = 0; j < out.size(); ++j) out.values[j] += b.values[j];
    return out;
}

Field operator-(const Field& a, const Field& b) {
    if (a.grid != b.grid) throw std::invalid_argument("Field-: grid mismatch");
    Field out = a;
    for (std::size_t j = 0; j < out.size(); ++j) out.values[j] -= b.values[j];
    return out;
}

Field operator*(double s, const Field& f) {
    Field out = f;
    for (auto& z : out.values) z *= s;
    return out;
}

Field operator*(cplx s, const Field& f) {
    Field out = f;
    for (auto& z : out.values) z *= s;
    return out;
}

void axpy(cplx alpha, const Field& x, Field& y) {
    if (x.grid != y.grid) throw std::invalid_argument("axpy: grid mismatch");
    for (std::size_t j = 0; j < y.size(); ++j) y.values[j] += alpha * x.values[j];
}

}  // namespace dms
