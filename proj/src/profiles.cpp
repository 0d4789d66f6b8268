#include "dms/profiles.hpp"

#include <algorithm>
#include <cmath>

#include "dms/quadrature.hpp"

namespace dms {

DispersionProfile DispersionProfile::make(std::vector<ProfileSegment> segments) {
    if (segments.empty())
        throw std::invalid_argument("DispersionProfile: need at least one segment");
    double period = 0.0, mean = 0.0, dmax = 0.0;
    for (const auto& s : segments) {
        if (!(s.len > 0.0) || !std::isfinite(s.len) || !std::isfinite(s.d0))
            throw std::invalid_argument("DispersionProfile: segment lengths must be positive");
        period += s.len;
        mean += s.d0 * s.len;
        dmax = std::max(dmax, std::abs(s.d0));
    }
    if (std::abs(mean) > 1e-12 * period * std::max(dmax, 1.0))
        throw std::invalid_argument("DispersionProfile: d0 must have zero mean over the period");
    DispersionProfile p;
    p.segs_ = std::move(segments);
    p.period_ = period;
    return p;
}

DispersionProfile DispersionProfile::model() {
    return make({{1.0, 1.0}, {-1.0, 1.0}});
}

bool DispersionProfile::degenerate() const {
    return std::any_of(segs_.begin(), segs_.end(), [](const auto& s) { return s.d0 == 0.0; });
}

double accumulate_D(const DispersionProfile& p, double t) {
    if (!(t >= 0.0) || t > p.period() * (1.0 + 1e-12))
        throw std::out_of_range("accumulate_D: t outside [0, L]");
    double acc = 0.0, pos = 0.0;
    for (const auto& s : p.segments()) {
        if (t <= pos + s.len) return acc + s.d0 * (t - pos);
        acc += s.d0 * s.len;
        pos += s.len;
    }
    return acc;  // t == L up to roundoff; mean zero makes this 0
}

namespace {

std::vector<RInterval> profile_intervals(const DispersionProfile& p) {
    std::vector<RInterval> out;
    double acc = 0.0;
    for (const auto& s : p.segments()) {
        const double u0 = acc, u1 = acc + s.d0 * s.len;
        acc = u1;
        if (s.d0 == 0.0) continue;  // flat piece: mu picks up an atom; flagged degenerate
        out.push_back({std::min(u0, u1), std::max(u0, u1), 1.0 / (p.period() * std::abs(s.d0))});
    }
    return out;
}

}  // namespace

void RMeasure::realize(std::size_t m) {
    nodes_.clear();
    weights_.clear();
    for (const auto& iv : intervals_) {
        auto [x, w] = gauss_legendre(m, iv.u_lo, iv.u_hi);
        for (std::size_t i = 0; i < m; ++i) {
            nodes_.push_back(x[i]);
            weights_.push_back(w[i] * iv.coeff);
        }
    }
    m_ = m;
}

void RMeasure::validate() const {
    double total = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (weights_[i] < 0.0) throw std::invalid_argument("RMeasure: negative weight");
        if (nodes_[i] < r_lo_ - 1e-12 || nodes_[i] > r_hi_ + 1e-12)
            throw std::invalid_argument("RMeasure: node outside support");
        total += weights_[i];
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("RMeasure: weights must sum to 1");
}

RMeasure RMeasure::pushforward(const DispersionProfile& p, std::size_t m_per_segment) {
    if (m_per_segment < 2) throw std::invalid_argument("pushforward: need m >= 2 per segment");
    RMeasure mu;
    mu.kind_ = Kind::Pushforward;
    mu.intervals_ = profile_intervals(p);
    if (mu.intervals_.empty()) throw std::invalid_argument("pushforward: degenerate profile");
    // Support corners are exactly the extrema of the piecewise-linear D.
    mu.r_lo_ = mu.intervals_.front().u_lo;
    mu.r_hi_ = mu.intervals_.front().u_hi;
    for (const auto& iv : mu.intervals_) {
        mu.r_lo_ = std::min(mu.r_lo_, iv.u_lo);
        mu.r_hi_ = std::max(mu.r_hi_, iv.u_hi);
    }
    mu.realize(m_per_segment);
    mu.validate();
    return mu;
}

RMeasure RMeasure::uniform01(std::size_t m) {
    if (m < 2) throw std::invalid_argument("uniform01: need m >= 2");
    RMeasure mu;
    mu.kind_ = Kind::Uniform01;
    mu.intervals_ = {{0.0, 1.0, 1.0}};
    mu.r_lo_ = 0.0;
    mu.r_hi_ = 1.0;
    mu.realize(m);
    mu.validate();
    return mu;
}

RMeasure RMeasure::from_nodes(std::vector<double> nodes, std::vector<double> weights) {
    if (nodes.empty() || nodes.size() != weights.size())
        throw std::invalid_argument("RMeasure: nodes/weights size mismatch");
    RMeasure mu;
    mu.kind_ = Kind::Explicit;
    mu.nodes_ = std::move(nodes);
    mu.weights_ = std::move(weights);
    mu.r_lo_ = *std::min_element(mu.nodes_.begin(), mu.nodes_.end());
    mu.r_hi_ = *std::max_element(mu.nodes_.begin(), mu.nodes_.end());
    mu.m_ = mu.nodes_.size();
    mu.validate();
    return mu;
}

RMeasure RMeasure::refined(std::size_t m_per_segment) const {
    if (!refinable()) throw std::invalid_argument("RMeasure: explicit measures cannot refine");
    RMeasure mu = *this;
    mu.realize(m_per_segment);
    mu.validate();
    return mu;
}

double density_at(const DispersionProfile& p, double r) {
    if (p.degenerate())
        throw DensityError("density_at: profile has a d0 = 0 segment, density undefined");
    double acc = 0.0, lo = 0.0, hi = 0.0;
    std::vector<double> corners{0.0};
    for (const auto& s : p.segments()) {
        acc += s.d0 * s.len;
        corners.push_back(acc);
        lo = std::min(lo, acc);
        hi = std::max(hi, acc);
    }
    if (r < lo || r > hi) throw DensityError("density_at: r outside the support of mu");
    const double tol = 1e-12 * std::max(1.0, hi - lo);
    for (double c : corners)
        if (std::abs(r - c) <= tol)
            throw DensityError("density_at: r is a fold point of D, density undefined");

    double psi = 0.0;
    double u0 = 0.0;
    for (const auto& s : p.segments()) {
        const double u1 = u0 + s.d0 * s.len;
        if ((r > std::min(u0, u1)) && (r < std::max(u0, u1)))
            psi += 1.0 / (p.period() * std::abs(s.d0));
        u0 = u1;
    }
    return psi;
}

namespace {

// Density without the fold-point guard; jump values at segment corners do
// not matter under an integral.
double density_unchecked(const DispersionProfile& p, double r) {
    double psi = 0.0, u0 = 0.0;
    for (const auto& s : p.segments()) {
        const double u1 = u0 + s.d0 * s.len;
        if ((r > std::min(u0, u1)) && (r < std::max(u0, u1)))
            psi += 1.0 / (p.period() * std::abs(s.d0));
        u0 = u1;
    }
    return psi;
}

}  // namespace

double density_lp_norm(const DispersionProfile& p, double pexp, std::size_t m) {
    if (!(pexp >= 1.0)) throw std::invalid_argument("density_lp_norm: p must be >= 1");
    if (p.degenerate()) throw DensityError("density_lp_norm: degenerate profile");
    if (pexp == 1.0) return 1.0;  // probability density
    double acc = 0.0;
    double pos = 0.0;
    for (const auto& s : p.segments()) {
        auto [x, w] = gauss_legendre(m, pos, pos + s.len);
        for (std::size_t i = 0; i < m; ++i) {
            const double u = accumulate_D(p, x[i]);
            acc += w[i] * std::pow(density_unchecked(p, u), pexp - 1.0);
        }
        pos += s.len;
    }
    return std::pow(acc / p.period(), 1.0 / pexp);
}

}  // namespace dms
