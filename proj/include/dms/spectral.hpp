#pragma once

#include "dms/grid.hpp"

namespace dms {

// Free-Schroedinger propagator T_r: inverse transform of e^{-i*r*eta^2} fhat.
// Exactly unitary in the discrete l2 norm. The Nyquist bin is zeroed so
// real-initialized data keeps Hermitian symmetry.
Field propagate(const Field& f, double r);

double l2_norm(const Field& f);
double h1_seminorm(const Field& f);  // ||f'|| via spectral multiplier i*eta
double lp_norm(const Field& f, double p);
double sup_norm(const Field& f);

// <a,b> = dx * sum conj(a_j) b_j
cplx inner(const Field& a, const Field& b);

// f(. - y). Exact circular shift when y is a multiple of dx, spectral phase
// shift otherwise.
Field translate(const Field& f, double y);

// e^{i*v*x} f(x). v must be a grid frequency 2*pi*k/X when strict.
Field boost(const Field& f, double v, bool strict = true);

Field second_derivative(const Field& f);

// Zero all modes with |eta| > frac * eta_max.
Field low_pass(const Field& f, double frac = 2.0 / 3.0);

// dx * sum over |x_j| > 0.4*X of |f_j|^2; the box is considered valid for a
// field of power lambda while this stays below 1e-10 * lambda.
double boundary_mass(const Field& f);
bool boundary_ok(const Field& f);

// Band-limited, boundary-decayed random field with unit l2 norm.
// Deterministic in (grid, seed).
Field random_smooth_field(const GridSpec& g, std::uint64_t seed);

// Elementwise helpers (value semantics).
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& f);
Field operator*(cplx s, const Field& f);
void axpy(cplx alpha, const Field& x, Field& y);  // y += alpha * x

}  // namespace dms
