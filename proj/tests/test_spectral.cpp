#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <random>

#include "dms/field_io.hpp"
#include "dms/oracles.hpp"
#include "dms/spectral.hpp"

using namespace dms;

namespace {
const GridSpec kGrid = GridSpec::make(1024, 40.0);

double rel_diff(const Field& a, const Field& b) {
    return l2_norm(a - b) / l2_norm(b);
}
}  // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(GridSpec::make(7, 40.0), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec::make(100, 40.0), std::invalid_argument);  // not a power of two
    CHECK_THROWS_AS(GridSpec::make(1024, -1.0), std::invalid_argument);
    const GridSpec g = GridSpec::make(16, 8.0);
    CHECK(g.dx() == doctest::Approx(0.5));
    CHECK(g.x(0) == doctest::Approx(-4.0));
    // frequency set symmetric except the single Nyquist mode
    CHECK(g.freq(1) == doctest::Approx(-g.freq(15)));
    CHECK(g.freq(8) == doctest::Approx(-g.freq_max()));
}

TEST_CASE("propagate at r = 0 is the identity") {
    const Field f = random_smooth_field(kGrid, 1);
    CHECK(rel_diff(propagate(f, 0.0), f) <= 1e-14);
}

TEST_CASE("propagate is unitary and satisfies the group law") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-5.0, 5.0);
    for (int i = 0; i < 10; ++i) {
        const Field f = random_smooth_field(kGrid, 10 + i);
        const double r1 = uni(rng), r2 = uni(rng);
        CHECK(std::abs(l2_norm(propagate(f, r1)) - l2_norm(f)) <= 1e-12 * l2_norm(f));
        CHECK(rel_diff(propagate(propagate(f, r1), r2), propagate(f, r1 + r2)) <= 1e-12);
    }
}

TEST_CASE("propagate rejects junk") {
    Field f = random_smooth_field(kGrid, 2);
    CHECK_THROWS_AS(propagate(f, std::nan("")), std::invalid_argument);
    f.values[3] = cplx(std::numeric_limits<double>::infinity(), 0.0);
    CHECK_THROWS_AS(propagate(f, 1.0), std::invalid_argument);
}

TEST_CASE("evolved Gaussian modulus at the origin") {
    // |T_r g(0)| = A0 (sigma0/|sigma(r)|)^{1/2} with A0 = (1/pi)^{1/4},
    // |sigma(0.5)| = |2+2i| = 2 sqrt 2: 0.751126 * 0.840896 = 0.631619.
    const auto p = GaussianParams::make(1.0, 2.0);
    const Field g = gaussian_field(p, kGrid);
    const Field u = propagate(g, 0.5);
    const std::size_t j0 = kGrid.n / 2;  // x = 0
    CHECK(kGrid.x(j0) == doctest::Approx(0.0));
    const double expected = p.amplitude() * std::sqrt(2.0 / std::abs(cplx(2.0, 2.0)));
    CHECK(expected == doctest::Approx(0.6316187777460647).epsilon(1e-12));
    CHECK(std::abs(u.values[j0]) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(std::abs(std::abs(u.values[j0]) - 0.63158) <= 1e-4);
}

TEST_CASE("norms of the sigma0 = 2 Gaussian") {
    const Field g = gaussian_field(GaussianParams::make(1.0, 2.0), kGrid);
    CHECK(l2_norm(g) * l2_norm(g) == doctest::Approx(1.0).epsilon(1e-10));
    const double h1 = h1_seminorm(g);
    CHECK(h1 * h1 == doctest::Approx(0.5).epsilon(1e-8));  // lambda / Re sigma0
    CHECK(sup_norm(g) == doctest::Approx(std::pow(1.0 / M_PI, 0.25)).epsilon(1e-12));
}

TEST_CASE("zero field has zero norms") {
    const Field z = Field::zeros(kGrid);
    CHECK(l2_norm(z) == 0.0);
    CHECK(h1_seminorm(z) == 0.0);
    CHECK(lp_norm(z, 4.0) == 0.0);
    CHECK(sup_norm(z) == 0.0);
}

TEST_CASE("lp_norm rejects p < 1") {
    const Field f = random_smooth_field(kGrid, 4);
    CHECK_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
}

TEST_CASE("translate: identity, exactness, unitarity") {
    const Field f = random_smooth_field(kGrid, 5);
    CHECK(rel_diff(translate(f, 0.0), f) == 0.0);  // returns f itself
    const Field t = translate(f, 7.0 * kGrid.dx());
    CHECK(t.values[100 + 7] == f.values[100]);  // circular shift, bitwise
    CHECK(l2_norm(t) == doctest::Approx(l2_norm(f)).epsilon(1e-14));
    // non-commensurate shift is spectral but still unitary
    const Field s = translate(f, 0.3);
    CHECK(l2_norm(s) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
}

TEST_CASE("boost: unitarity and commensurability") {
    const Field f = random_smooth_field(kGrid, 6);
    const double v = 2.0 * M_PI * 5.0 / kGrid.extent;
    const Field b = boost(f, v);
    CHECK(l2_norm(b) == doctest::Approx(l2_norm(f)).epsilon(1e-14));
    CHECK_THROWS_AS(boost(f, 0.123), CommensurabilityError);
    CHECK_NOTHROW(boost(f, 0.123, false));
}

TEST_CASE("second_derivative") {
    // constant field -> 0
    Field c = Field::zeros(kGrid);
    for (auto& z : c.values) z = 2.5;
    CHECK(l2_norm(second_derivative(c)) <= 1e-12);

    // plane wave is an eigenfunction with eigenvalue -eta^2
    Field pw = Field::zeros(kGrid);
    const double eta = kGrid.freq(9);
    for (std::size_t j = 0; j < kGrid.n; ++j)
        pw.values[j] = std::polar(1.0, eta * kGrid.x(j));
    const Field d2 = second_derivative(pw);
    // roundoff floor scales with eta_max^2 / eta^2 through the multiplier
    CHECK(rel_diff(d2, -eta * eta * pw) <= 5e-12);

    // Gaussian: d2/dx2 A0 e^{-x^2/2} at 0 equals -A0 = -0.7511255...
    const Field g = gaussian_field(GaussianParams::make(1.0, 2.0), kGrid);
    const Field gpp = second_derivative(g);
    const double a0 = std::pow(1.0 / M_PI, 0.25);
    CHECK(gpp.values[kGrid.n / 2].real() == doctest::Approx(-a0).epsilon(1e-9));
}

TEST_CASE("kato inequality on smooth corpus") {
    for (int i = 0; i < 10; ++i) {
        const Field f = random_smooth_field(kGrid, 50 + i);
        const double lhs = sup_norm(f) * sup_norm(f);
        CHECK(lhs <= l2_norm(f) * h1_seminorm(f) * (1.0 + 1e-8));
    }
}

TEST_CASE("low_pass removes the top third of the spectrum") {
    const Field f = random_smooth_field(kGrid, 8);
    const Field lp = low_pass(f);
    // fields from random_smooth_field are already band-limited well below 2/3
    CHECK(rel_diff(lp, f) <= 1e-12);
}

TEST_CASE("boundary mass diagnostic") {
    const Field g = gaussian_field(GaussianParams::make(1.0, 2.0), kGrid);
    CHECK(boundary_ok(g));
    Field bad = g;
    bad.values[2] = 1.0;  // x near -X/2
    CHECK_FALSE(boundary_ok(bad));
}

TEST_CASE("DMSF round trip") {
    const Field f = random_smooth_field(kGrid, 9);
    const std::string path = "test_roundtrip.dmsf";
    write_dmsf(path, f);
    const Field g = read_dmsf(path);
    CHECK(g.grid.n == f.grid.n);
    CHECK(g.grid.extent == f.grid.extent);
    bool same = true;
    for (std::size_t j = 0; j < f.size(); ++j) same = same && f.values[j] == g.values[j];
    CHECK(same);
    std::remove(path.c_str());
    CHECK_THROWS(read_dmsf("does_not_exist.dmsf"));
}
