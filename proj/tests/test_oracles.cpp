#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dms/oracles.hpp"
#include "dms/spectral.hpp"

using namespace dms;

namespace {
const GridSpec kGrid = GridSpec::make(1024, 40.0);

double rel_diff(const Field& a, const Field& b) {
    return l2_norm(a - b) / l2_norm(b);
}
}  // namespace

TEST_CASE("gaussian_field basics") {
    const auto p = GaussianParams::make(1.0, 2.0);
    const Field g = gaussian_field(p, kGrid);
    CHECK(g.values[kGrid.n / 2].real() ==
          doctest::Approx(std::pow(1.0 / M_PI, 0.25)).epsilon(1e-12));
    CHECK(l2_norm(g) * l2_norm(g) == doctest::Approx(1.0).epsilon(1e-10));
    // real sigma0: even symmetry g(-x) = g(x)
    for (std::size_t j = 1; j < 20; ++j)
        CHECK(g.values[kGrid.n / 2 + j] == g.values[kGrid.n / 2 - j]);
    CHECK_THROWS_AS(GaussianParams::make(-1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(GaussianParams::make(1.0, cplx(-2.0, 0.0)), std::invalid_argument);
}

TEST_CASE("gaussian_field resolution guard") {
    // too coarse: dx > sqrt(sigma0)/8
    CHECK_THROWS_AS(gaussian_field(GaussianParams::make(1.0, 0.01), kGrid), ResolutionError);
    // too small a box
    CHECK_THROWS_AS(gaussian_field(GaussianParams::make(1.0, 2.0), GridSpec::make(256, 8.0)),
                    ResolutionError);
    // sigma0 = 8 on X = 40 must fit (16 standard deviations = 32)
    CHECK_NOTHROW(gaussian_field(GaussianParams::make(1.0, 8.0), kGrid));
}

TEST_CASE("gaussian_evolved reduces to the field at r = 0") {
    const auto p = GaussianParams::make(1.0, 2.0);
    const Field g = gaussian_field(p, kGrid);
    for (std::size_t j = 0; j < kGrid.n; j += 97)
        CHECK(std::abs(gaussian_evolved(p, 0.0, kGrid.x(j)) - g.values[j]) <= 1e-12);
}

TEST_CASE("gaussian_evolved unitarity via fine Riemann sum") {
    const auto p = GaussianParams::make(1.0, 2.0);
    const double r = 0.9;
    const std::size_t m = 100000;
    const double a = -60.0, b = 60.0, h = (b - a) / m;
    double mass = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        mass += std::norm(gaussian_evolved(p, r, a + (i + 0.5) * h)) * h;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("propagator matches the periodized closed form") {
    double worst = 0.0;
    for (double s0 : {1.0, 2.0, 4.0, 8.0}) {
        const auto p = GaussianParams::make(1.0, s0);
        const Field g = gaussian_field(p, kGrid);
        for (double r : {-2.0, -1.0, -0.5, -0.1, 0.1, 0.5, 1.0, 2.0}) {
            const Field num = propagate(g, r);
            Field ref = Field::zeros(kGrid);
            for (std::size_t j = 0; j < kGrid.n; ++j)
                ref.values[j] = gaussian_evolved_periodic(p, r, kGrid.x(j), kGrid.extent);
            worst = std::max(worst, rel_diff(num, ref));
        }
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("complex sigma0 (chirped) propagates consistently too") {
    const auto p = GaussianParams::make(1.0, cplx(2.0, 1.0));
    const Field g = gaussian_field(p, kGrid);
    CHECK(l2_norm(g) * l2_norm(g) == doctest::Approx(1.0).epsilon(1e-10));
    const Field num = propagate(g, 0.7);
    Field ref = Field::zeros(kGrid);
    for (std::size_t j = 0; j < kGrid.n; ++j)
        ref.values[j] = gaussian_evolved_periodic(p, 0.7, kGrid.x(j), kGrid.extent);
    CHECK(rel_diff(num, ref) <= 1e-9);
}

TEST_CASE("closed-form L^gamma norms against the grid") {
    const auto p = GaussianParams::make(1.0, 2.0);
    const Field g = gaussian_field(p, kGrid);
    // gamma = 2 gives exactly lambda (norm conservation)
    CHECK(gaussian_lgamma_norm(p, 1.3, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
    // gamma = 4, r = 0: 1/sqrt(2 pi)
    CHECK(gaussian_lgamma_norm(p, 0.0, 4.0) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-14));
    for (double gam : {2.0, 3.0, 4.0, 6.0}) {
        for (double r : {0.0, 0.5, 1.5}) {
            const double grid_val = std::pow(lp_norm(propagate(g, r), gam), gam);
            CHECK(grid_val == doctest::Approx(gaussian_lgamma_norm(p, r, gam)).epsilon(1e-8));
        }
    }
    CHECK_THROWS_AS(gaussian_lgamma_norm(p, 0.0, 0.5), std::domain_error);
}

TEST_CASE("galilei identity, two paths") {
    const double y = 2.0 * kGrid.dx() * 7.0;
    const double v = 2.0 * M_PI * 3.0 / kGrid.extent;
    SUBCASE("v = 0 reduces to translate-then-propagate") {
        const Field f = random_smooth_field(kGrid, 21);
        CHECK(rel_diff(propagate(translate(f, y), 0.4), galilei(f, y, 0.0, 0.4)) <= 1e-12);
    }
    SUBCASE("r = 0, y = 0 reduces to boost") {
        const Field f = random_smooth_field(kGrid, 22);
        CHECK(rel_diff(boost(f, v), galilei(f, 0.0, v, 0.0)) <= 1e-12);
    }
    SUBCASE("generic parameters") {
        const Field g = gaussian_field(GaussianParams::make(1.0, 2.0), kGrid);
        const Field lhs = propagate(boost(translate(g, y), v), 0.7);
        CHECK(rel_diff(lhs, galilei(g, y, v, 0.7)) <= 1e-10);
    }
}

TEST_CASE("strichartz ratio: Gaussians saturate the bound") {
    const double bound = 1.0 / std::sqrt(12.0);
    for (double s0 : {1.0, 2.0, 4.0}) {
        const auto res = strichartz_ratio(gaussian_field(GaussianParams::make(1.0, s0), kGrid));
        CHECK(res.conclusive);
        CHECK(res.ratio == doctest::Approx(bound).epsilon(3e-4));
    }
}

TEST_CASE("strichartz ratio: scale invariance and separated bumps") {
    const Field g = gaussian_field(GaussianParams::make(1.0, 2.0), kGrid);
    const auto r1 = strichartz_ratio(g);
    const auto r2 = strichartz_ratio(3.0 * g);
    CHECK(r1.ratio == doctest::Approx(r2.ratio).epsilon(1e-12));

    // two far-separated equal-mass bumps are strictly away from the bound
    Field two = translate(g, -10.0) + translate(g, 10.0);
    const double nrm = l2_norm(two);
    for (auto& z : two.values) z /= nrm;
    const auto rr = strichartz_ratio(two);
    CHECK(rr.conclusive);
    CHECK(rr.ratio < 1.0 / std::sqrt(12.0) - 1e-3);
}

TEST_CASE("strichartz bound on a random smooth corpus") {
    const double bound = 1.0 / std::sqrt(12.0);
    for (int i = 0; i < 12; ++i) {
        const auto res = strichartz_ratio(random_smooth_field(kGrid, 2000 + i));
        CHECK(res.conclusive);
        CHECK(res.ratio <= bound + 1e-6);
    }
}

TEST_CASE("kato_check values for the sigma0 = 2 Gaussian") {
    const Field g = gaussian_field(GaussianParams::make(1.0, 2.0), kGrid);
    const auto [lhs, rhs] = kato_check(g);
    CHECK(lhs == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-10));
    CHECK(rhs == doctest::Approx(std::sqrt(0.5)).epsilon(1e-8));
    CHECK(lhs <= rhs * (1.0 + 1e-8));
    const auto [zl, zr] = kato_check(Field::zeros(kGrid));
    CHECK(zl == 0.0);
    CHECK(zr == 0.0);
}

TEST_CASE("oracle checks detect a sign-flipped propagator") {
    // Mutation sensitivity: feeding T_{-r} where T_r belongs must blow past
    // the oracle tolerances by many orders of magnitude.
    const auto p = GaussianParams::make(1.0, 2.0);
    const Field g = gaussian_field(p, kGrid);
    const double r = 0.7;
    Field ref = Field::zeros(kGrid);
    for (std::size_t j = 0; j < kGrid.n; ++j)
        ref.values[j] = gaussian_evolved_periodic(p, r, kGrid.x(j), kGrid.extent);
    CHECK(rel_diff(propagate(g, -r), ref) > 1e-2);

    const Field f = random_smooth_field(kGrid, 55);
    const double y = 4.0 * kGrid.dx(), v = 2.0 * M_PI * 2.0 / kGrid.extent;
    const Field broken = propagate(boost(translate(f, y), v), -r);
    CHECK(rel_diff(broken, galilei(f, y, v, r)) > 1e-2);
}

TEST_CASE("kato_check on a sech profile") {
    Field f = Field::zeros(kGrid);
    for (std::size_t j = 0; j < kGrid.n; ++j)
        f.values[j] = 1.0 / std::cosh(kGrid.x(j));
    const auto [lhs, rhs] = kato_check(f);
    CHECK(lhs < rhs);  // holds with slack
}
