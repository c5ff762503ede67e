#include <cmath>
#include <vector>

#include <doctest.h>

#include "latlab/errors.hpp"
#include "latlab/window.hpp"
#include "test_support.hpp"

using namespace latlab;
using latlab::testing::random_window;

TEST_CASE("inner product with zero-extension") {
    LatticeWindow e0 = LatticeWindow::unit(0);
    LatticeWindow e1 = LatticeWindow::unit(1);
    CHECK(inner_product(e0, e0) == 1.0);
    CHECK(inner_product(e0, e1) == 0.0);

    // u = (1,2) at offset 0, v = (3,4) at offset 1: only site 1 overlaps, 2*3.
    LatticeWindow u(0, {1.0, 2.0});
    LatticeWindow v(1, {3.0, 4.0});
    CHECK(inner_product(u, v) == 6.0);
}

TEST_CASE("norm") {
    CHECK(norm(LatticeWindow::zeros(3, 4)) == 0.0);
    CHECK(norm(LatticeWindow::unit(0)) == 1.0);
    CHECK(norm(LatticeWindow(0, {3.0, 4.0})) == 5.0);
}

TEST_CASE("laplacian stencil") {
    LatticeWindow lap = laplacian(LatticeWindow::unit(0));
    CHECK(lap.offset() == -1);
    CHECK(lap.values() == std::vector<double>{1.0, -2.0, 1.0});

    // constant window: interior sites cancel, only the boundary contributes
    LatticeWindow c(0, std::vector<double>(5, 2.5));
    LatticeWindow lc = laplacian(c);
    for (long i = 1; i <= 3; ++i) CHECK(lc.at_site(i) == 0.0);
    CHECK(lc.at_site(-1) == 2.5);
    CHECK(lc.at_site(0) == -2.5);
    CHECK(lc.at_site(4) == -2.5);
    CHECK(lc.at_site(5) == 2.5);

    CHECK(norm(laplacian(LatticeWindow::zeros(0, 3))) == 0.0);
}

TEST_CASE("difference operators") {
    LatticeWindow e0 = LatticeWindow::unit(0);

    LatticeWindow dp = dplus(e0);
    CHECK(dp.at_site(-1) == 1.0);
    CHECK(dp.at_site(0) == -1.0);
    CHECK(inner_product(dp, dp) == 2.0);
    CHECK(norm(dplus(LatticeWindow::zeros(0, 3))) == 0.0);

    LatticeWindow dm = dminus(e0);
    CHECK(dm.at_site(0) == -1.0);
    CHECK(dm.at_site(1) == 1.0);

    // the composition reproduces the second difference up to sign:
    // D+ D- e0 = (-1, 2, -1) = -Lap e0
    LatticeWindow comp = dplus(dminus(e0));
    CHECK(comp.equals(scale(-1.0, laplacian(e0))));
    CHECK(comp.at_site(-1) == -1.0);
    CHECK(comp.at_site(0) == 2.0);
    CHECK(comp.at_site(1) == -1.0);
}

TEST_CASE("operator identities on random windows") {
    CounterRng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        LatticeWindow u = random_window(rng, 16);
        LatticeWindow v = random_window(rng, 16);
        double scale_u = norm(u) + 1.0;

        // factorization (sign-corrected): Lap = -D+D- = -D-D+
        LatticeWindow lap = laplacian(u);
        CHECK(dplus(dminus(u)).equals(scale(-1.0, lap), 1e-12 * scale_u));
        CHECK(dminus(dplus(u)).equals(scale(-1.0, lap), 1e-12 * scale_u));

        // adjointness <D-u, v> = <u, D+v>
        double lhs = inner_product(dminus(u), v);
        double rhs = inner_product(u, dplus(v));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(norm(u) * norm(v) + 1.0));

        // <Lap u, u> = -||D+u||^2 <= 0
        double quad = inner_product(lap, u);
        double d = norm(dplus(u));
        CHECK(quad == doctest::Approx(-d * d).epsilon(1e-12).scale(norm(u) * norm(u) + 1.0));
        CHECK(quad <= 1e-12 * scale_u * scale_u);

        // operator norm bound ||Lap u|| <= 4 ||u||
        CHECK(norm(lap) <= 4.0 * norm(u) * (1.0 + 1e-12));
    }
}

TEST_CASE("axpy and scale") {
    LatticeWindow e0 = LatticeWindow::unit(0);
    LatticeWindow e1 = LatticeWindow::unit(1);
    LatticeWindow zero = LatticeWindow::zeros(0, 1);

    CHECK(axpy(1.0, e0, zero) == e0);
    CHECK(axpy(0.0, e0, e1) == e1);

    LatticeWindow r = axpy(2.0, e0, e1);
    CHECK(r.at_site(0) == 2.0);
    CHECK(r.at_site(1) == 1.0);

    CHECK(scale(-3.0, e0).at_site(0) == -3.0);
    CHECK(subtract(e0, e0) == LatticeWindow::zeros(0, 1));
}

TEST_CASE("equality uses zero-extension, not buffers") {
    LatticeWindow a(-1, {0.0, 1.0, 0.0});
    LatticeWindow b = LatticeWindow::unit(0);
    CHECK(a == b);
    CHECK(LatticeWindow::zeros(-5, 11) == LatticeWindow::zeros(7, 2));
    CHECK_FALSE(LatticeWindow::unit(0) == LatticeWindow::unit(1));
}

TEST_CASE("construction rejects bad input") {
    CHECK_THROWS_AS(LatticeWindow(0, {}), ConfigError);
    CHECK_THROWS_AS(LatticeWindow(0, {1.0, std::nan("")}), ConfigError);
    CHECK_THROWS_AS(LatticeWindow(0, {std::numeric_limits<double>::infinity()}), ConfigError);
}

TEST_CASE("clip and tail") {
    LatticeWindow u(-2, {1.0, 2.0, 3.0, 4.0, 5.0}); // sites -2..2
    LatticeWindow c = clip_to(u, -1, 1);
    CHECK(c.offset() == -1);
    CHECK(c.values() == std::vector<double>{2.0, 3.0, 4.0});
    CHECK(clip_to(u, 5, 7) == LatticeWindow::zeros(5, 3));

    CHECK(tail_norm(u, 1) == doctest::Approx(std::sqrt(1.0 + 25.0)));
    CHECK(tail_norm(u, 2) == 0.0);
}
