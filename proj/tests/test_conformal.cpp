#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "rwls/conformal.hpp"

using namespace rwls;

TEST_CASE("power_map: identity at eta = pi, quarter sector at eta = pi/2") {
    const Point z{0.3, 0.4};
    const Point w = power_map(z, M_PI);
    CHECK(w.x == doctest::Approx(z.x));
    CHECK(w.y == doctest::Approx(z.y));

    // Opening pi/2 squares the point: i -> -1, positive reals -> squares.
    const Point a = power_map({0.0, 1.0}, M_PI / 2.0);
    CHECK(a.x == doctest::Approx(-1.0));
    CHECK(a.y == doctest::Approx(0.0).epsilon(1e-12));
    const Point b = power_map({2.0, 0.0}, M_PI / 2.0);
    CHECK(b.x == doctest::Approx(4.0));
    CHECK(b.y == doctest::Approx(0.0).epsilon(1e-12));
    const Point c = power_map({1.0, 1.0}, M_PI / 2.0); // (sqrt 2, 45 deg) -> (2, 90 deg)
    CHECK(c.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c.y == doctest::Approx(2.0));

    CHECK(power_map({0.0, 0.0}, 1.0).x == 0.0);
    CHECK_THROWS_AS(power_map(z, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(power_map(z, 0.0), std::invalid_argument);
}

TEST_CASE("RadiiSchedule endpoints and monotonicity") {
    const RadiiSchedule s{0.5, 2.0, M_PI / 2.0};
    CHECK(s.exponent(1.0) == doctest::Approx(1.0));
    CHECK(s.exponent(0.0) == doctest::Approx(M_PI / s.eta));
    CHECK(s.exponent(2.0) == doctest::Approx(s.eta / M_PI));
    CHECK(s.inner(1.0) == doctest::Approx(0.5));
    CHECK(s.outer(1.0) == doctest::Approx(2.0));
    CHECK(s.inner(0.0) == doctest::Approx(0.25));
    CHECK(s.outer(0.0) == doctest::Approx(4.0));
    CHECK(s.inner(2.0) == doctest::Approx(std::sqrt(0.5)));
    // Exponent decreases along the interpolation, radii stay nested.
    double prev = 1e300;
    for (double beta = 0.0; beta <= 2.0; beta += 0.25) {
        const double e = s.exponent(beta);
        CHECK(e < prev);
        CHECK(s.inner(beta) < 1.0);
        CHECK(s.outer(beta) > 1.0);
        prev = e;
    }
    CHECK_THROWS_AS(s.exponent(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(s.exponent(2.1), std::invalid_argument);
    const RadiiSchedule bad{1.5, 2.0, M_PI / 2.0};
    CHECK_THROWS_AS(bad.inner(1.0), std::invalid_argument);
}

TEST_CASE("rectangle moduli match the aspect ratio") {
    for (double m : {1.0, 2.0, 4.0}) {
        const ModulusResult res = discrete_modulus(make_rectangle(1.0, m), 1.0 / 64.0);
        CHECK(std::abs(res.modulus - m) / m < 0.05);
        CHECK(res.energy == doctest::Approx(1.0 / res.modulus));
        CHECK(res.residual < 1e-8);
        CHECK(res.nodes > 1000);
    }
}

TEST_CASE("half-annulus modulus matches log(R/r)/pi") {
    for (double R : {2.0, 3.0}) {
        const ModulusResult res = discrete_modulus(make_half_annulus(1.0, R), 1.0 / 64.0);
        const double expect = std::log(R) / M_PI;
        CHECK(std::abs(res.modulus - expect) / expect < 0.05);
    }
}

TEST_CASE("duality: conjugate quad moduli multiply to 1") {
    Quad q = make_rectangle(1.0, 2.0);
    Quad dual = q;
    dual.arcs = {{q.arcs[1], q.arcs[2], q.arcs[3], q.arcs[0]}};
    const double m = discrete_modulus(q, 1.0 / 64.0).modulus;
    const double md = discrete_modulus(dual, 1.0 / 64.0).modulus;
    CHECK(std::abs(m * md - 1.0) < 0.10);
}

TEST_CASE("modulus rejects unusable meshes") {
    // Too coarse: no interior grid rows fit.
    CHECK_THROWS_AS(discrete_modulus(make_rectangle(1.0, 0.05), 0.1), std::invalid_argument);
    // Thin half-annulus at a coarse mesh: some node borders both circles.
    CHECK_THROWS_AS(discrete_modulus(make_half_annulus(1.0, 1.05), 0.04), std::runtime_error);
}

TEST_CASE("pinch annulus of a tall rectangle sits on the short axis") {
    const Quad q = make_rectangle(1.0, 45.0);
    const PinchResult p = pinch_annulus(q, 1.0 / 8.0);
    CHECK(p.d1 == doctest::Approx(1.0).epsilon(0.35));
    CHECK(p.annulus.inner_r == p.d1);
    CHECK(p.annulus.outer_r == doctest::Approx(2.0 * p.d1));
    // The shortest side-to-side path may sit at any height; its midpoint stays
    // within the strip.
    CHECK(p.annulus.center.x > 0.0);
    CHECK(p.annulus.center.x < 1.0);
    CHECK(p.annulus.center.y > -1.0);
    CHECK(p.annulus.center.y < 46.0);
    REQUIRE(p.path.size() >= 2);

    // Every bottom-to-top crossing polyline must cross the pinch annulus.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(0.05, 0.95), jitter(-0.04, 0.04);
    for (int rep = 0; rep < 300; ++rep) {
        const double x = ux(rng);
        std::vector<Point> path{{x, -0.5}};
        for (double y = 5.0; y < 45.0; y += 5.0)
            path.push_back({std::clamp(x + jitter(rng), 0.01, 0.99), y});
        path.push_back({x, 45.5});
        CHECK(polyline_crosses_annulus(path, p.annulus));
    }
}

TEST_CASE("annuli cover of a high-modulus quad") {
    const Quad q = make_rectangle(1.0, 45.0);
    const QuadCover cover = quad_annuli_cover(q, 1.0 / 8.0);
    REQUIRE(cover.K == 1);
    REQUIRE(cover.annuli.size() == 1);
    REQUIRE(cover.sub_moduli.size() == 1);
    CHECK(cover.sub_moduli[0] >= 40.0);
    CHECK(cover.sub_moduli[0] == doctest::Approx(45.0).epsilon(0.05));
    CHECK(!cover.coord_points.empty());
    CHECK(cover.coord_points.size() == cover.coord_values.size());
    for (double v : cover.coord_values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ux(0.05, 0.95);
    for (int rep = 0; rep < 300; ++rep) {
        const std::vector<Point> path{{ux(rng), -0.5}, {ux(rng), 22.0}, {ux(rng), 45.5}};
        CHECK(polyline_crosses_annulus(path, cover.annuli[0]));
    }
    // Every endpoint bins into the single family.
    CHECK(cover_bin(cover, {0.5, 0.0}) == 0);
    CHECK(cover_bin(cover, {0.5, 45.0}) == 0);
}

TEST_CASE("cover_bin picks the nearest sampled conjugate coordinate") {
    QuadCover cover;
    cover.K = 4;
    for (int i = 0; i < 9; ++i) {
        cover.coord_points.push_back({double(i), 0.0});
        cover.coord_values.push_back(i / 8.0);
    }
    CHECK(cover_bin(cover, {0.1, 0.0}) == 0);
    CHECK(cover_bin(cover, {3.1, 0.0}) == 1);  // value 3/8 -> bin 1
    CHECK(cover_bin(cover, {5.9, 0.0}) == 3);  // value 6/8 -> bin 3
    CHECK(cover_bin(cover, {8.4, 0.0}) == 3);  // value 1 clamps to K-1
    QuadCover empty;
    CHECK_THROWS_AS(cover_bin(empty, {0.0, 0.0}), std::runtime_error);
}

TEST_CASE("sector_cover geometry and crossing property") {
    const RadiiSchedule base{0.5, 2.0, M_PI / 2.0};
    // Centered at the origin: already covers itself.
    const Annulus origin{{0.0, 0.0}, 0.5, 1.0};
    const auto self = sector_cover(origin, base);
    REQUIRE(self.size() == 1);
    CHECK(self[0].inner_r == origin.inner_r);

    const Annulus shifted{{0.0, 1.3}, 0.5, 1.0};
    const auto fam = sector_cover(shifted, base);
    const double r = 0.5;
    CHECK(int(fam.size()) == int(std::ceil(4.0 / (1.0 - r))) + 1);
    for (std::size_t j = 0; j < fam.size(); ++j) {
        CHECK(fam[j].inner_r == doctest::Approx((3.0 * r + 1.0) / 4.0));
        CHECK(fam[j].outer_r == doctest::Approx((r + 3.0) / 4.0));
        CHECK(fam[j].center.x == 0.0);
        CHECK(fam[j].center.y == doctest::Approx((double(j)) * (1.0 - r) / 2.0));
        CHECK(fam[j].inner_r < fam[j].outer_r);
    }
    // Shift coverage: half the spacing never exceeds the radial slack, so the
    // nearest member nests between the base circles for every center height.
    for (std::size_t j = 0; j + 1 < fam.size(); ++j) {
        const double half_gap = 0.5 * (fam[j + 1].center.y - fam[j].center.y);
        CHECK(half_gap <= fam[j].inner_r - r + 1e-12);
        CHECK(half_gap <= 1.0 - fam[j].outer_r + 1e-12);
    }

    // Any radial crossing of the shifted annulus meets a family member.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uang(0.0, 2.0 * M_PI);
    for (int rep = 0; rep < 500; ++rep) {
        const double t = uang(rng);
        const Point dir{std::cos(t), std::sin(t)};
        std::vector<Point> path{
            {shifted.center.x + 0.99 * shifted.inner_r * dir.x,
             shifted.center.y + 0.99 * shifted.inner_r * dir.y},
            {shifted.center.x + 1.01 * shifted.outer_r * dir.x,
             shifted.center.y + 1.01 * shifted.outer_r * dir.y}};
        bool covered = false;
        for (const Annulus& a : fam) covered = covered || polyline_crosses_annulus(path, a);
        CHECK(covered);
    }

    CHECK_THROWS_AS(sector_cover({{0.3, 1.0}, 0.5, 1.0}, base), std::invalid_argument);
    CHECK_THROWS_AS(sector_cover({{0.0, 3.0}, 0.5, 1.0}, base), std::invalid_argument);
    CHECK_THROWS_AS(sector_cover({{0.0, 1.0}, 1.5, 1.0}, base), std::invalid_argument);
}
