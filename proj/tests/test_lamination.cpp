#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rwls/lamination.hpp"

using namespace rwls;

namespace {

PunctureSet four_punctures() {
    return {{{0.3, 0.4}, {0.0, 1.1}, {-1.2, 1.6}, {0.5, 2.9}}};
}

std::vector<Point> closed(const PolyLoop& l) {
    std::vector<Point> v = l.vertices;
    v.push_back(l.vertices.front());
    return v;
}

} // namespace

TEST_CASE("validate_punctures rejects bad inputs") {
    CHECK_THROWS_AS(validate_punctures({{{0.0, 1.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_punctures({{{0.0, 1.0}, {2.0, -0.1}}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_punctures({{{0.0, 1.0}, {1.0, 0.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_punctures({{{0.0, 2.0}, {0.0, 1.0}}}), std::invalid_argument);
    CHECK_THROWS_AS(validate_punctures({{{0.0, 1.0}, {1.0, 1e-9}}}), std::invalid_argument); // equal moduli
    CHECK_NOTHROW(validate_punctures(four_punctures()));
}

TEST_CASE("triangulation has 3(N-1) edges of the right shapes") {
    for (int n = 2; n <= 5; ++n) {
        PunctureSet ps;
        for (int i = 0; i < n; ++i) ps.punctures.push_back({0.1 * i, 1.0 + 0.8 * i});
        const Triangulation tri = build_triangulation(ps);
        CHECK(int(tri.edges.size()) == 3 * (n - 1));
        int spirals = 0, drops = 0;
        for (const TriEdge& e : tri.edges) {
            REQUIRE(e.path.size() >= 2);
            if (e.boundary_arc) {
                ++drops;
                CHECK(e.to == -1);
                // Constant radius, ending on the real axis.
                const double rho = norm(ps.punctures[e.from]);
                for (const Point& p : e.path) CHECK(norm(p) == doctest::Approx(rho));
                CHECK(e.path.back().y == doctest::Approx(0.0).epsilon(1e-12));
                CHECK(e.path.front().x == doctest::Approx(ps.punctures[e.from].x));
            } else {
                ++spirals;
                CHECK(e.to == e.from + 1);
                // Radius-monotone between consecutive punctures.
                CHECK(e.path.front().x == doctest::Approx(ps.punctures[e.from].x));
                CHECK(e.path.back().y == doctest::Approx(ps.punctures[e.to].y));
                double prev = 0.0;
                for (const Point& p : e.path) {
                    CHECK(norm(p) > prev);
                    prev = norm(p);
                }
            }
        }
        CHECK(spirals == n - 1);
        CHECK(drops == 2 * (n - 1));
    }
}

TEST_CASE("extract_lamination keeps exactly the multi-puncture loops") {
    const PunctureSet ps = four_punctures();
    std::vector<PolyLoop> loops =
        concentric_representatives({{0, 1}, {2, 3}, {0, 3}}, ps);
    // Add a loop enclosing a single puncture and one enclosing none.
    PolyLoop single;
    for (int s = 0; s < 32; ++s) {
        const double t = 2.0 * M_PI * s / 32;
        single.vertices.push_back({0.3 + 0.05 * std::cos(t), 0.4 + 0.05 * std::sin(t)});
    }
    PolyLoop empty_loop;
    for (int s = 0; s < 32; ++s) {
        const double t = 2.0 * M_PI * s / 32;
        empty_loop.vertices.push_back({5.0 + 0.2 * std::cos(t), 5.0 + 0.2 * std::sin(t)});
    }
    loops.push_back(single);
    loops.push_back(empty_loop);

    const Lamination lam = extract_lamination(loops, ps);
    REQUIRE(lam.kept.size() == 3);
    CHECK(lam.kept == std::vector<std::size_t>{0, 1, 2});
    CHECK(lam.enclosed[0] == std::vector<int>{0, 1});
    CHECK(lam.enclosed[1] == std::vector<int>{2, 3});
    CHECK(lam.enclosed[2] == std::vector<int>{0, 1, 2, 3});

    // Stable under reordering of the loop list.
    std::reverse(loops.begin(), loops.end());
    const Lamination rev = extract_lamination(loops, ps);
    REQUIRE(rev.kept.size() == 3);
    CHECK(rev.enclosed[0] == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("representatives are disjoint and follow the nesting") {
    const PunctureSet ps = four_punctures();
    const std::vector<std::pair<int, int>> ranges{{0, 3}, {0, 1}, {2, 3}};
    const auto reps = concentric_representatives(ranges, ps);
    REQUIRE(reps.size() == 3);
    for (std::size_t a = 0; a < reps.size(); ++a)
        for (std::size_t b = a + 1; b < reps.size(); ++b)
            CHECK(!oracle::polylines_intersect(closed(reps[a]), closed(reps[b])));
    for (std::size_t k = 0; k < ranges.size(); ++k)
        for (int pi = 0; pi < 4; ++pi) {
            const bool inside = ranges[k].first <= pi && pi <= ranges[k].second;
            CHECK((winding_number(reps[k], ps.punctures[pi]) != 0) == inside);
        }
}

TEST_CASE("representatives reject malformed families") {
    const PunctureSet ps = four_punctures();
    CHECK_THROWS_AS(concentric_representatives({{2, 1}}, ps), std::invalid_argument);
    CHECK_THROWS_AS(concentric_representatives({{0, 4}}, ps), std::invalid_argument);
    CHECK_THROWS_AS(concentric_representatives({{-1, 2}}, ps), std::invalid_argument);
    // Crossing ranges are not laminar.
    CHECK_THROWS_AS(concentric_representatives({{0, 2}, {1, 3}}, ps), std::invalid_argument);
}

TEST_CASE("complexity bound: per-annulus crossings and the 6(N-1) cap") {
    const PunctureSet ps = four_punctures();
    const std::vector<std::pair<int, int>> ranges{{0, 3}, {0, 1}, {2, 3}};
    const auto reps = concentric_representatives(ranges, ps);
    const ComplexityBound cb = complexity_bound(reps, ps);
    REQUIRE(cb.per_annulus.size() == 3);
    // Each capsule spanning annulus k contributes one out-and-back pair.
    for (int k = 0; k < 3; ++k) {
        long spanning = 0;
        for (const auto& [i, j] : ranges) spanning += i <= k && k < j;
        CHECK(cb.per_annulus[k] == 2 * spanning);
    }
    long total = 0;
    for (long v : cb.per_annulus) total += v;
    CHECK(cb.bound == 6L * 3 * total);
    CHECK(cb.raw_intersections > 0);
    CHECK(cb.raw_intersections <= cb.bound);
}

TEST_CASE("complexity bound holds over random laminar families") {
    const PunctureSet ps = four_punctures();
    const std::vector<std::pair<int, int>> all{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> coin(0, 1);
    int families = 0;
    for (int rep = 0; rep < 2000 && families < 300; ++rep) {
        std::vector<std::pair<int, int>> ranges;
        for (const auto& r : all)
            if (coin(rng)) ranges.push_back(r);
        if (ranges.empty()) continue;
        bool laminar = true;
        for (std::size_t a = 0; a < ranges.size() && laminar; ++a)
            for (std::size_t b = a + 1; b < ranges.size() && laminar; ++b) {
                const auto [a0, a1] = ranges[a];
                const auto [b0, b1] = ranges[b];
                const bool nested = (b0 <= a0 && a1 <= b1) || (a0 <= b0 && b1 <= a1);
                const bool disjoint = a1 < b0 || b1 < a0;
                laminar = nested || disjoint;
            }
        if (!laminar) continue;
        ++families;
        const auto reps = concentric_representatives(ranges, ps);
        const ComplexityBound cb = complexity_bound(reps, ps);
        CHECK(cb.raw_intersections <= cb.bound);
        for (std::size_t a = 0; a < reps.size(); ++a)
            for (std::size_t b = a + 1; b < reps.size(); ++b)
                CHECK(!oracle::polylines_intersect(closed(reps[a]), closed(reps[b])));
    }
    CHECK(families >= 30);
}
