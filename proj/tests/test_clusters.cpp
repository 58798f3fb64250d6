#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "figures.hpp"
#include "oracles.hpp"
#include "rwls/clusters.hpp"
#include "rwls/soup.hpp"

using namespace rwls;
using figures::rect_loop;

TEST_CASE("clustering groups loops by shared vertices, matching BFS oracle") {
    std::vector<PolyLoop> loops;
    loops.push_back(rect_loop(0, 0, 2, 2, 1));
    loops.push_back(rect_loop(2, 2, 4, 4, 2)); // shares the corner (2,2)
    loops.push_back(rect_loop(6, 0, 8, 2, 3)); // disjoint
    const ClusterSet cs = build_clusters(loops, 1.0);
    CHECK(cs.members.size() == 2);
    CHECK(cs.cluster_of[0] == cs.cluster_of[1]);
    CHECK(cs.cluster_of[0] != cs.cluster_of[2]);

    // Random soups against the oracle.
    const GridDomain dom = GridDomain::rect(9, 9);
    const SoupSampler sampler(dom, 10);
    for (int rep = 0; rep < 20; ++rep) {
        const LoopSoupSample s = sampler.sample(1.2, 400 + rep);
        const ClusterSet c = build_clusters(s.loops, 1.0);
        const std::vector<int> ref = oracle::cluster_bfs(s.loops);
        REQUIRE(c.cluster_of.size() == ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i)
            for (std::size_t j = 0; j < ref.size(); ++j)
                CHECK((c.cluster_of[i] == c.cluster_of[j]) == (ref[i] == ref[j]));
    }
}

TEST_CASE("off-lattice and non-edge input is rejected") {
    PolyLoop bad;
    bad.vertices = {{0.3, 0.0}, {1.3, 0.0}, {1.3, 1.0}, {0.3, 1.0}};
    CHECK_THROWS_AS(build_clusters({bad}, 1.0), std::invalid_argument);
    PolyLoop diag;
    diag.vertices = {{0, 0}, {1, 1}, {0, 1}};
    CHECK_THROWS_AS(build_clusters({diag}, 1.0), std::invalid_argument);
}

TEST_CASE("filling plugs holes and records the trace") {
    // Perimeter of a 3x3 block: the interior is a hole, so it gets filled.
    const ClusterSet cs = build_clusters({rect_loop(0, 0, 3, 3, 1)}, 1.0);
    REQUIRE(cs.fillings.size() == 1);
    const Filling& f = cs.fillings[0];
    CHECK(f.contains(2, 2)); // refined cell at the block center (1,1)
    CHECK(f.contains(0, 0));
    CHECK(!f.contains(-2, 0));
    CHECK(f.trace[(2 - f.y0) * f.w + (2 - f.x0)] == 0); // center is filled but not traced
    CHECK(cs.outermost[0] == 1);
}

TEST_CASE("nested loop is not outermost") {
    std::vector<PolyLoop> loops{rect_loop(0, 0, 5, 5, 1), rect_loop(2, 2, 3, 3, 2)};
    const ClusterSet cs = build_clusters(loops, 1.0);
    REQUIRE(cs.members.size() == 2);
    const int inner_cluster = cs.cluster_of[1];
    CHECK(cs.outermost[inner_cluster] == 0);
    CHECK(cs.outermost[cs.cluster_of[0]] == 1);
}

TEST_CASE("extract_boundaries of a unit square loop") {
    const ClusterSet cs = build_clusters({rect_loop(0, 0, 1, 1, 1)}, 1.0);
    const std::vector<PolyLoop> bs = extract_boundaries(cs);
    REQUIRE(bs.size() == 1);
    REQUIRE(bs[0].vertices.size() == 4);
    double x0 = 1e9, y0 = 1e9, x1 = -1e9, y1 = -1e9;
    for (const Point& p : bs[0].vertices) {
        x0 = std::min(x0, p.x);
        y0 = std::min(y0, p.y);
        x1 = std::max(x1, p.x);
        y1 = std::max(y1, p.y);
    }
    CHECK(x0 == doctest::Approx(-0.25));
    CHECK(y0 == doctest::Approx(-0.25));
    CHECK(x1 == doctest::Approx(1.25));
    CHECK(y1 == doctest::Approx(1.25));
    // Region lies on the left of the traversal: positive winding inside.
    CHECK(winding_number(bs[0], {0.5, 0.5}) == 1);
    CHECK(winding_number(bs[0], {2.0, 0.5}) == 0);
}

TEST_CASE("boundaries are only emitted for outermost clusters") {
    std::vector<PolyLoop> loops{rect_loop(0, 0, 5, 5, 1), rect_loop(2, 2, 3, 3, 2),
                                rect_loop(7, 0, 8, 1, 3)};
    const std::vector<PolyLoop> bs = extract_boundaries(build_clusters(loops, 1.0));
    CHECK(bs.size() == 2);
}

TEST_CASE("grazing radii are rejected") {
    const ClusterSet cs = build_clusters({rect_loop(0, 0, 3, 3, 1)}, 1.0);
    CHECK_THROWS_AS(comp_number(cs, {{0.1, 0.2}, 1.5, 7.6}), std::invalid_argument);
    CHECK_THROWS_AS(comp_number(cs, {{0.1, 0.2}, 3.3, 8.0}), std::invalid_argument);
    CHECK_THROWS_AS(clus_number(cs, {{0.1, 0.2}, 7.6, 3.3}), std::invalid_argument);
}

TEST_CASE("figure fixtures: comp, clus, crossing counts") {
    const Annulus a = figures::annulus();
    SUBCASE("base ensemble: Comp = 4") {
        const ClusterSet cs = build_clusters(figures::fig3_base(), 1.0);
        CHECK(comp_number(cs, a) == 4);
        CHECK(clus_number(cs, a) == 4);
        CHECK(crossing_witnesses_exist(cs, a));
    }
    SUBCASE("red block merges east and north: Comp = 3") {
        const ClusterSet cs = build_clusters(figures::fig3_red(), 1.0);
        CHECK(comp_number(cs, a) == 3);
        CHECK(clus_number(cs, a) == 3);
    }
    SUBCASE("blue block chains the stubs: Comp = 5") {
        const ClusterSet cs = build_clusters(figures::fig3_blue(), 1.0);
        CHECK(comp_number(cs, a) == 5);
        CHECK(clus_number(cs, a) == 5);
        CHECK(crossing_witnesses_exist(cs, a));
    }
    SUBCASE("two-cluster ensemble: Clus = 2") {
        const ClusterSet cs = build_clusters(figures::fig5(), 1.0);
        CHECK(clus_number(cs, a) == 2);
        CHECK(comp_number(cs, a) == 2);
    }
}

TEST_CASE("fixture files load to the same statistics") {
    const Annulus a = figures::annulus();
    auto comp_of = [&a](const std::string& name) {
        const LoopSoupSample s = load_sample(std::string(FIXTURES_DIR) + "/" + name);
        return comp_number(build_clusters(s.loops, 1.0), a);
    };
    CHECK(comp_of("fig3_base.jsonl") == 4);
    CHECK(comp_of("fig3_red.jsonl") == 3);
    CHECK(comp_of("fig3_blue.jsonl") == 5);
    const LoopSoupSample f5 = load_sample(std::string(FIXTURES_DIR) + "/fig5.jsonl");
    CHECK(clus_number(build_clusters(f5.loops, 1.0), a) == 2);
    const LoopSoupSample f6 = load_sample(std::string(FIXTURES_DIR) + "/fig6.jsonl");
    REQUIRE(f6.loops.size() == 1);
    const CrossScan scan = crossing_count_single(f6.loops[0], a);
    CHECK(scan.count == 4);
    CHECK(oracle::max_disjoint_arcs(f6.loops[0], scan.arcs) == 3);
}

TEST_CASE("boundary crossing count equals twice the component count") {
    const Annulus a = figures::annulus();
    for (const auto& loops : {figures::fig3_base(), figures::fig3_red(), figures::fig3_blue()}) {
        const ClusterSet cs = build_clusters(loops, 1.0);
        const int comp = comp_number(cs, a);
        CHECK(cross_number_simple(extract_boundaries(cs), a) == 2 * comp);
    }
}

TEST_CASE("cross_number_simple rejects intersecting loop families") {
    std::vector<PolyLoop> crossing{rect_loop(0, 0, 4, 4, 1), rect_loop(2, 2, 6, 6, 2)};
    CHECK_THROWS_AS(cross_number_simple(crossing, figures::annulus(), true), std::invalid_argument);
}

TEST_CASE("total crossings are additive and match per-loop scans") {
    const Annulus a = figures::annulus();
    const auto loops = figures::fig3_base();
    long expect = 0;
    for (const PolyLoop& l : loops) expect += crossing_count_single(l, a).count;
    CHECK(total_single_crossings(loops, a) == expect);
    CHECK(expect == 8); // four crossing bars, two excursions each
}

TEST_CASE("inequality checkers pass on the fixtures") {
    // Small family: the stubs; large family: the bars.
    const auto all = figures::fig3_base();
    std::vector<PolyLoop> small(all.begin() + 4, all.end());
    std::vector<PolyLoop> big(all.begin(), all.begin() + 4);
    const Annulus outer = figures::annulus();
    const Annulus middle{outer.center, 4.1, 6.9};
    CHECK(check_component_decomposition(small, big, 1.0, outer, middle).pass);
    CHECK(check_cluster_union(small, big, 1.0, outer, middle).pass);
    CHECK(check_cluster_union_degenerate(small, big, 1.0, outer).pass);
    CHECK(check_small_loop_clusters(small, 1.0, 1.65, outer).pass);
}

TEST_CASE("comp_number is invariant under loop order") {
    auto loops = figures::fig3_red();
    const Annulus a = figures::annulus();
    const int expect = comp_number(build_clusters(loops, 1.0), a);
    std::reverse(loops.begin(), loops.end());
    CHECK(comp_number(build_clusters(loops, 1.0), a) == expect);
}

TEST_CASE("annular chain of loops encircling an empty middle plugs it") {
    // Four overlapping bars forming a ring around (4,4) without touching it.
    std::vector<PolyLoop> ring{rect_loop(0, 0, 8, 1, 1), rect_loop(7, 0, 8, 8, 2),
                               rect_loop(0, 7, 8, 8, 3), rect_loop(0, 0, 1, 8, 4)};
    const ClusterSet cs = build_clusters(ring, 1.0);
    REQUIRE(cs.members.size() == 1);
    CHECK(cs.fillings[0].contains(8, 8)); // refined cell at the middle (4,4)
}
