#pragma once
#include <vector>

#include "rwls/geometry.hpp"

namespace rwls {

// Marked points in the upper half plane with strictly increasing moduli.
struct PunctureSet {
    std::vector<Point> punctures;
};
void validate_punctures(const PunctureSet& ps);

// Edge of the reference triangulation of the punctured half plane. Punctures
// are numbered 0..N-1; to == -1 means the edge ends on the boundary (real axis).
struct TriEdge {
    int from = -1;
    int to = -1;
    bool boundary_arc = false;
    std::vector<Point> path;
};

struct Triangulation {
    std::vector<TriEdge> edges;
};

// 3(N-1) edges: N-1 radius-monotone spirals joining consecutive punctures, and
// 2(N-1) circular arcs dropping from punctures to the real axis (one from the
// innermost and outermost punctures, two from each middle one).
Triangulation build_triangulation(const PunctureSet& ps);

// Loops enclosing at least two punctures (by winding number), with the indices
// they enclose.
struct Lamination {
    std::vector<std::size_t> kept;             // indices into the input loop list
    std::vector<std::vector<int>> enclosed;    // per kept loop
};
Lamination extract_lamination(const std::vector<PolyLoop>& loops, const PunctureSet& ps);

// Intersection count between the kept loops and the triangulation edges, and
// the crossing-number bound 6(N-1) * sum_i Cross_{A_i} over the consecutive
// puncture annuli A_i = A(0; |p_i|, |p_i+1|).
struct ComplexityBound {
    long raw_intersections = 0;
    long bound = 0;
    std::vector<long> per_annulus;
};
ComplexityBound complexity_bound(const std::vector<PolyLoop>& loops, const PunctureSet& ps);

// Canonical disjoint representatives for a laminar family of puncture index
// ranges [first, last] (nested or disjoint): capsules made of concentric arcs
// around the origin joined by radial segments.
std::vector<PolyLoop> concentric_representatives(const std::vector<std::pair<int, int>>& ranges,
                                                 const PunctureSet& ps);

} // namespace rwls
