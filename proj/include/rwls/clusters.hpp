#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "rwls/geometry.hpp"

namespace rwls {

// Filled-in cluster region on the x2-refined grid. Cell (a, b) is the closed
// square of side mesh/2 centered at (a * mesh/2, b * mesh/2); vertex cells have
// both coordinates even, edge-midpoint cells have mixed parity.
struct Filling {
    int x0 = 0, y0 = 0, w = 0, h = 0; // cell-coordinate bounding box
    std::vector<std::uint8_t> occ;    // filled cells (trace + holes)
    std::vector<std::uint8_t> trace;  // cells met by the loops themselves

    bool contains(int a, int b) const {
        if (a < x0 || a >= x0 + w || b < y0 || b >= y0 + h) return false;
        return occ[static_cast<std::size_t>(b - y0) * w + (a - x0)] != 0;
    }
};

struct ClusterSet {
    double mesh = 1.0;
    std::vector<PolyLoop> loops;
    std::vector<int> cluster_of;            // loop index -> cluster index
    std::vector<std::vector<int>> members;  // cluster index -> loop indices
    std::vector<Filling> fillings;          // per cluster
    std::vector<std::uint8_t> outermost;    // per cluster
};

// Group loops by shared lattice vertices, fill each cluster, and mark the
// clusters contained in no other cluster's filling.
ClusterSet build_clusters(const std::vector<PolyLoop>& loops, double mesh);

// One simple rectilinear boundary loop per outermost cluster (id = cluster index).
std::vector<PolyLoop> extract_boundaries(const ClusterSet& cs);

// Number of connected components of (union of outermost fillings) restricted to
// the open annulus whose closures meet both boundary circles. Exact on the
// polygonal cell regions; rejects radii that graze the refined grid.
int comp_number(const ClusterSet& cs, const Annulus& a);

// Number of outermost clusters whose trace meets both boundary circles.
int clus_number(const ClusterSet& cs, const Annulus& a);

// Sum of one-way crossing excursions over a family of disjoint simple loops.
int cross_number_simple(const std::vector<PolyLoop>& loops, const Annulus& a,
                        bool check_disjoint = true);

// Sum of per-loop crossing counts, loops arbitrary.
long total_single_crossings(const std::vector<PolyLoop>& loops, const Annulus& a);

// For every crossing component counted by comp_number, search for a chain of
// constituent loops (linked by shared vertices) that reaches from the inner
// circle to the outer one. Returns false if any component lacks such a chain.
bool crossing_witnesses_exist(const ClusterSet& cs, const Annulus& a);

// Named inequality check between cluster statistics.
struct CheckLine {
    std::string name;
    long lhs = 0;
    long rhs = 0;
    bool pass = false;
};

// Comp over the union against the decomposition through nested annuli
// r < rp < Rp < R: components of L1 in the middle annulus plus crossing terms
// and middle-touching loops of L2.
CheckLine check_component_decomposition(const std::vector<PolyLoop>& l1,
                                        const std::vector<PolyLoop>& l2, double mesh,
                                        const Annulus& outer, const Annulus& middle);

// Comp of small loops (diam < a) against Clus of the annulus-confined family
// in the shrunken annulus A(r + a, R - a).
CheckLine check_small_loop_clusters(const std::vector<PolyLoop>& small, double mesh, double a,
                                    const Annulus& ann);

// Clus over the union against Clus of L1 in the middle annulus plus loop-count
// terms for L2; degenerate form takes middle == outer.
CheckLine check_cluster_union(const std::vector<PolyLoop>& l1, const std::vector<PolyLoop>& l2,
                              double mesh, const Annulus& outer, const Annulus& middle);
CheckLine check_cluster_union_degenerate(const std::vector<PolyLoop>& l1,
                                         const std::vector<PolyLoop>& l2, double mesh,
                                         const Annulus& ann);

} // namespace rwls
