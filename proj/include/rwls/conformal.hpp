#pragma once
#include <vector>

#include "rwls/geometry.hpp"

namespace rwls {

// z = rho e^(i theta) -> rho^(pi/eta) e(i theta pi/eta): maps the sector of
// opening eta onto the upper half plane.
Point power_map(Point z, double eta);

// Interpolating radii between an annulus sector of opening eta (beta = 2),
// the base annulus (beta = 1) and its half-plane image (beta = 0).
struct RadiiSchedule {
    double r = 0.0, R = 0.0, eta = 0.0; // requires r < 1 < R, 0 < eta <= pi

    double exponent(double beta) const;
    double inner(double beta) const;
    double outer(double beta) const;
};

Quad make_rectangle(double width, double height);
Quad make_half_annulus(double inner_r, double outer_r, int arc_points = 256);

// Extremal length of the curve family joining S0 to S2 inside the quad,
// computed as 1/energy of the discrete harmonic potential (0 on S0, 1 on S2,
// insulating on S1 and S3) on the mesh-spaced grid graph.
struct ModulusResult {
    double modulus = 0.0;
    double energy = 0.0;
    double residual = 0.0;
    int iterations = 0;
    int nodes = 0;
};
ModulusResult discrete_modulus(const Quad& quad, double mesh, double tol = 1e-10,
                               int max_iter = 50000);

// Shortest inner path between S1 and S3 of length d1; the annulus of radii
// (d1, 2 d1) about the path midpoint is crossed by every S0-S2 crossing curve
// once the quad's modulus is large (the construction assumes modulus >= 36).
struct PinchResult {
    Annulus annulus;
    double d1 = 0.0;
    std::vector<Point> path;
};
PinchResult pinch_annulus(const Quad& quad, double mesh);

// Split the crossing family into K^2 sub-families by conjugate-coordinate bins
// on S0 and S2 (K doubled until every sub-family has modulus >= 40, capped at
// 64), and build a pinch annulus for each: every crossing curve then crosses
// the annulus of the (i, j) bin holding its endpoints.
struct QuadCover {
    int K = 0;
    std::vector<Annulus> annuli;      // K*K entries, index i*K + j
    std::vector<double> sub_moduli;   // same indexing
    // Conjugate boundary coordinate sampled on grid nodes, for binning points.
    std::vector<Point> coord_points;
    std::vector<double> coord_values;
};
QuadCover quad_annuli_cover(const Quad& quad, double mesh);
// Bin index in [0, K) of the conjugate coordinate nearest to p.
int cover_bin(const QuadCover& cover, Point p);

// Finite family of shifted annuli along the imaginary axis such that every
// path crossing a (centered at i*y, 0 <= y <= 2 in units of the outer radius)
// crosses at least one family member. Shifts y_j = (j-1)(1-r)/2 with
// k = ceil(4/(1-r)) + 1 members; member radii ((3r+1)/4, (r+3)/4).
std::vector<Annulus> sector_cover(const Annulus& a, const RadiiSchedule& base);

} // namespace rwls
