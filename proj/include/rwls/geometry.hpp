#pragma once
#include <array>
#include <cstdint>
#include <vector>

namespace rwls {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
double dist(Point a, Point b);
double norm(Point a);

// Closed polyline; the segment from vertices.back() to vertices.front() is implied.
struct PolyLoop {
    std::uint64_t id = 0;
    std::vector<Point> vertices;
};

// Open annulus {r < |z - center| < R}.
struct Annulus {
    Point center;
    double inner_r = 0.0;
    double outer_r = 0.0;
};

// Origin-centered {inner_r < |z| < outer_r, 0 < arg z < angle}.
struct SectorAnnulus {
    double inner_r = 0.0;
    double outer_r = 0.0;
    double angle = 0.0;
};

// Conformal rectangle: simple polygon whose boundary splits into four arcs
// S0..S3 in cyclic order. arcs[k] = [first_segment, last_segment+1) gives the
// index range of boundary segments (segment i joins boundary[i] to
// boundary[i+1 mod n]) belonging to side Sk.
struct Quad {
    std::vector<Point> boundary;
    std::array<std::pair<int, int>, 4> arcs{};
};

// One transition excursion of a loop across an annulus. Positions are
// fractional vertex indices (i + t means parameter t along segment i).
struct CrossingArc {
    std::uint64_t loop_id = 0;
    int start_index = 0;
    int end_index = 0;
    double start_pos = 0.0;
    double end_pos = 0.0;
    bool from_inner = false; // true: runs inner circle -> outer circle
};

struct CircleHit {
    double t = 0.0; // parameter along the segment, in (0, 1]
    bool tangent = false;
};

// Largest pairwise distance between vertices.
double diameter(const PolyLoop& loop);

// Parameters where segment p->q meets the circle |z - center| = radius.
std::vector<CircleHit> segment_circle_crossings(Point p, Point q, Point center, double radius);

// Signed winding number of the loop around p; throws if p lies on the trace.
int winding_number(const PolyLoop& loop, Point p);

struct CrossScan {
    int count = 0; // number of one-way crossing excursions (0 if the loop does not cross)
    std::vector<CrossingArc> arcs;
};

// Circle-touch scan: collect touches of both boundary circles along the loop,
// collapse cyclic runs of repeats, and count alternations.
CrossScan crossing_count_single(const PolyLoop& loop, const Annulus& a);

// Exact distance extremes between a segment / loop trace and a point.
double segment_min_dist(Point p, Point q, Point c);
double segment_max_dist(Point p, Point q, Point c);
double loop_min_dist(const PolyLoop& loop, Point c);
double loop_max_dist(const PolyLoop& loop, Point c);

// Connected-set crossing: the trace meets both boundary circles.
bool loop_crosses_annulus(const PolyLoop& loop, const Annulus& a);
// Trace intersects the open annulus.
bool loop_intersects_annulus(const PolyLoop& loop, const Annulus& a);
// Trace is contained in the open annulus.
bool loop_inside_annulus(const PolyLoop& loop, const Annulus& a);
// Same crossing notion for an open polyline.
bool polyline_crosses_annulus(const std::vector<Point>& path, const Annulus& a);

// Proper + endpoint-touching intersections between two segments.
bool segments_intersect(Point a, Point b, Point c, Point d);

// Number of segment-pair intersections between a closed loop and an open path.
long count_polyline_intersections(const PolyLoop& loop, const std::vector<Point>& path);

} // namespace rwls
