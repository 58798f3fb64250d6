#include "rwls/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rwls {

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }
double norm(Point a) { return std::hypot(a.x, a.y); }

double diameter(const PolyLoop& loop) {
    const auto& v = loop.vertices;
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            best = std::max(best, dist(v[i], v[j]));
    return best;
}

std::vector<CircleHit> segment_circle_crossings(Point p, Point q, Point center, double radius) {
    std::vector<CircleHit> hits;
    const Point d = q - p;
    const Point f = p - center;
    const double a = d.x * d.x + d.y * d.y;
    if (a == 0.0) return hits;
    const double b = 2.0 * (f.x * d.x + f.y * d.y);
    const double c = f.x * f.x + f.y * f.y - radius * radius;
    const double disc = b * b - 4.0 * a * c;
    const double tang_tol = 1e-12 * a * radius * radius;
    if (disc < -tang_tol) return hits;
    if (disc <= tang_tol) {
        const double t = -b / (2.0 * a);
        if (t > 0.0 && t <= 1.0) hits.push_back({t, true});
        return hits;
    }
    const double sq = std::sqrt(disc);
    for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)})
        if (t > 0.0 && t <= 1.0) hits.push_back({t, false});
    std::sort(hits.begin(), hits.end(), [](const CircleHit& u, const CircleHit& v) { return u.t < v.t; });
    return hits;
}

int winding_number(const PolyLoop& loop, Point p) {
    const auto& v = loop.vertices;
    const std::size_t n = v.size();
    if (n < 2) throw std::invalid_argument("winding_number: degenerate loop");
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = v[i] - p;
        const Point b = v[(i + 1) % n] - p;
        if (segment_min_dist(v[i], v[(i + 1) % n], p) < 1e-12)
            throw std::invalid_argument("winding_number: point on trace");
        total += std::atan2(a.x * b.y - a.y * b.x, a.x * b.x + a.y * b.y);
    }
    return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

namespace {

struct TouchEvent {
    double pos;
    int circle; // 0 inner, 1 outer
};

std::vector<TouchEvent> collect_touches(const PolyLoop& loop, const Annulus& a) {
    const auto& v = loop.vertices;
    const std::size_t n = v.size();
    const double vert_tol = 1e-12 * std::max(1.0, a.outer_r);
    std::vector<TouchEvent> ev;
    for (std::size_t i = 0; i < n; ++i) {
        const Point p = v[i];
        const Point q = v[(i + 1) % n];
        const double dp = dist(p, a.center);
        if (std::abs(dp - a.inner_r) < vert_tol) ev.push_back({double(i), 0});
        if (std::abs(dp - a.outer_r) < vert_tol) ev.push_back({double(i), 1});
        for (int circ = 0; circ < 2; ++circ) {
            const double radius = circ == 0 ? a.inner_r : a.outer_r;
            for (const CircleHit& h : segment_circle_crossings(p, q, a.center, radius)) {
                if (h.t > 1.0 - 1e-12) continue; // attributed to the next vertex event if grazing
                const double dq = dist(p + h.t * (q - p), a.center);
                (void)dq;
                ev.push_back({double(i) + h.t, circ});
            }
        }
    }
    std::sort(ev.begin(), ev.end(), [](const TouchEvent& u, const TouchEvent& w) { return u.pos < w.pos; });
    return ev;
}

} // namespace

CrossScan crossing_count_single(const PolyLoop& loop, const Annulus& a) {
    CrossScan out;
    auto ev = collect_touches(loop, a);
    if (ev.empty()) return out;

    // Collapse cyclic runs of repeated circle tags, keeping run extents.
    struct Run {
        int circle;
        double first_pos, last_pos;
    };
    std::vector<Run> runs;
    for (const TouchEvent& e : ev) {
        if (!runs.empty() && runs.back().circle == e.circle)
            runs.back().last_pos = e.pos;
        else
            runs.push_back({e.circle, e.pos, e.pos});
    }
    if (runs.size() > 1 && runs.front().circle == runs.back().circle) {
        runs.front().first_pos = runs.back().first_pos; // cyclic wrap
        runs.pop_back();
    }
    if (runs.size() < 2) return out;

    out.count = static_cast<int>(runs.size());
    const int n = static_cast<int>(loop.vertices.size());
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const Run& cur = runs[k];
        const Run& nxt = runs[(k + 1) % runs.size()];
        CrossingArc arc;
        arc.loop_id = loop.id;
        arc.start_pos = cur.last_pos;
        arc.end_pos = nxt.first_pos;
        arc.start_index = static_cast<int>(std::floor(cur.last_pos)) % n;
        arc.end_index = static_cast<int>(std::ceil(nxt.first_pos)) % n;
        arc.from_inner = cur.circle == 0;
        out.arcs.push_back(arc);
    }
    return out;
}

double segment_min_dist(Point p, Point q, Point c) {
    const Point d = q - p;
    const double a = d.x * d.x + d.y * d.y;
    double t = 0.0;
    if (a > 0.0) t = std::clamp(((c.x - p.x) * d.x + (c.y - p.y) * d.y) / a, 0.0, 1.0);
    return dist(p + t * d, c);
}

double segment_max_dist(Point p, Point q, Point c) { return std::max(dist(p, c), dist(q, c)); }

double loop_min_dist(const PolyLoop& loop, Point c) {
    const auto& v = loop.vertices;
    const std::size_t n = v.size();
    double best = dist(v[0], c);
    for (std::size_t i = 0; i < n; ++i) best = std::min(best, segment_min_dist(v[i], v[(i + 1) % n], c));
    return best;
}

double loop_max_dist(const PolyLoop& loop, Point c) {
    double best = 0.0;
    for (const Point& p : loop.vertices) best = std::max(best, dist(p, c));
    return best;
}

bool loop_crosses_annulus(const PolyLoop& loop, const Annulus& a) {
    return loop_min_dist(loop, a.center) <= a.inner_r && loop_max_dist(loop, a.center) >= a.outer_r;
}

bool loop_intersects_annulus(const PolyLoop& loop, const Annulus& a) {
    const auto& v = loop.vertices;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = segment_min_dist(v[i], v[(i + 1) % n], a.center);
        const double hi = segment_max_dist(v[i], v[(i + 1) % n], a.center);
        if (lo < a.outer_r && hi > a.inner_r) return true;
    }
    return false;
}

bool loop_inside_annulus(const PolyLoop& loop, const Annulus& a) {
    return loop_min_dist(loop, a.center) > a.inner_r && loop_max_dist(loop, a.center) < a.outer_r;
}

bool polyline_crosses_annulus(const std::vector<Point>& path, const Annulus& a) {
    double lo = dist(path[0], a.center), hi = lo;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        lo = std::min(lo, segment_min_dist(path[i], path[i + 1], a.center));
        hi = std::max(hi, segment_max_dist(path[i], path[i + 1], a.center));
    }
    return lo <= a.inner_r && hi >= a.outer_r;
}

namespace {
int orient(Point a, Point b, Point c) {
    const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    const double tol = 1e-12 * (std::abs(b.x - a.x) + std::abs(b.y - a.y) + 1.0);
    if (v > tol) return 1;
    if (v < -tol) return -1;
    return 0;
}
bool on_segment(Point a, Point b, Point p) {
    return std::min(a.x, b.x) - 1e-12 <= p.x && p.x <= std::max(a.x, b.x) + 1e-12 &&
           std::min(a.y, b.y) - 1e-12 <= p.y && p.y <= std::max(a.y, b.y) + 1e-12;
}
} // namespace

bool segments_intersect(Point a, Point b, Point c, Point d) {
    const int o1 = orient(a, b, c), o2 = orient(a, b, d);
    const int o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

long count_polyline_intersections(const PolyLoop& loop, const std::vector<Point>& path) {
    const auto& v = loop.vertices;
    const std::size_t n = v.size();
    long count = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j + 1 < path.size(); ++j)
            if (segments_intersect(v[i], v[(i + 1) % n], path[j], path[j + 1])) ++count;
    return count;
}

} // namespace rwls
