#include "rwls/lamination.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rwls {

void validate_punctures(const PunctureSet& ps) {
    if (ps.punctures.size() < 2) throw std::invalid_argument("punctures: need at least two");
    double prev = 0.0;
    for (const Point& p : ps.punctures) {
        if (!(p.y > 0.0)) throw std::invalid_argument("punctures: must lie in the upper half plane");
        const double rho = norm(p);
        if (!(rho > prev)) throw std::invalid_argument("punctures: moduli must strictly increase");
        prev = rho;
    }
}

namespace {

std::vector<Point> spiral_path(Point a, Point b, int steps = 64) {
    const double ra = norm(a), rb = norm(b);
    const double ta = std::atan2(a.y, a.x), tb = std::atan2(b.y, b.x);
    std::vector<Point> path;
    path.reserve(steps + 1);
    for (int s = 0; s <= steps; ++s) {
        const double t = static_cast<double>(s) / steps;
        const double rho = std::pow(ra, 1.0 - t) * std::pow(rb, t);
        const double th = ta + t * (tb - ta);
        path.push_back({rho * std::cos(th), rho * std::sin(th)});
    }
    return path;
}

std::vector<Point> circle_drop(Point p, bool to_left, int steps = 64) {
    const double rho = norm(p);
    const double t0 = std::atan2(p.y, p.x);
    const double t1 = to_left ? M_PI : 0.0;
    std::vector<Point> path;
    path.reserve(steps + 1);
    for (int s = 0; s <= steps; ++s) {
        const double t = t0 + (t1 - t0) * s / steps;
        path.push_back({rho * std::cos(t), rho * std::sin(t)});
    }
    return path;
}

} // namespace

Triangulation build_triangulation(const PunctureSet& ps) {
    validate_punctures(ps);
    const int n = static_cast<int>(ps.punctures.size());
    Triangulation tri;
    for (int i = 0; i + 1 < n; ++i) {
        TriEdge e;
        e.from = i;
        e.to = i + 1;
        e.path = spiral_path(ps.punctures[i], ps.punctures[i + 1]);
        tri.edges.push_back(std::move(e));
    }
    for (int i = 0; i < n; ++i)
        for (int side = 0; side < 2; ++side) { // 0: drop right, 1: drop left
            if (i == 0 && side == 1) continue;
            if (i == n - 1 && side == 0) continue;
            TriEdge e;
            e.from = i;
            e.to = -1;
            e.boundary_arc = true;
            e.path = circle_drop(ps.punctures[i], side == 1);
            tri.edges.push_back(std::move(e));
        }
    return tri;
}

Lamination extract_lamination(const std::vector<PolyLoop>& loops, const PunctureSet& ps) {
    validate_punctures(ps);
    Lamination out;
    for (std::size_t li = 0; li < loops.size(); ++li) {
        std::vector<int> enclosed;
        for (std::size_t pi = 0; pi < ps.punctures.size(); ++pi)
            if (winding_number(loops[li], ps.punctures[pi]) != 0)
                enclosed.push_back(static_cast<int>(pi));
        if (enclosed.size() >= 2) {
            out.kept.push_back(li);
            out.enclosed.push_back(std::move(enclosed));
        }
    }
    return out;
}

ComplexityBound complexity_bound(const std::vector<PolyLoop>& loops, const PunctureSet& ps) {
    const Lamination lam = extract_lamination(loops, ps);
    const Triangulation tri = build_triangulation(ps);
    const int n = static_cast<int>(ps.punctures.size());
    ComplexityBound out;
    out.per_annulus.assign(n - 1, 0);
    for (int i = 0; i + 1 < n; ++i) {
        const Annulus ann{{0.0, 0.0}, norm(ps.punctures[i]), norm(ps.punctures[i + 1])};
        for (std::size_t k : lam.kept)
            out.per_annulus[i] += crossing_count_single(loops[k], ann).count;
    }
    long total = 0;
    for (long v : out.per_annulus) total += v;
    out.bound = 6L * (n - 1) * total;
    for (std::size_t k : lam.kept)
        for (const TriEdge& e : tri.edges)
            out.raw_intersections += count_polyline_intersections(loops[k], e.path);
    return out;
}

std::vector<PolyLoop> concentric_representatives(const std::vector<std::pair<int, int>>& ranges,
                                                 const PunctureSet& ps) {
    validate_punctures(ps);
    const int n = static_cast<int>(ps.punctures.size());
    std::vector<double> rho(n);
    for (int i = 0; i < n; ++i) rho[i] = norm(ps.punctures[i]);

    // Laminar check + nesting depth.
    const std::size_t m = ranges.size();
    std::vector<int> depth(m, 0);
    for (std::size_t a = 0; a < m; ++a) {
        const auto [a0, a1] = ranges[a];
        if (a0 < 0 || a1 >= n || a0 >= a1)
            throw std::invalid_argument("concentric_representatives: bad range");
        for (std::size_t b = 0; b < m; ++b) {
            if (a == b) continue;
            const auto [b0, b1] = ranges[b];
            const bool nested = (b0 <= a0 && a1 <= b1) || (a0 <= b0 && b1 <= a1);
            const bool disjoint = a1 < b0 || b1 < a0;
            if (!nested && !disjoint)
                throw std::invalid_argument("concentric_representatives: family is not laminar");
            if (b0 <= a0 && a1 <= b1 && !(b0 == a0 && b1 == a1)) ++depth[a];
        }
    }

    double min_gap = rho[0];
    for (int i = 0; i + 1 < n; ++i) min_gap = std::min(min_gap, rho[i + 1] - rho[i]);
    double arg_room = M_PI;
    for (const Point& p : ps.punctures) {
        const double t = std::atan2(p.y, p.x);
        arg_room = std::min({arg_room, t, M_PI - t});
    }

    std::vector<PolyLoop> out;
    for (std::size_t k = 0; k < m; ++k) {
        const auto [i, j] = ranges[k];
        const double margin = 0.45 * min_gap / (depth[k] + 1.0);
        const double alpha = arg_room * (depth[k] + 1.0) / (static_cast<double>(m) + 2.0);
        if (!(alpha < arg_room))
            throw std::invalid_argument("concentric_representatives: nesting too deep for puncture angles");
        const double a = rho[i] - margin, b = rho[j] + margin;
        PolyLoop loop;
        loop.id = k;
        const int steps = 48;
        for (int s = 0; s <= steps; ++s) { // outer arc, alpha -> pi - alpha
            const double t = alpha + (M_PI - 2.0 * alpha) * s / steps;
            loop.vertices.push_back({b * std::cos(t), b * std::sin(t)});
        }
        for (int s = steps; s >= 0; --s) { // inner arc, pi - alpha -> alpha
            const double t = alpha + (M_PI - 2.0 * alpha) * s / steps;
            loop.vertices.push_back({a * std::cos(t), a * std::sin(t)});
        }
        out.push_back(std::move(loop));
    }
    return out;
}

} // namespace rwls
