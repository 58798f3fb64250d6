// Independent brute-force oracles used by the test suites. Everything here is
// deliberately slow and simple-minded so that disagreements implicate the
// library, not the test.
#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rwls/geometry.hpp"
#include "rwls/lattice.hpp"

namespace oracle {

using rwls::Annulus;
using rwls::Point;
using rwls::PolyLoop;

inline double diameter_pairwise(const PolyLoop& loop) {
    double best = 0.0;
    for (const Point& a : loop.vertices)
        for (const Point& b : loop.vertices) best = std::max(best, rwls::dist(a, b));
    return best;
}

// Winding number by ray casting with signed edge crossings of the ray y = p.y,
// x > p.x. Independent of the library's angle-sum version.
inline int winding_ray(const PolyLoop& loop, Point p) {
    const auto& v = loop.vertices;
    const std::size_t n = v.size();
    int w = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = v[i], b = v[(i + 1) % n];
        if (a.y <= p.y && b.y > p.y) {
            const double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (xint > p.x) ++w;
        } else if (a.y > p.y && b.y <= p.y) {
            const double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (xint > p.x) --w;
        }
    }
    return w;
}

// Segment/circle intersection parameters by sign-change bisection on
// |p + t d - c| - radius, scanning 4096 brackets.
inline std::vector<double> circle_hits_bisect(Point p, Point q, Point c, double radius) {
    auto f = [&](double t) { return rwls::dist(p + t * (q - p), c) - radius; };
    std::vector<double> out;
    const int grid = 4096;
    for (int k = 0; k < grid; ++k) {
        double lo = static_cast<double>(k) / grid, hi = static_cast<double>(k + 1) / grid;
        double flo = f(lo), fhi = f(hi);
        if (flo == 0.0 && k == 0) continue; // endpoint handled by neighbors
        if (flo * fhi > 0.0) continue;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (f(lo) * f(mid) <= 0.0) hi = mid;
            else lo = mid;
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

// Materialize a crossing arc as a polyline using its fractional positions.
inline std::vector<Point> arc_polyline(const PolyLoop& loop, const rwls::CrossingArc& arc) {
    const auto& v = loop.vertices;
    const int n = static_cast<int>(v.size());
    auto at = [&](double pos) {
        const int i = static_cast<int>(std::floor(pos)) % n;
        const double t = pos - std::floor(pos);
        return v[i] + t * (v[(i + 1) % n] - v[i]);
    };
    double end = arc.end_pos;
    if (end < arc.start_pos) end += n; // wraps past the root vertex
    std::vector<Point> path;
    path.push_back(at(arc.start_pos));
    for (int i = static_cast<int>(std::floor(arc.start_pos)) + 1; i <= static_cast<int>(std::floor(end));
         ++i)
        path.push_back(v[i % n]);
    path.push_back(at(end));
    return path;
}

inline bool polylines_intersect(const std::vector<Point>& a, const std::vector<Point>& b) {
    for (std::size_t i = 0; i + 1 < a.size(); ++i)
        for (std::size_t j = 0; j + 1 < b.size(); ++j)
            if (rwls::segments_intersect(a[i], a[i + 1], b[j], b[j + 1])) return true;
    return false;
}

// Maximum pairwise-disjoint subset of crossing arcs, exhaustive over bitmasks.
inline int max_disjoint_arcs(const PolyLoop& loop, const std::vector<rwls::CrossingArc>& arcs) {
    const int m = static_cast<int>(arcs.size());
    if (m > 20) throw std::invalid_argument("max_disjoint_arcs: too many arcs for brute force");
    std::vector<std::vector<Point>> paths(m);
    for (int i = 0; i < m; ++i) paths[i] = arc_polyline(loop, arcs[i]);
    std::vector<std::uint32_t> conflict(m, 0);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (polylines_intersect(paths[i], paths[j])) {
                conflict[i] |= 1u << j;
                conflict[j] |= 1u << i;
            }
    int best = 0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        bool ok = true;
        for (int i = 0; i < m && ok; ++i)
            if ((mask >> i) & 1u) ok = (mask & conflict[i]) == 0;
        if (ok) best = std::max(best, __builtin_popcount(mask));
    }
    return best;
}

// Killed-walk kernel by exhaustive path enumeration: q_k(target, root) summed
// over all k-step nearest-neighbor paths root -> target staying inside.
inline double kernel_enumerate(const rwls::GridDomain& dom, int root_i, int root_j, int ti, int tj,
                               int k) {
    double total = 0.0;
    std::function<void(int, int, int, double)> go = [&](int i, int j, int left, double w) {
        if (left == 0) {
            if (i == ti && j == tj) total += w;
            return;
        }
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d)
            if (dom.inside(i + di[d], j + dj[d])) go(i + di[d], j + dj[d], left - 1, 0.25 * w);
    };
    go(root_i, root_j, k, 1.0);
    return total;
}

// All closed k-step paths from the root, as vertex-index strings.
inline std::vector<std::vector<std::pair<int, int>>> closed_paths(const rwls::GridDomain& dom,
                                                                  int root_i, int root_j, int k) {
    std::vector<std::vector<std::pair<int, int>>> out;
    std::vector<std::pair<int, int>> cur{{root_i, root_j}};
    std::function<void(int, int, int)> go = [&](int i, int j, int left) {
        if (left == 0) {
            if (i == root_i && j == root_j) {
                out.push_back(cur);
                out.back().pop_back(); // closing vertex is implied
            }
            return;
        }
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            const int ni = i + di[d], nj = j + dj[d];
            if (!dom.inside(ni, nj)) continue;
            cur.emplace_back(ni, nj);
            go(ni, nj, left - 1);
            cur.pop_back();
        }
    };
    go(root_i, root_j, k);
    return out;
}

// Leibniz determinant, n <= 8.
inline double det_leibniz(const std::vector<std::vector<double>>& m) {
    const int n = static_cast<int>(m.size());
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    double total = 0.0;
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
        double prod = inversions % 2 ? -1.0 : 1.0;
        for (int i = 0; i < n; ++i) prod *= m[i][perm[i]];
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

// Loop clustering by shared vertices, plain BFS over exact coordinates.
inline std::vector<int> cluster_bfs(const std::vector<PolyLoop>& loops) {
    const int n = static_cast<int>(loops.size());
    auto share = [&](const PolyLoop& a, const PolyLoop& b) {
        for (const Point& p : a.vertices)
            for (const Point& q : b.vertices)
                if (p.x == q.x && p.y == q.y) return true;
        return false;
    };
    std::vector<int> label(n, -1);
    int next = 0;
    for (int s = 0; s < n; ++s) {
        if (label[s] >= 0) continue;
        label[s] = next;
        std::vector<int> stack{s};
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            for (int j = 0; j < n; ++j)
                if (label[j] < 0 && share(loops[i], loops[j])) {
                    label[j] = next;
                    stack.push_back(j);
                }
        }
        ++next;
    }
    return label;
}

} // namespace oracle
