#include "rwls/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>

namespace rwls {

Point power_map(Point z, double eta) {
    if (!(eta > 0.0 && eta <= M_PI)) throw std::invalid_argument("power_map: eta must lie in (0, pi]");
    const double rho = norm(z);
    if (rho == 0.0) return {0.0, 0.0};
    const double theta = std::atan2(z.y, z.x);
    const double p = M_PI / eta;
    const double s = std::pow(rho, p);
    return {s * std::cos(theta * p), s * std::sin(theta * p)};
}

double RadiiSchedule::exponent(double beta) const {
    if (!(beta >= 0.0 && beta <= 2.0)) throw std::invalid_argument("RadiiSchedule: beta in [0,2]");
    if (beta <= 1.0) return ((1.0 - beta) * M_PI + beta * eta) / eta;
    return ((2.0 - beta) * M_PI + (beta - 1.0) * eta) / M_PI;
}

double RadiiSchedule::inner(double beta) const {
    if (!(0.0 < r && r < 1.0 && R > 1.0)) throw std::invalid_argument("RadiiSchedule: need r < 1 < R");
    return std::pow(r, exponent(beta));
}

double RadiiSchedule::outer(double beta) const {
    if (!(0.0 < r && r < 1.0 && R > 1.0)) throw std::invalid_argument("RadiiSchedule: need r < 1 < R");
    return std::pow(R, exponent(beta));
}

Quad make_rectangle(double width, double height) {
    if (!(width > 0.0 && height > 0.0)) throw std::invalid_argument("make_rectangle: bad dimensions");
    Quad q;
    q.boundary = {{0.0, 0.0}, {width, 0.0}, {width, height}, {0.0, height}};
    q.arcs = {{{0, 1}, {1, 2}, {2, 3}, {3, 4}}}; // S0 bottom, S1 right, S2 top, S3 left
    return q;
}

Quad make_half_annulus(double inner_r, double outer_r, int arc_points) {
    if (!(0.0 < inner_r && inner_r < outer_r)) throw std::invalid_argument("make_half_annulus: bad radii");
    if (arc_points < 8) throw std::invalid_argument("make_half_annulus: too few arc points");
    Quad q;
    const int m = arc_points;
    for (int i = 0; i < m; ++i) { // outer half circle, angle 0 -> pi
        const double t = M_PI * i / (m - 1);
        q.boundary.push_back({outer_r * std::cos(t), outer_r * std::sin(t)});
    }
    for (int i = 0; i < m; ++i) { // inner half circle, angle pi -> 0
        const double t = M_PI * (m - 1 - i) / (m - 1);
        q.boundary.push_back({inner_r * std::cos(t), inner_r * std::sin(t)});
    }
    // Segments: [0, m-1) outer arc, m-1 the left bridge, [m, 2m-1) inner arc,
    // 2m-1 the right bridge. S0 = inner circle, S2 = outer circle.
    q.arcs = {{{m, 2 * m - 1}, {2 * m - 1, 2 * m}, {0, m - 1}, {m - 1, m}}};
    return q;
}

namespace {

bool point_in_polygon(const std::vector<Point>& poly, Point p) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = poly[i], b = poly[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

struct NodeGrid {
    double h = 0.0, x0 = 0.0, y0 = 0.0;
    int nx = 0, ny = 0;
    std::vector<std::uint8_t> inside;
    std::vector<std::uint8_t> adj_arcs; // bitmask of quad arcs across blocked edges

    int id(int i, int j) const { return j * nx + i; }
    bool in(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny && inside[id(i, j)]; }
    Point pt(int i, int j) const { return {x0 + i * h, y0 + j * h}; }
};

int arc_of_segment(const Quad& q, int seg) {
    for (int k = 0; k < 4; ++k)
        if (seg >= q.arcs[k].first && seg < q.arcs[k].second) return k;
    throw std::invalid_argument("quad arcs do not cover the boundary");
}

NodeGrid make_grid(const Quad& q, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("make_grid: mesh must be positive");
    double bx0 = 1e300, by0 = 1e300, bx1 = -1e300, by1 = -1e300;
    for (const Point& p : q.boundary) {
        bx0 = std::min(bx0, p.x);
        by0 = std::min(by0, p.y);
        bx1 = std::max(bx1, p.x);
        by1 = std::max(by1, p.y);
    }
    NodeGrid g;
    g.h = h;
    // Irrational lattice offset keeps nodes off axis-aligned boundary pieces.
    g.x0 = bx0 + 0.31830988618379067 * h;
    g.y0 = by0 + 0.41421356237309515 * h;
    g.nx = static_cast<int>(std::floor((bx1 - g.x0) / h)) + 1;
    g.ny = static_cast<int>(std::floor((by1 - g.y0) / h)) + 1;
    if (g.nx < 2 || g.ny < 2) throw std::invalid_argument("make_grid: mesh too coarse for quad");
    g.inside.assign(static_cast<std::size_t>(g.nx) * g.ny, 0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            g.inside[g.id(i, j)] = point_in_polygon(q.boundary, g.pt(i, j));

    const std::size_t nseg = q.boundary.size();
    g.adj_arcs.assign(g.inside.size(), 0);
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!g.inside[g.id(i, j)]) continue;
            for (int d = 0; d < 4; ++d) {
                if (g.in(i + di[d], j + dj[d])) continue;
                const Point mid = g.pt(i, j) + 0.5 * g.h * Point{double(di[d]), double(dj[d])};
                double best = 1e300;
                int best_seg = 0;
                for (std::size_t s = 0; s < nseg; ++s) {
                    const double dd = segment_min_dist(q.boundary[s], q.boundary[(s + 1) % nseg], mid);
                    if (dd < best) {
                        best = dd;
                        best_seg = static_cast<int>(s);
                    }
                }
                g.adj_arcs[g.id(i, j)] |= static_cast<std::uint8_t>(1 << arc_of_segment(q, best_seg));
            }
        }
    return g;
}

// role per node: 0 or 1 for Dirichlet, -1 for free.
struct FieldResult {
    std::vector<double> u;
    ModulusResult stats;
};

FieldResult solve_field(const NodeGrid& g, const std::function<int(int)>& role, double tol,
                        int max_iter) {
    const std::size_t n = g.inside.size();
    std::vector<int> free_index(n, -1);
    std::vector<int> free_nodes;
    std::vector<double> u(n, 0.0);
    std::vector<std::uint8_t> dirichlet(n, 0);
    int n_dirichlet = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int nd = g.id(i, j);
            if (!g.inside[nd]) continue;
            const int r = role(nd);
            if (r >= 0) {
                dirichlet[nd] = 1;
                u[nd] = r;
                ++n_dirichlet;
            } else {
                free_index[nd] = static_cast<int>(free_nodes.size());
                free_nodes.push_back(nd);
            }
        }
    if (n_dirichlet == 0) throw std::runtime_error("solve_field: no boundary conditions");

    const std::size_t m = free_nodes.size();
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    auto neighbors = [&](int nd, auto&& fn) {
        const int i = nd % g.nx, j = nd / g.nx;
        for (int d = 0; d < 4; ++d)
            if (g.in(i + di[d], j + dj[d])) fn(g.id(i + di[d], j + dj[d]));
    };
    std::vector<double> b(m, 0.0), x(m, 0.0);
    for (std::size_t k = 0; k < m; ++k)
        neighbors(free_nodes[k], [&](int nb) {
            if (dirichlet[nb]) b[k] += u[nb];
        });
    auto matvec = [&](const std::vector<double>& v, std::vector<double>& out) {
        for (std::size_t k = 0; k < m; ++k) {
            double acc = 0.0;
            int deg = 0;
            neighbors(free_nodes[k], [&](int nb) {
                ++deg;
                if (free_index[nb] >= 0) acc += v[free_index[nb]];
            });
            out[k] = deg * v[k] - acc;
        }
    };

    std::vector<double> r = b, p = b, Ap(m, 0.0);
    auto dot = [](const std::vector<double>& a, const std::vector<double>& c) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * c[k];
        return s;
    };
    const double bnorm = std::sqrt(std::max(dot(b, b), 1e-300));
    double rs = dot(r, r);
    int it = 0;
    while (std::sqrt(rs) / bnorm > tol && it < max_iter) {
        matvec(p, Ap);
        const double alpha = rs / std::max(dot(p, Ap), 1e-300);
        for (std::size_t k = 0; k < m; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * Ap[k];
        }
        const double rs_new = dot(r, r);
        const double beta = rs_new / rs;
        rs = rs_new;
        for (std::size_t k = 0; k < m; ++k) p[k] = r[k] + beta * p[k];
        ++it;
    }
    const double rel = std::sqrt(rs) / bnorm;
    if (rel > std::max(tol * 100.0, 1e-6))
        throw std::runtime_error("solve_field: conjugate gradient did not converge");
    for (std::size_t k = 0; k < m; ++k) u[free_nodes[k]] = x[k];

    FieldResult out;
    out.stats.iterations = it;
    out.stats.residual = rel;
    out.stats.nodes = static_cast<int>(m) + n_dirichlet;
    double energy = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!g.in(i, j)) continue;
            if (g.in(i + 1, j)) energy += std::pow(u[g.id(i + 1, j)] - u[g.id(i, j)], 2.0);
            if (g.in(i, j + 1)) energy += std::pow(u[g.id(i, j + 1)] - u[g.id(i, j)], 2.0);
        }
    out.stats.energy = energy;
    if (energy <= 0.0) throw std::runtime_error("solve_field: zero Dirichlet energy");
    out.stats.modulus = 1.0 / energy;
    out.u = std::move(u);
    return out;
}

struct DijkstraResult {
    double dist = 0.0;
    std::vector<Point> path;
};

DijkstraResult shortest_inner_path(const NodeGrid& g, const std::vector<std::uint8_t>& source,
                                   const std::vector<std::uint8_t>& target) {
    const std::size_t n = g.inside.size();
    std::vector<double> dist(n, 1e300);
    std::vector<int> prev(n, -1);
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    bool any_source = false, any_target = false;
    for (std::size_t nd = 0; nd < n; ++nd) {
        if (source[nd]) {
            dist[nd] = 0.0;
            pq.push({0.0, static_cast<int>(nd)});
            any_source = true;
        }
        any_target |= target[nd] != 0;
    }
    if (!any_source || !any_target)
        throw std::runtime_error("shortest_inner_path: empty source or target set");
    const double diag = g.h * std::sqrt(2.0);
    int hit = -1;
    while (!pq.empty()) {
        const auto [d, nd] = pq.top();
        pq.pop();
        if (d > dist[nd]) continue;
        if (target[nd]) {
            hit = nd;
            break;
        }
        const int i = nd % g.nx, j = nd / g.nx;
        for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) {
                if (di == 0 && dj == 0) continue;
                if (!g.in(i + di, j + dj)) continue;
                const int nb = g.id(i + di, j + dj);
                const double w = (di != 0 && dj != 0) ? diag : g.h;
                if (dist[nd] + w < dist[nb]) {
                    dist[nb] = dist[nd] + w;
                    prev[nb] = nd;
                    pq.push({dist[nb], nb});
                }
            }
    }
    if (hit < 0) throw std::runtime_error("shortest_inner_path: target unreachable");
    DijkstraResult out;
    out.dist = dist[hit];
    for (int nd = hit; nd >= 0; nd = prev[nd]) out.path.push_back(g.pt(nd % g.nx, nd / g.nx));
    std::reverse(out.path.begin(), out.path.end());
    return out;
}

Point path_midpoint(const std::vector<Point>& path, double total) {
    double walked = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const double seg = dist(path[i], path[i + 1]);
        if (walked + seg >= 0.5 * total) {
            const double t = seg > 0.0 ? (0.5 * total - walked) / seg : 0.0;
            return path[i] + t * (path[i + 1] - path[i]);
        }
        walked += seg;
    }
    return path.back();
}

} // namespace

ModulusResult discrete_modulus(const Quad& quad, double mesh, double tol, int max_iter) {
    const NodeGrid g = make_grid(quad, mesh);
    auto role = [&g](int nd) -> int {
        const std::uint8_t arcs = g.adj_arcs[nd];
        if ((arcs & 0b0001) && (arcs & 0b0100))
            throw std::runtime_error("discrete_modulus: node touches both S0 and S2; refine the mesh");
        if (arcs & 0b0001) return 0;
        if (arcs & 0b0100) return 1;
        return -1;
    };
    return solve_field(g, role, tol, max_iter).stats;
}

PinchResult pinch_annulus(const Quad& quad, double mesh) {
    const NodeGrid g = make_grid(quad, mesh);
    std::vector<std::uint8_t> src(g.inside.size(), 0), dst(g.inside.size(), 0);
    for (std::size_t nd = 0; nd < g.inside.size(); ++nd) {
        src[nd] = (g.adj_arcs[nd] & 0b0010) != 0;
        dst[nd] = (g.adj_arcs[nd] & 0b1000) != 0;
    }
    const DijkstraResult d = shortest_inner_path(g, src, dst);
    PinchResult out;
    out.d1 = d.dist;
    out.path = d.path;
    out.annulus = {path_midpoint(d.path, d.dist), d.dist, 2.0 * d.dist};
    return out;
}

QuadCover quad_annuli_cover(const Quad& quad, double mesh) {
    const NodeGrid g = make_grid(quad, mesh);
    // Conjugate coordinate: harmonic with 0 on S1, 1 on S3; it parametrizes S0
    // and S2 monotonically and splits them into K equal-coordinate bins.
    auto dual_role = [&g](int nd) -> int {
        const std::uint8_t arcs = g.adj_arcs[nd];
        if (arcs & 0b0010) return 0;
        if (arcs & 0b1000) return 1;
        return -1;
    };
    const FieldResult dual = solve_field(g, dual_role, 1e-10, 50000);

    QuadCover cover;
    for (std::size_t nd = 0; nd < g.inside.size(); ++nd)
        if (g.adj_arcs[nd] & 0b0101) {
            cover.coord_points.push_back(g.pt(static_cast<int>(nd) % g.nx, static_cast<int>(nd) / g.nx));
            cover.coord_values.push_back(dual.u[nd]);
        }

    const double threshold = 40.0;
    for (int K = 1; K <= 64; K *= 2) {
        std::vector<double> moduli(static_cast<std::size_t>(K) * K, 0.0);
        bool ok = true;
        for (int i = 0; i < K && ok; ++i)
            for (int j = 0; j < K && ok; ++j) {
                auto role = [&](int nd) -> int {
                    const std::uint8_t arcs = g.adj_arcs[nd];
                    const double v = dual.u[nd];
                    if ((arcs & 0b0001) && v * K >= i && v * K <= i + 1) return 0;
                    if ((arcs & 0b0100) && v * K >= j && v * K <= j + 1) return 1;
                    return -1;
                };
                const FieldResult f = solve_field(g, role, 1e-10, 50000);
                moduli[static_cast<std::size_t>(i) * K + j] = f.stats.modulus;
                if (f.stats.modulus < threshold) ok = false;
            }
        if (!ok) continue;

        cover.K = K;
        cover.sub_moduli = std::move(moduli);
        cover.annuli.resize(static_cast<std::size_t>(K) * K);
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < K; ++j) {
                // Complementary boundary pieces flanking the two sub-arcs.
                std::vector<std::uint8_t> low(g.inside.size(), 0), high(g.inside.size(), 0);
                for (std::size_t nd = 0; nd < g.inside.size(); ++nd) {
                    const std::uint8_t arcs = g.adj_arcs[nd];
                    if (!arcs) continue;
                    const double v = dual.u[nd];
                    const bool s0 = (arcs & 0b0001) != 0, s2 = (arcs & 0b0100) != 0;
                    if ((arcs & 0b0010) || (s0 && v * K < i) || (s2 && v * K < j)) low[nd] = 1;
                    if ((arcs & 0b1000) || (s0 && v * K > i + 1) || (s2 && v * K > j + 1)) high[nd] = 1;
                }
                const DijkstraResult d = shortest_inner_path(g, low, high);
                cover.annuli[static_cast<std::size_t>(i) * K + j] = {path_midpoint(d.path, d.dist),
                                                                     d.dist, 2.0 * d.dist};
            }
        return cover;
    }
    throw std::runtime_error("quad_annuli_cover: sub-family modulus threshold unreachable at K = 64");
}

int cover_bin(const QuadCover& cover, Point p) {
    if (cover.coord_points.empty()) throw std::runtime_error("cover_bin: empty cover");
    double best = 1e300, value = 0.0;
    for (std::size_t k = 0; k < cover.coord_points.size(); ++k) {
        const double d = dist(cover.coord_points[k], p);
        if (d < best) {
            best = d;
            value = cover.coord_values[k];
        }
    }
    return std::clamp(static_cast<int>(std::floor(value * cover.K)), 0, cover.K - 1);
}

std::vector<Annulus> sector_cover(const Annulus& a, const RadiiSchedule& base) {
    (void)base;
    const double scale = a.outer_r;
    if (!(scale > 0.0 && a.inner_r > 0.0 && a.inner_r < scale))
        throw std::invalid_argument("sector_cover: bad annulus");
    if (std::abs(a.center.x) > 1e-9 * scale)
        throw std::invalid_argument("sector_cover: center must lie on the imaginary axis");
    const double y = a.center.y / scale;
    if (!(y >= 0.0 && y <= 2.0))
        throw std::invalid_argument("sector_cover: center height must lie in [0, 2R]");
    if (y == 0.0) return {a};
    const double r = a.inner_r / scale;
    const int k = static_cast<int>(std::ceil(4.0 / (1.0 - r))) + 1;
    std::vector<Annulus> out;
    out.reserve(k);
    for (int j = 1; j <= k; ++j) {
        const double yj = (j - 1) * (1.0 - r) / 2.0;
        out.push_back({{a.center.x, scale * yj}, scale * (3.0 * r + 1.0) / 4.0,
                       scale * (r + 3.0) / 4.0});
    }
    return out;
}

} // namespace rwls
