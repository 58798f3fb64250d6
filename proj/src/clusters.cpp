#include "rwls/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace rwls {

namespace {

struct DSU {
    std::vector<int> parent;
    explicit DSU(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::uint64_t cell_key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

// Integer x2-refined coordinates of a loop's vertices; throws off-lattice input.
std::vector<std::pair<int, int>> refined_vertices(const PolyLoop& loop, double mesh) {
    std::vector<std::pair<int, int>> out;
    out.reserve(loop.vertices.size());
    for (const Point& p : loop.vertices) {
        const double ax = 2.0 * p.x / mesh, by = 2.0 * p.y / mesh;
        const int a = static_cast<int>(std::lround(ax)), b = static_cast<int>(std::lround(by));
        if (std::abs(ax - a) > 1e-9 || std::abs(by - b) > 1e-9 || a % 2 != 0 || b % 2 != 0)
            throw std::invalid_argument("build_clusters: loop vertex off the lattice");
        out.emplace_back(a, b);
    }
    return out;
}

// All refined cells met by the loop: vertex cells and edge midpoints.
void trace_cells(const std::vector<std::pair<int, int>>& rv, std::unordered_set<std::uint64_t>& cells) {
    const std::size_t n = rv.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto [a1, b1] = rv[i];
        const auto [a2, b2] = rv[(i + 1) % n];
        if (std::abs(a1 - a2) + std::abs(b1 - b2) != 2)
            throw std::invalid_argument("build_clusters: loop step is not a lattice edge");
        cells.insert(cell_key(a1, b1));
        cells.insert(cell_key((a1 + a2) / 2, (b1 + b2) / 2));
    }
}

struct CellMetrics {
    double lo, hi; // exact min/max distance of the closed cell square to the center
};

CellMetrics cell_metrics(int a, int b, double mesh, Point c) {
    const double h = 0.5 * mesh, q = 0.25 * mesh;
    const double dx = std::abs(c.x - a * h), dy = std::abs(c.y - b * h);
    const double mx = std::max(dx - q, 0.0), my = std::max(dy - q, 0.0);
    return {std::hypot(mx, my), std::hypot(dx + q, dy + q)};
}

void check_grazing(const Annulus& ann, double mesh) {
    for (double radius : {ann.inner_r, ann.outer_r}) {
        const double t = radius / (0.5 * mesh);
        if (std::abs(t - std::lround(t)) < 1e-9)
            throw std::invalid_argument("annulus radius grazes the refined grid");
    }
    if (!(0.0 < ann.inner_r && ann.inner_r < ann.outer_r))
        throw std::invalid_argument("annulus radii must satisfy 0 < r < R");
}

} // namespace

ClusterSet build_clusters(const std::vector<PolyLoop>& loops, double mesh) {
    ClusterSet cs;
    cs.mesh = mesh;
    cs.loops = loops;
    const int n = static_cast<int>(loops.size());
    std::vector<std::vector<std::pair<int, int>>> rv(n);
    for (int i = 0; i < n; ++i) rv[i] = refined_vertices(loops[i], mesh);

    DSU dsu(n);
    std::unordered_map<std::uint64_t, int> owner;
    for (int i = 0; i < n; ++i)
        for (const auto& [a, b] : rv[i]) {
            auto [it, fresh] = owner.try_emplace(cell_key(a, b), i);
            if (!fresh) dsu.unite(i, it->second);
        }

    std::unordered_map<int, int> root_to_cluster;
    cs.cluster_of.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        const int root = dsu.find(i);
        auto [it, fresh] = root_to_cluster.try_emplace(root, static_cast<int>(cs.members.size()));
        if (fresh) cs.members.emplace_back();
        cs.cluster_of[i] = it->second;
        cs.members[it->second].push_back(i);
    }

    const int clusters = static_cast<int>(cs.members.size());
    cs.fillings.resize(clusters);
    for (int c = 0; c < clusters; ++c) {
        std::unordered_set<std::uint64_t> cells;
        for (int li : cs.members[c]) trace_cells(rv[li], cells);
        int ax0 = 1 << 30, ay0 = 1 << 30, ax1 = -(1 << 30), ay1 = -(1 << 30);
        for (std::uint64_t key : cells) {
            const int a = static_cast<int>(static_cast<std::int32_t>(key >> 32));
            const int b = static_cast<int>(static_cast<std::int32_t>(key & 0xffffffffu));
            ax0 = std::min(ax0, a);
            ay0 = std::min(ay0, b);
            ax1 = std::max(ax1, a);
            ay1 = std::max(ay1, b);
        }
        Filling& f = cs.fillings[c];
        f.x0 = ax0 - 1;
        f.y0 = ay0 - 1;
        f.w = ax1 - ax0 + 3;
        f.h = ay1 - ay0 + 3;
        const std::size_t sz = static_cast<std::size_t>(f.w) * f.h;
        f.occ.assign(sz, 0);
        f.trace.assign(sz, 0);
        auto local = [&f](int a, int b) { return static_cast<std::size_t>(b - f.y0) * f.w + (a - f.x0); };
        for (std::uint64_t key : cells) {
            const int a = static_cast<int>(static_cast<std::int32_t>(key >> 32));
            const int b = static_cast<int>(static_cast<std::int32_t>(key & 0xffffffffu));
            f.occ[local(a, b)] = 1;
            f.trace[local(a, b)] = 1;
        }
        // Flood the complement from the padded border; unreached free cells are holes.
        std::vector<std::uint8_t> outside(sz, 0);
        std::vector<int> stack;
        auto push = [&](int a, int b) {
            if (a < f.x0 || a >= f.x0 + f.w || b < f.y0 || b >= f.y0 + f.h) return;
            const std::size_t id = local(a, b);
            if (f.occ[id] || outside[id]) return;
            outside[id] = 1;
            stack.push_back(static_cast<int>(id));
        };
        push(f.x0, f.y0);
        while (!stack.empty()) {
            const int id = stack.back();
            stack.pop_back();
            const int a = f.x0 + id % f.w, b = f.y0 + id / f.w;
            push(a + 1, b);
            push(a - 1, b);
            push(a, b + 1);
            push(a, b - 1);
        }
        for (std::size_t id = 0; id < sz; ++id)
            if (!outside[id]) f.occ[id] = 1;
    }

    // A cluster is outermost when no other cluster's filling contains it; the
    // traces are disjoint, so one trace cell decides containment.
    cs.outermost.assign(clusters, 1);
    std::vector<std::pair<int, int>> probe(clusters);
    for (int c = 0; c < clusters; ++c) probe[c] = rv[cs.members[c][0]][0];
    for (int c = 0; c < clusters; ++c)
        for (int d = 0; d < clusters && cs.outermost[c]; ++d) {
            if (d == c) continue;
            if (cs.fillings[d].contains(probe[c].first, probe[c].second)) cs.outermost[c] = 0;
        }
    return cs;
}

std::vector<PolyLoop> extract_boundaries(const ClusterSet& cs) {
    std::vector<PolyLoop> out;
    const double quarter = 0.25 * cs.mesh;
    for (std::size_t c = 0; c < cs.fillings.size(); ++c) {
        if (!cs.outermost[c]) continue;
        const Filling& f = cs.fillings[c];
        // Directed boundary edges between refined-grid corners (odd coordinates),
        // oriented with the filled region on the left.
        std::unordered_map<std::uint64_t, std::uint64_t> next;
        std::size_t edges = 0;
        for (int b = f.y0; b < f.y0 + f.h; ++b)
            for (int a = f.x0; a < f.x0 + f.w; ++a) {
                if (!f.contains(a, b)) continue;
                const int l = 2 * a - 1, r = 2 * a + 1, d = 2 * b - 1, u = 2 * b + 1;
                auto add = [&](int ua, int va, int ub, int vb) {
                    if (!next.emplace(cell_key(ua, va), cell_key(ub, vb)).second)
                        throw std::logic_error("extract_boundaries: pinched boundary corner");
                    ++edges;
                };
                if (!f.contains(a, b + 1)) add(r, u, l, u);
                if (!f.contains(a, b - 1)) add(l, d, r, d);
                if (!f.contains(a - 1, b)) add(l, u, l, d);
                if (!f.contains(a + 1, b)) add(r, d, r, u);
            }
        std::uint64_t start = next.begin()->first;
        for (const auto& [from, to] : next) start = std::min(start, from);
        std::vector<std::pair<int, int>> corners;
        std::uint64_t cur = start;
        do {
            corners.emplace_back(static_cast<std::int32_t>(cur >> 32),
                                 static_cast<std::int32_t>(cur & 0xffffffffu));
            const auto it = next.find(cur);
            if (it == next.end()) throw std::logic_error("extract_boundaries: open boundary chain");
            cur = it->second;
        } while (cur != start);
        if (corners.size() != edges)
            throw std::logic_error("extract_boundaries: filling boundary is not a single loop");
        PolyLoop loop;
        loop.id = c;
        const std::size_t m = corners.size();
        for (std::size_t i = 0; i < m; ++i) {
            const auto& prev = corners[(i + m - 1) % m];
            const auto& here = corners[i];
            const auto& nxt = corners[(i + 1) % m];
            const bool collinear = (prev.first == here.first && here.first == nxt.first) ||
                                   (prev.second == here.second && here.second == nxt.second);
            if (!collinear) loop.vertices.push_back({here.first * quarter, here.second * quarter});
        }
        out.push_back(std::move(loop));
    }
    return out;
}

namespace {

// Fragment decomposition of one filling against an open annulus: cells meeting
// the annulus, 4-linked where the shared edge segment meets the annulus.
struct FragmentLabels {
    std::vector<int> comp;        // per local cell, -1 if outside the annulus
    std::vector<std::uint64_t> touch; // per component: bit0 inner, bit1 outer
    int crossing = 0;
};

FragmentLabels fragment_components(const Filling& f, double mesh, const Annulus& ann) {
    const double r = ann.inner_r, R = ann.outer_r;
    const double h = 0.5 * mesh, q = 0.25 * mesh;
    const std::size_t sz = static_cast<std::size_t>(f.w) * f.h;
    std::vector<CellMetrics> met(sz);
    std::vector<std::uint8_t> in(sz, 0);
    for (int b = f.y0; b < f.y0 + f.h; ++b)
        for (int a = f.x0; a < f.x0 + f.w; ++a) {
            const std::size_t id = static_cast<std::size_t>(b - f.y0) * f.w + (a - f.x0);
            if (!f.occ[id]) continue;
            met[id] = cell_metrics(a, b, mesh, ann.center);
            in[id] = met[id].lo < R && met[id].hi > r;
        }
    DSU dsu(static_cast<int>(sz));
    auto edge_meets = [&](Point p0, Point p1) {
        return segment_min_dist(p0, p1, ann.center) < R && segment_max_dist(p0, p1, ann.center) > r;
    };
    for (int b = f.y0; b < f.y0 + f.h; ++b)
        for (int a = f.x0; a < f.x0 + f.w; ++a) {
            const std::size_t id = static_cast<std::size_t>(b - f.y0) * f.w + (a - f.x0);
            if (!in[id]) continue;
            if (a + 1 < f.x0 + f.w && in[id + 1] && f.occ[id + 1] &&
                edge_meets({a * h + q, b * h - q}, {a * h + q, b * h + q}))
                dsu.unite(static_cast<int>(id), static_cast<int>(id + 1));
            if (b + 1 < f.y0 + f.h && in[id + f.w] && f.occ[id + f.w] &&
                edge_meets({a * h - q, b * h + q}, {a * h + q, b * h + q}))
                dsu.unite(static_cast<int>(id), static_cast<int>(id + f.w));
        }
    FragmentLabels out;
    out.comp.assign(sz, -1);
    std::unordered_map<int, int> root_to_comp;
    std::vector<std::uint64_t> touch;
    for (std::size_t id = 0; id < sz; ++id) {
        if (!in[id]) continue;
        const int root = dsu.find(static_cast<int>(id));
        auto [it, fresh] = root_to_comp.try_emplace(root, static_cast<int>(touch.size()));
        if (fresh) touch.push_back(0);
        out.comp[id] = it->second;
        if (met[id].lo <= r) touch[it->second] |= 1;
        if (met[id].hi >= R) touch[it->second] |= 2;
    }
    out.touch = std::move(touch);
    for (std::uint64_t t : out.touch) out.crossing += t == 3;
    return out;
}

} // namespace

int comp_number(const ClusterSet& cs, const Annulus& a) {
    check_grazing(a, cs.mesh);
    int total = 0;
    for (std::size_t c = 0; c < cs.fillings.size(); ++c) {
        if (!cs.outermost[c]) continue;
        total += fragment_components(cs.fillings[c], cs.mesh, a).crossing;
    }
    return total;
}

int clus_number(const ClusterSet& cs, const Annulus& a) {
    check_grazing(a, cs.mesh);
    int total = 0;
    for (std::size_t c = 0; c < cs.members.size(); ++c) {
        if (!cs.outermost[c]) continue;
        double lo = 1e300, hi = 0.0;
        for (int li : cs.members[c]) {
            lo = std::min(lo, loop_min_dist(cs.loops[li], a.center));
            hi = std::max(hi, loop_max_dist(cs.loops[li], a.center));
        }
        total += lo <= a.inner_r && hi >= a.outer_r;
    }
    return total;
}

int cross_number_simple(const std::vector<PolyLoop>& loops, const Annulus& a, bool check_disjoint) {
    if (check_disjoint) {
        struct Box {
            double x0, y0, x1, y1;
        };
        std::vector<Box> boxes(loops.size());
        for (std::size_t i = 0; i < loops.size(); ++i) {
            Box b{1e300, 1e300, -1e300, -1e300};
            for (const Point& p : loops[i].vertices) {
                b.x0 = std::min(b.x0, p.x);
                b.y0 = std::min(b.y0, p.y);
                b.x1 = std::max(b.x1, p.x);
                b.y1 = std::max(b.y1, p.y);
            }
            boxes[i] = b;
        }
        for (std::size_t i = 0; i < loops.size(); ++i)
            for (std::size_t j = i + 1; j < loops.size(); ++j) {
                if (boxes[i].x1 < boxes[j].x0 || boxes[j].x1 < boxes[i].x0 ||
                    boxes[i].y1 < boxes[j].y0 || boxes[j].y1 < boxes[i].y0)
                    continue;
                const auto& u = loops[i].vertices;
                const auto& v = loops[j].vertices;
                for (std::size_t s = 0; s < u.size(); ++s)
                    for (std::size_t t = 0; t < v.size(); ++t)
                        if (segments_intersect(u[s], u[(s + 1) % u.size()], v[t],
                                               v[(t + 1) % v.size()]))
                            throw std::invalid_argument("cross_number_simple: loops are not disjoint");
            }
    }
    int total = 0;
    for (const PolyLoop& l : loops) total += crossing_count_single(l, a).count;
    return total;
}

long total_single_crossings(const std::vector<PolyLoop>& loops, const Annulus& a) {
    long total = 0;
    for (const PolyLoop& l : loops) total += crossing_count_single(l, a).count;
    return total;
}

bool crossing_witnesses_exist(const ClusterSet& cs, const Annulus& a) {
    check_grazing(a, cs.mesh);
    for (std::size_t c = 0; c < cs.fillings.size(); ++c) {
        if (!cs.outermost[c]) continue;
        const Filling& f = cs.fillings[c];
        const FragmentLabels frag = fragment_components(f, cs.mesh, a);
        if (frag.crossing == 0) continue;

        // Loop -> fragment components met by its trace cells.
        const std::vector<int>& mem = cs.members[c];
        std::vector<std::vector<std::pair<int, int>>> rv(mem.size());
        for (std::size_t k = 0; k < mem.size(); ++k)
            rv[k] = refined_vertices(cs.loops[mem[k]], cs.mesh);
        // Circle contact is judged on the same closed trace cells that drive
        // the fragment classification, so every counted component has seeds.
        std::vector<std::unordered_set<int>> comps_of(mem.size()), inner_of(mem.size()),
            outer_of(mem.size());
        for (std::size_t k = 0; k < mem.size(); ++k) {
            std::unordered_set<std::uint64_t> cells;
            trace_cells(rv[k], cells);
            for (std::uint64_t key : cells) {
                const int ca = static_cast<std::int32_t>(key >> 32);
                const int cb = static_cast<std::int32_t>(key & 0xffffffffu);
                const std::size_t id = static_cast<std::size_t>(cb - f.y0) * f.w + (ca - f.x0);
                if (frag.comp[id] < 0) continue;
                comps_of[k].insert(frag.comp[id]);
                const CellMetrics met = cell_metrics(ca, cb, cs.mesh, a.center);
                if (met.lo <= a.inner_r) inner_of[k].insert(frag.comp[id]);
                if (met.hi >= a.outer_r) outer_of[k].insert(frag.comp[id]);
            }
        }
        // Shared-vertex adjacency within the cluster.
        std::unordered_map<std::uint64_t, std::vector<int>> at_vertex;
        for (std::size_t k = 0; k < mem.size(); ++k)
            for (const auto& [va, vb] : rv[k]) at_vertex[cell_key(va, vb)].push_back(static_cast<int>(k));

        for (std::size_t comp = 0; comp < frag.touch.size(); ++comp) {
            if (frag.touch[comp] != 3) continue;
            std::vector<int> in_comp;
            for (std::size_t k = 0; k < mem.size(); ++k)
                if (comps_of[k].count(static_cast<int>(comp))) in_comp.push_back(static_cast<int>(k));
            std::vector<char> allowed(mem.size(), 0), seen(mem.size(), 0);
            for (int k : in_comp) allowed[k] = 1;
            std::vector<int> stack;
            bool reached_outer = false;
            for (int k : in_comp)
                if (inner_of[k].count(static_cast<int>(comp))) {
                    seen[k] = 1;
                    stack.push_back(k);
                }
            while (!stack.empty() && !reached_outer) {
                const int k = stack.back();
                stack.pop_back();
                if (outer_of[k].count(static_cast<int>(comp))) {
                    reached_outer = true;
                    break;
                }
                for (const auto& [va, vb] : rv[k])
                    for (int other : at_vertex[cell_key(va, vb)])
                        if (allowed[other] && !seen[other]) {
                            seen[other] = 1;
                            stack.push_back(other);
                        }
            }
            if (!reached_outer) return false;
        }
    }
    return true;
}

namespace {
std::vector<PolyLoop> concat(const std::vector<PolyLoop>& a, const std::vector<PolyLoop>& b) {
    std::vector<PolyLoop> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}
} // namespace

CheckLine check_component_decomposition(const std::vector<PolyLoop>& l1,
                                        const std::vector<PolyLoop>& l2, double mesh,
                                        const Annulus& outer, const Annulus& middle) {
    if (!(outer.inner_r < middle.inner_r && middle.inner_r < middle.outer_r &&
          middle.outer_r < outer.outer_r))
        throw std::invalid_argument("check_component_decomposition: annuli must be nested");
    const Annulus inner_shell{outer.center, outer.inner_r, middle.inner_r};
    const Annulus outer_shell{outer.center, middle.outer_r, outer.outer_r};
    CheckLine line;
    line.name = "component_decomposition";
    line.lhs = comp_number(build_clusters(concat(l1, l2), mesh), outer);
    long middle_touchers = 0;
    for (const PolyLoop& l : l2)
        if (loop_intersects_annulus(l, middle) && loop_inside_annulus(l, outer)) ++middle_touchers;
    line.rhs = comp_number(build_clusters(l1, mesh), middle) +
               total_single_crossings(l2, inner_shell) + total_single_crossings(l2, outer_shell) +
               middle_touchers;
    line.pass = line.lhs <= line.rhs;
    return line;
}

CheckLine check_small_loop_clusters(const std::vector<PolyLoop>& small, double mesh, double a,
                                    const Annulus& ann) {
    if (!(2.0 * a < ann.outer_r - ann.inner_r))
        throw std::invalid_argument("check_small_loop_clusters: annulus too thin for a");
    CheckLine line;
    line.name = "small_loop_cluster_bound";
    line.lhs = comp_number(build_clusters(small, mesh), ann);
    std::vector<PolyLoop> confined;
    for (const PolyLoop& l : small)
        if (loop_inside_annulus(l, ann)) confined.push_back(l);
    const Annulus shrunk{ann.center, ann.inner_r + a, ann.outer_r - a};
    line.rhs = clus_number(build_clusters(confined, mesh), shrunk);
    line.pass = line.lhs <= line.rhs;
    return line;
}

CheckLine check_cluster_union(const std::vector<PolyLoop>& l1, const std::vector<PolyLoop>& l2,
                              double mesh, const Annulus& outer, const Annulus& middle) {
    if (!(outer.inner_r <= middle.inner_r && middle.inner_r < middle.outer_r &&
          middle.outer_r <= outer.outer_r))
        throw std::invalid_argument("check_cluster_union: annuli must be nested");
    CheckLine line;
    line.name = "cluster_union_bound";
    line.lhs = clus_number(build_clusters(concat(l1, l2), mesh), outer);
    long middle_touchers = 0, shell_crossers = 0;
    const Annulus inner_shell{outer.center, outer.inner_r, middle.inner_r};
    const Annulus outer_shell{outer.center, middle.outer_r, outer.outer_r};
    for (const PolyLoop& l : l2) {
        if (loop_intersects_annulus(l, middle) && loop_inside_annulus(l, outer)) ++middle_touchers;
        const bool crosses_inner =
            inner_shell.inner_r < inner_shell.outer_r && loop_crosses_annulus(l, inner_shell);
        const bool crosses_outer =
            outer_shell.inner_r < outer_shell.outer_r && loop_crosses_annulus(l, outer_shell);
        if (crosses_inner || crosses_outer) ++shell_crossers;
    }
    line.rhs = clus_number(build_clusters(l1, mesh), middle) + middle_touchers + shell_crossers;
    line.pass = line.lhs <= line.rhs;
    return line;
}

CheckLine check_cluster_union_degenerate(const std::vector<PolyLoop>& l1,
                                         const std::vector<PolyLoop>& l2, double mesh,
                                         const Annulus& ann) {
    CheckLine line;
    line.name = "cluster_union_bound_degenerate";
    line.lhs = clus_number(build_clusters(concat(l1, l2), mesh), ann);
    long touchers = 0;
    for (const PolyLoop& l : l2)
        if (loop_intersects_annulus(l, ann)) ++touchers;
    line.rhs = clus_number(build_clusters(l1, mesh), ann) + touchers;
    line.pass = line.lhs <= line.rhs;
    return line;
}

} // namespace rwls
