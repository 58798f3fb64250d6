#include "rwls/lattice.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rwls {

int GridDomain::site_count() const {
    int n = 0;
    for (std::uint8_t m : mask) n += m != 0;
    return n;
}

GridDomain GridDomain::rect(int w, int h, double mesh) {
    GridDomain d;
    d.mesh = mesh;
    d.width = w;
    d.height = h;
    d.mask.assign(static_cast<std::size_t>(w) * h, 1);
    return d;
}

GridDomain GridDomain::halfplane_strip(int w, int h, double mesh) {
    GridDomain d = rect(w, h, mesh);
    d.origin_y = 1; // first row one mesh step above the real axis
    return d;
}

GridDomain GridDomain::annulus_shape(double inner_r, double outer_r, double mesh) {
    if (!(0.0 <= inner_r && inner_r < outer_r)) throw std::invalid_argument("annulus_shape: bad radii");
    const int m = static_cast<int>(std::ceil(outer_r / mesh));
    GridDomain d;
    d.mesh = mesh;
    d.width = d.height = 2 * m + 1;
    d.origin_x = d.origin_y = -m;
    d.mask.assign(static_cast<std::size_t>(d.width) * d.height, 0);
    for (int j = 0; j < d.height; ++j)
        for (int i = 0; i < d.width; ++i) {
            const double r = norm(d.site_point(i, j));
            if (r > inner_r && r < outer_r) d.mask[d.index(i, j)] = 1;
        }
    return d;
}

GridDomain GridDomain::from_text(std::istream& in) {
    GridDomain d;
    std::string line;
    std::vector<std::string> rows;
    bool have_mesh = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("mesh=", 0) == 0) {
            d.mesh = std::stod(line.substr(5));
            have_mesh = true;
        } else if (line.rfind("origin=", 0) == 0) {
            std::istringstream ss(line.substr(7));
            ss >> d.origin_x >> d.origin_y;
        } else if (line.find_first_not_of("#.") == std::string::npos) {
            rows.push_back(line);
        } else {
            throw std::invalid_argument("GridDomain::from_text: bad line: " + line);
        }
    }
    if (!have_mesh || rows.empty()) throw std::invalid_argument("GridDomain::from_text: missing mesh or rows");
    d.height = static_cast<int>(rows.size());
    d.width = static_cast<int>(rows[0].size());
    d.mask.assign(static_cast<std::size_t>(d.width) * d.height, 0);
    for (int j = 0; j < d.height; ++j) {
        const std::string& row = rows[j]; // first text row is the top (largest j)
        if (static_cast<int>(row.size()) != d.width)
            throw std::invalid_argument("GridDomain::from_text: ragged rows");
        for (int i = 0; i < d.width; ++i)
            if (row[i] == '#') d.mask[d.index(i, d.height - 1 - j)] = 1;
    }
    return d;
}

void GridDomain::to_text(std::ostream& out) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "mesh=%.17g\n", mesh);
    out << buf;
    out << "origin=" << origin_x << ' ' << origin_y << '\n';
    for (int j = height - 1; j >= 0; --j) {
        for (int i = 0; i < width; ++i) out << (mask[index(i, j)] ? '#' : '.');
        out << '\n';
    }
}

GridDomain GridDomain::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("GridDomain::load: cannot open " + path);
    return from_text(in);
}

KernelSlice build_kernel(const GridDomain& dom, int root_i, int root_j, int max_len) {
    if (!dom.inside(root_i, root_j)) throw std::invalid_argument("build_kernel: root outside domain");
    KernelSlice k;
    k.root_i = root_i;
    k.root_j = root_j;
    k.max_len = max_len;
    k.x0 = std::max(0, root_i - max_len);
    k.y0 = std::max(0, root_j - max_len);
    k.w = std::min(dom.width - 1, root_i + max_len) - k.x0 + 1;
    k.h = std::min(dom.height - 1, root_j + max_len) - k.y0 + 1;
    const int cells = k.w * k.h;
    k.layer.assign(max_len + 1, std::vector<double>(cells, 0.0));
    k.layer[0][(root_j - k.y0) * k.w + (root_i - k.x0)] = 1.0;
    for (int step = 0; step < max_len; ++step) {
        const std::vector<double>& prev = k.layer[step];
        std::vector<double>& cur = k.layer[step + 1];
        for (int j = 0; j < k.h; ++j)
            for (int i = 0; i < k.w; ++i) {
                if (!dom.inside(k.x0 + i, k.y0 + j)) continue;
                double s = 0.0;
                if (i > 0 && dom.inside(k.x0 + i - 1, k.y0 + j)) s += prev[j * k.w + i - 1];
                if (i + 1 < k.w && dom.inside(k.x0 + i + 1, k.y0 + j)) s += prev[j * k.w + i + 1];
                if (j > 0 && dom.inside(k.x0 + i, k.y0 + j - 1)) s += prev[(j - 1) * k.w + i];
                if (j + 1 < k.h && dom.inside(k.x0 + i, k.y0 + j + 1)) s += prev[(j + 1) * k.w + i];
                cur[j * k.w + i] = 0.25 * s;
            }
    }
    return k;
}

LoopMassTable loop_mass(const GridDomain& dom, int L_max) {
    if (L_max < 2 || L_max % 2 != 0) throw std::invalid_argument("loop_mass: L_max must be even and >= 2");
    LoopMassTable t;
    t.L_max = L_max;
    t.truncation_bound = full_plane_return_tail(L_max);
    const std::size_t sites = dom.mask.size();
    t.mass.assign(sites, 0.0);
    t.length_cdf.assign(sites, {});

    std::vector<double> prev, cur;
    for (int rj = 0; rj < dom.height; ++rj)
        for (int ri = 0; ri < dom.width; ++ri) {
            if (!dom.inside(ri, rj)) continue;
            const int x0 = std::max(0, ri - L_max / 2);
            const int y0 = std::max(0, rj - L_max / 2);
            const int w = std::min(dom.width - 1, ri + L_max / 2) - x0 + 1;
            const int h = std::min(dom.height - 1, rj + L_max / 2) - y0 + 1;
            prev.assign(static_cast<std::size_t>(w) * h, 0.0);
            cur.assign(prev.size(), 0.0);
            const int root_local = (rj - y0) * w + (ri - x0);
            prev[root_local] = 1.0;
            std::vector<double> cdf(L_max / 2, 0.0);
            double acc = 0.0;
            for (int step = 1; step <= L_max; ++step) {
                for (int j = 0; j < h; ++j)
                    for (int i = 0; i < w; ++i) {
                        if (!dom.inside(x0 + i, y0 + j)) {
                            cur[j * w + i] = 0.0;
                            continue;
                        }
                        double s = 0.0;
                        if (i > 0 && dom.inside(x0 + i - 1, y0 + j)) s += prev[j * w + i - 1];
                        if (i + 1 < w && dom.inside(x0 + i + 1, y0 + j)) s += prev[j * w + i + 1];
                        if (j > 0 && dom.inside(x0 + i, y0 + j - 1)) s += prev[(j - 1) * w + i];
                        if (j + 1 < h && dom.inside(x0 + i, y0 + j + 1)) s += prev[(j + 1) * w + i];
                        cur[j * w + i] = 0.25 * s;
                    }
                std::swap(prev, cur);
                if (step % 2 == 0) {
                    acc += prev[root_local] / step;
                    cdf[step / 2 - 1] = acc;
                }
            }
            const int idx = dom.index(ri, rj);
            t.mass[idx] = acc;
            t.length_cdf[idx] = std::move(cdf);
        }
    return t;
}

double full_plane_return_tail(int L) {
    if (L < 0 || L % 2 != 0) throw std::invalid_argument("full_plane_return_tail: L must be even");
    const long N = std::max<long>(L, 200000);
    double a = 0.5; // a_n = C(2n, n) 4^-n, starting at n = 1
    double tail = 0.0;
    for (long n = 1; n <= N; ++n) {
        if (2 * n > L) tail += a * a / (2.0 * n);
        a *= (2.0 * n + 1.0) / (2.0 * n + 2.0);
    }
    return tail + 1.0 / (2.0 * M_PI * N); // a_n^2 <= 1/(pi n) bounds the rest
}

int choose_L_max(double target) {
    if (target <= 0.0) throw std::invalid_argument("choose_L_max: target must be positive");
    for (int L = 2;; L += 2)
        if (full_plane_return_tail(L) < target) return L;
}

PolyLoop sample_bridge(const GridDomain& dom, const KernelSlice& kernel, int len, Stream& rng) {
    if (len < 2 || len % 2 != 0 || len > kernel.max_len)
        throw std::invalid_argument("sample_bridge: bad length");
    PolyLoop loop;
    loop.vertices.reserve(len);
    int ci = kernel.root_i, cj = kernel.root_j;
    for (int remaining = len; remaining >= 1; --remaining) {
        loop.vertices.push_back(dom.site_point(ci, cj));
        const double denom = kernel.at(remaining, ci, cj);
        if (denom <= 0.0) throw std::runtime_error("sample_bridge: zero kernel mass");
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        double probs[4];
        double total = 0.0;
        for (int d = 0; d < 4; ++d) {
            const int ni = ci + di[d], nj = cj + dj[d];
            probs[d] = dom.inside(ni, nj) ? 0.25 * kernel.at(remaining - 1, ni, nj) / denom : 0.0;
            total += probs[d];
        }
        if (std::abs(total - 1.0) > 1e-9) throw std::runtime_error("sample_bridge: step law not normalized");
        double u = rng.u01() * total;
        int pick = -1;
        for (int d = 0; d < 4; ++d) {
            if (probs[d] <= 0.0) continue;
            pick = d;
            if (u <= probs[d] + 1e-12) break;
            u -= probs[d];
        }
        if (pick < 0) throw std::runtime_error("sample_bridge: no admissible step");
        ci += di[pick];
        cj += dj[pick];
    }
    if (ci != kernel.root_i || cj != kernel.root_j) throw std::runtime_error("sample_bridge: did not close");
    return loop;
}

namespace {
std::uint64_t domain_hash(const GridDomain& dom, int L_max) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mixin = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ULL;
    };
    mixin(static_cast<std::uint64_t>(dom.width));
    mixin(static_cast<std::uint64_t>(dom.height));
    mixin(static_cast<std::uint64_t>(dom.origin_x + (1 << 20)));
    mixin(static_cast<std::uint64_t>(dom.origin_y + (1 << 20)));
    mixin(static_cast<std::uint64_t>(L_max));
    std::uint64_t mbits;
    static_assert(sizeof mbits == sizeof dom.mesh);
    __builtin_memcpy(&mbits, &dom.mesh, sizeof mbits);
    mixin(mbits);
    for (std::uint8_t m : dom.mask) mixin(m);
    return h;
}
} // namespace

bool load_mass_cache(const std::string& path, const GridDomain& dom, int L_max, LoopMassTable& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::uint64_t magic = 0, hash = 0;
    in.read(reinterpret_cast<char*>(&magic), 8);
    in.read(reinterpret_cast<char*>(&hash), 8);
    if (!in || magic != 0x4c4f4f504d415353ULL || hash != domain_hash(dom, L_max)) return false;
    out.L_max = L_max;
    out.truncation_bound = full_plane_return_tail(L_max);
    const std::size_t sites = dom.mask.size();
    out.mass.assign(sites, 0.0);
    in.read(reinterpret_cast<char*>(out.mass.data()), static_cast<std::streamsize>(sites * 8));
    out.length_cdf.assign(sites, {});
    for (std::size_t s = 0; s < sites; ++s) {
        if (!dom.mask[s]) continue;
        out.length_cdf[s].assign(L_max / 2, 0.0);
        in.read(reinterpret_cast<char*>(out.length_cdf[s].data()), static_cast<std::streamsize>(L_max / 2 * 8));
    }
    return static_cast<bool>(in);
}

void save_mass_cache(const std::string& path, const GridDomain& dom, int L_max, const LoopMassTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_mass_cache: cannot open " + path);
    const std::uint64_t magic = 0x4c4f4f504d415353ULL;
    const std::uint64_t hash = domain_hash(dom, L_max);
    out.write(reinterpret_cast<const char*>(&magic), 8);
    out.write(reinterpret_cast<const char*>(&hash), 8);
    out.write(reinterpret_cast<const char*>(table.mass.data()),
              static_cast<std::streamsize>(table.mass.size() * 8));
    for (std::size_t s = 0; s < dom.mask.size(); ++s) {
        if (!dom.mask[s]) continue;
        out.write(reinterpret_cast<const char*>(table.length_cdf[s].data()),
                  static_cast<std::streamsize>(L_max / 2 * 8));
    }
}

} // namespace rwls
