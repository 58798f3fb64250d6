#include "rwls/soup.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace rwls {

double kappa_to_lambda(double kappa) {
    if (!(kappa > 8.0 / 3.0 && kappa <= 4.0))
        throw std::invalid_argument("kappa_to_lambda: kappa must lie in (8/3, 4]");
    return (3.0 * kappa - 8.0) * (6.0 - kappa) / (2.0 * kappa);
}

SoupSampler::SoupSampler(GridDomain domain, int L_max, const std::string& cache_path)
    : dom(std::move(domain)) {
    if (cache_path.empty() || !load_mass_cache(cache_path, dom, L_max, table)) {
        table = loop_mass(dom, L_max);
        if (!cache_path.empty()) save_mass_cache(cache_path, dom, L_max, table);
    }
}

double SoupSampler::total_mass() const {
    double s = 0.0;
    for (double m : table.mass) s += m;
    return s;
}

LoopSoupSample SoupSampler::sample(double lambda, std::uint64_t seed) const {
    if (lambda <= 0.0) throw std::invalid_argument("SoupSampler::sample: lambda must be positive");
    LoopSoupSample out;
    out.config = {lambda, table.L_max, seed};
    for (int rj = 0; rj < dom.height; ++rj)
        for (int ri = 0; ri < dom.width; ++ri) {
            if (!dom.inside(ri, rj)) continue;
            const int idx = dom.index(ri, rj);
            const double m = table.mass[idx];
            if (m <= 0.0) continue;
            Stream st(seed, static_cast<std::uint64_t>(idx));
            const int count = st.poisson(lambda * m);
            if (count == 0) continue;
            const std::vector<double>& cdf = table.length_cdf[idx];
            std::vector<int> lens(count);
            int max_len = 0;
            for (int c = 0; c < count; ++c) {
                const double u = st.u01() * m;
                const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
                const int n = static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(), cdf.size() - 1)) + 1;
                lens[c] = 2 * n;
                max_len = std::max(max_len, lens[c]);
            }
            const KernelSlice kernel = build_kernel(dom, ri, rj, max_len);
            for (int c = 0; c < count; ++c) {
                PolyLoop loop = sample_bridge(dom, kernel, lens[c], st);
                loop.id = (static_cast<std::uint64_t>(idx) << 16) | static_cast<std::uint64_t>(c);
                LoopMeta meta{loop.id, ri, rj, lens[c], diameter(loop)};
                out.loops.push_back(std::move(loop));
                out.meta.push_back(meta);
            }
        }
    return out;
}

LoopSoupSample sample_soup(const GridDomain& dom, const SoupConfig& cfg) {
    SoupSampler sampler(dom, cfg.L_max);
    return sampler.sample(cfg.lambda, cfg.seed);
}

namespace {
std::pair<LoopSoupSample, LoopSoupSample> split_sample(const LoopSoupSample& s,
                                                       const std::vector<char>& keep) {
    std::pair<LoopSoupSample, LoopSoupSample> out;
    out.first.config = out.second.config = s.config;
    for (std::size_t i = 0; i < s.loops.size(); ++i) {
        LoopSoupSample& dst = keep[i] ? out.first : out.second;
        dst.loops.push_back(s.loops[i]);
        dst.meta.push_back(s.meta[i]);
    }
    return out;
}
} // namespace

std::pair<LoopSoupSample, LoopSoupSample> filter_by_diameter(const LoopSoupSample& s, double a) {
    std::vector<char> keep(s.loops.size());
    for (std::size_t i = 0; i < s.loops.size(); ++i) keep[i] = s.meta[i].diam < a;
    return split_sample(s, keep);
}

std::pair<LoopSoupSample, LoopSoupSample> restrict_to(const LoopSoupSample& s, const GridDomain& sub) {
    std::vector<char> keep(s.loops.size());
    for (std::size_t i = 0; i < s.loops.size(); ++i) {
        bool in = true;
        for (const Point& p : s.loops[i].vertices) {
            const int si = static_cast<int>(std::lround(p.x / sub.mesh)) - sub.origin_x;
            const int sj = static_cast<int>(std::lround(p.y / sub.mesh)) - sub.origin_y;
            if (!sub.inside(si, sj)) {
                in = false;
                break;
            }
        }
        keep[i] = in;
    }
    return split_sample(s, keep);
}

std::pair<LoopSoupSample, LoopSoupSample> restrict_to_annulus(const LoopSoupSample& s, const Annulus& a) {
    std::vector<char> keep(s.loops.size());
    for (std::size_t i = 0; i < s.loops.size(); ++i) keep[i] = loop_inside_annulus(s.loops[i], a);
    return split_sample(s, keep);
}

void save_sample(const LoopSoupSample& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_sample: cannot open " + path);
    nlohmann::json header = {{"type", "header"},
                             {"lambda", s.config.lambda},
                             {"L_max", s.config.L_max},
                             {"seed", s.config.seed},
                             {"loops", s.loops.size()}};
    out << header.dump() << '\n';
    for (std::size_t i = 0; i < s.loops.size(); ++i) {
        nlohmann::json rec = {{"type", "loop"},
                              {"id", s.meta[i].id},
                              {"root", {s.meta[i].root_i, s.meta[i].root_j}},
                              {"len", s.meta[i].length}};
        nlohmann::json verts = nlohmann::json::array();
        for (const Point& p : s.loops[i].vertices) verts.push_back({p.x, p.y});
        rec["vertices"] = std::move(verts);
        out << rec.dump() << '\n';
    }
}

LoopSoupSample load_sample(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_sample: cannot open " + path);
    LoopSoupSample s;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json rec = nlohmann::json::parse(line);
        const std::string type = rec.at("type");
        if (type == "header") {
            s.config.lambda = rec.at("lambda");
            s.config.L_max = rec.at("L_max");
            s.config.seed = rec.at("seed");
        } else if (type == "loop") {
            PolyLoop loop;
            loop.id = rec.at("id");
            for (const auto& v : rec.at("vertices")) loop.vertices.push_back({v[0], v[1]});
            LoopMeta meta{loop.id, rec.at("root")[0], rec.at("root")[1], rec.at("len"),
                          diameter(loop)};
            s.loops.push_back(std::move(loop));
            s.meta.push_back(meta);
        } else {
            throw std::runtime_error("load_sample: unknown record type " + type);
        }
    }
    return s;
}

} // namespace rwls
