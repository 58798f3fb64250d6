#include "rwls/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rwls {

Statistic statistic_from_string(const std::string& s) {
    if (s == "comp") return Statistic::comp;
    if (s == "clus") return Statistic::clus;
    if (s == "cross-simple") return Statistic::cross_simple;
    if (s == "total-cross") return Statistic::total_cross;
    throw std::invalid_argument("unknown statistic: " + s);
}

std::string to_string(Statistic s) {
    switch (s) {
        case Statistic::comp: return "comp";
        case Statistic::clus: return "clus";
        case Statistic::cross_simple: return "cross-simple";
        case Statistic::total_cross: return "total-cross";
    }
    return "?";
}

long evaluate_statistic(const LoopSoupSample& sample, double mesh, const Annulus& target,
                        Statistic stat) {
    if (stat == Statistic::total_cross) return total_single_crossings(sample.loops, target);
    const ClusterSet cs = build_clusters(sample.loops, mesh);
    switch (stat) {
        case Statistic::comp: return comp_number(cs, target);
        case Statistic::clus: return clus_number(cs, target);
        case Statistic::cross_simple:
            return cross_number_simple(extract_boundaries(cs), target, false);
        default: return 0;
    }
}

WilsonCI wilson_interval(long hits, long n) {
    if (n <= 0 || hits < 0 || hits > n) throw std::invalid_argument("wilson_interval: bad counts");
    const double z = 1.959963984540054, z2 = z * z;
    const double nn = static_cast<double>(n), k = static_cast<double>(hits);
    const double center = (k + z2 / 2.0) / (nn + z2);
    const double half = z * std::sqrt(k * (nn - k) / nn + z2 / 4.0) / (nn + z2);
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double rule_of_three(long n) {
    if (n <= 0) throw std::invalid_argument("rule_of_three: bad count");
    return 3.0 / static_cast<double>(n);
}

void finalize_tail(TailEstimate& t) {
    const std::size_t m = t.count.size();
    t.p_hat.assign(m, 0.0);
    t.ci_lo.assign(m, 0.0);
    t.ci_hi.assign(m, 0.0);
    t.ratio.assign(m, std::nan(""));
    t.convexity_violation.assign(m, 0);
    for (std::size_t n = 0; n < m; ++n) {
        t.p_hat[n] = static_cast<double>(t.count[n]) / t.replicas;
        const WilsonCI ci = wilson_interval(t.count[n], t.replicas);
        t.ci_lo[n] = ci.lo;
        t.ci_hi[n] = t.count[n] == 0 ? rule_of_three(t.replicas) : ci.hi;
    }
    for (std::size_t n = 0; n + 1 < m; ++n)
        if (t.p_hat[n] > 0.0) t.ratio[n] = t.p_hat[n + 1] / t.p_hat[n];
    for (std::size_t n = 1; n + 1 < m; ++n)
        if (t.ci_hi[n] * t.ci_hi[n] < t.ci_lo[n - 1] * t.ci_lo[n + 1]) t.convexity_violation[n] = 1;
}

TailEstimate run_tail_experiment(const SoupSampler& sampler, const ExperimentSpec& spec) {
    if (spec.replicas < 1 || spec.n_max < 1) throw std::invalid_argument("run_tail_experiment: bad spec");
    TailEstimate t;
    t.replicas = spec.replicas;
    t.count.assign(spec.n_max + 1, 0);
    for (int rep = 0; rep < spec.replicas; ++rep) {
        const LoopSoupSample s = sampler.sample(spec.lambda, spec.seed + static_cast<std::uint64_t>(rep));
        const long value = evaluate_statistic(s, sampler.dom.mesh, spec.target, spec.stat);
        for (long n = 0; n <= std::min<long>(value, spec.n_max); ++n) ++t.count[n];
    }
    finalize_tail(t);
    return t;
}

TailEstimate merge_tails(const TailEstimate& a, const TailEstimate& b) {
    if (a.count.size() != b.count.size()) throw std::invalid_argument("merge_tails: size mismatch");
    TailEstimate t;
    t.replicas = a.replicas + b.replicas;
    t.count.resize(a.count.size());
    for (std::size_t n = 0; n < t.count.size(); ++n) t.count[n] = a.count[n] + b.count[n];
    finalize_tail(t);
    return t;
}

void write_tail_csv(const TailEstimate& t, std::ostream& out) {
    out << "n,count,p_hat,ci_lo,ci_hi,ratio,logp\n";
    char buf[256];
    for (std::size_t n = 0; n < t.count.size(); ++n) {
        const double logp = t.p_hat[n] > 0.0 ? std::log(t.p_hat[n]) : std::nan("");
        std::snprintf(buf, sizeof buf, "%zu,%ld,%.6g,%.6g,%.6g,%.6g,%.6g\n", n, t.count[n],
                      t.p_hat[n], t.ci_lo[n], t.ci_hi[n], t.ratio[n], logp);
        out << buf;
    }
}

VerifyReport verify_sample(const LoopSoupSample& sample, double mesh, const Annulus& outer,
                           const Annulus& middle, double a) {
    if (!(outer.inner_r < middle.inner_r && middle.outer_r < outer.outer_r))
        throw std::invalid_argument("verify_sample: middle annulus must nest strictly inside outer");
    VerifyReport rep;
    auto add = [&rep](CheckLine line) {
        rep.all_pass = rep.all_pass && line.pass;
        rep.lines.push_back(std::move(line));
    };
    const auto [small, big] = filter_by_diameter(sample, a);

    add(check_component_decomposition(small.loops, big.loops, mesh, outer, middle));
    add(check_small_loop_clusters(small.loops, mesh, a, outer));
    add(check_cluster_union(small.loops, big.loops, mesh, outer, middle));
    add(check_cluster_union_degenerate(small.loops, big.loops, mesh, outer));

    const long t_all = total_single_crossings(sample.loops, outer);
    const long t_small = total_single_crossings(small.loops, outer);
    const long t_big = total_single_crossings(big.loops, outer);
    add({"crossing_total_additive", t_all, t_small + t_big, t_all == t_small + t_big});
    add({"crossing_total_monotone", t_small, t_all, t_small <= t_all});

    const ClusterSet cs = build_clusters(sample.loops, mesh);
    const long comp_outer = comp_number(cs, outer);
    const long clus_outer = clus_number(cs, outer);
    const long boundary_cross = cross_number_simple(extract_boundaries(cs), outer, false);
    add({"boundary_cross_twice_comp", boundary_cross, 2 * comp_outer,
         boundary_cross == 2 * comp_outer});
    add({"clus_at_most_comp", clus_outer, comp_outer, clus_outer <= comp_outer});

    const long comp_mid = comp_number(cs, middle);
    const long clus_mid = clus_number(cs, middle);
    const long t_mid = total_single_crossings(sample.loops, middle);
    add({"comp_annulus_monotone", comp_outer, comp_mid, comp_outer <= comp_mid});
    add({"clus_annulus_monotone", clus_outer, clus_mid, clus_outer <= clus_mid});
    add({"cross_annulus_monotone", t_all, t_mid, t_all <= t_mid});

    const bool witness = crossing_witnesses_exist(cs, outer);
    add({"crossing_component_witness", witness ? 1L : 0L, 1L, witness});
    return rep;
}

std::vector<TubeResult> narrow_tube_probe(const SoupSampler& sampler, const Annulus& band,
                                          const std::vector<double>& widths, double lambda,
                                          int replicas, std::uint64_t seed) {
    if (replicas < 1) throw std::invalid_argument("narrow_tube_probe: bad replicas");
    const double mesh = sampler.dom.mesh;
    std::vector<TubeResult> out(widths.size());
    for (std::size_t w = 0; w < widths.size(); ++w) out[w].width = widths[w];
    for (int rep = 0; rep < replicas; ++rep) {
        const LoopSoupSample s = sampler.sample(lambda, seed + static_cast<std::uint64_t>(rep));
        // Loops confined to the open band; reused across widths via max height.
        std::vector<std::pair<double, const PolyLoop*>> candidates;
        for (const PolyLoop& l : s.loops) {
            if (!loop_inside_annulus(l, band)) continue;
            double ymin = 1e300, ymax = -1e300;
            for (const Point& p : l.vertices) {
                ymin = std::min(ymin, p.y);
                ymax = std::max(ymax, p.y);
            }
            if (ymin <= 0.0) continue;
            candidates.emplace_back(ymax, &l);
        }
        for (std::size_t w = 0; w < widths.size(); ++w) {
            std::vector<PolyLoop> confined;
            for (const auto& [ymax, lp] : candidates)
                if (ymax < widths[w]) confined.push_back(*lp);
            bool spans = false;
            if (!confined.empty()) {
                const ClusterSet cs = build_clusters(confined, mesh);
                for (std::size_t c = 0; c < cs.members.size() && !spans; ++c) {
                    double lo = 1e300, hi = 0.0;
                    for (int li : cs.members[c]) {
                        lo = std::min(lo, loop_min_dist(cs.loops[li], band.center));
                        hi = std::max(hi, loop_max_dist(cs.loops[li], band.center));
                    }
                    spans = lo <= band.inner_r + mesh && hi >= band.outer_r - mesh;
                }
            }
            out[w].hits += spans;
        }
    }
    for (TubeResult& r : out) {
        r.replicas = replicas;
        r.p_hat = static_cast<double>(r.hits) / replicas;
        const WilsonCI ci = wilson_interval(r.hits, replicas);
        r.ci_lo = ci.lo;
        r.ci_hi = r.hits == 0 ? rule_of_three(replicas) : ci.hi;
    }
    return out;
}

void SvgScene::add_loop(const PolyLoop& loop, const std::string& stroke, double width) {
    paths.push_back({loop.vertices, true, stroke, width, "none"});
}
void SvgScene::add_polyline(const std::vector<Point>& pts, const std::string& stroke, double width) {
    paths.push_back({pts, false, stroke, width, "none"});
}
void SvgScene::add_circle(Point center, double r, const std::string& stroke, double width) {
    circles.push_back({center, r, stroke, width});
}

void write_svg(const SvgScene& scene, const std::string& path) {
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    auto grow = [&](double x, double y) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
    };
    for (const auto& p : scene.paths)
        for (const Point& q : p.points) grow(q.x, -q.y);
    for (const auto& c : scene.circles) {
        grow(c.center.x - c.r, -c.center.y - c.r);
        grow(c.center.x + c.r, -c.center.y + c.r);
    }
    if (x0 > x1) {
        x0 = y0 = 0.0;
        x1 = y1 = 1.0;
    }
    const double margin = 0.05 * std::max(x1 - x0, y1 - y0) + 1.0;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_svg: cannot open " + path);
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.4f %.4f %.4f %.4f\">\n",
                  x0 - margin, y0 - margin, (x1 - x0) + 2 * margin, (y1 - y0) + 2 * margin);
    out << buf;
    for (const auto& p : scene.paths) {
        out << "<path d=\"";
        for (std::size_t i = 0; i < p.points.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%c%.4f %.4f", i == 0 ? 'M' : 'L', p.points[i].x,
                          -p.points[i].y);
            out << buf;
        }
        if (p.closed) out << "Z";
        std::snprintf(buf, sizeof buf, "\" fill=\"%s\" stroke=\"%s\" stroke-width=\"%.4f\"/>\n",
                      p.fill.c_str(), p.stroke.c_str(), p.width);
        out << buf;
    }
    for (const auto& c : scene.circles) {
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.4f\" cy=\"%.4f\" r=\"%.4f\" fill=\"none\" stroke=\"%s\" "
                      "stroke-width=\"%.4f\"/>\n",
                      c.center.x, -c.center.y, c.r, c.stroke.c_str(), c.width);
        out << buf;
    }
    out << "</svg>\n";
}

GridDomain domain_from_spec(const std::string& spec, double mesh) {
    std::istringstream ss(spec);
    std::string kind;
    ss >> kind;
    if (kind == "rect" || kind == "halfplane-strip") {
        std::string dims;
        ss >> dims;
        const std::size_t x = dims.find('x');
        if (x == std::string::npos) throw std::invalid_argument("domain: expected WxH in " + spec);
        const int w = std::stoi(dims.substr(0, x)), h = std::stoi(dims.substr(x + 1));
        if (w < 1 || h < 1) throw std::invalid_argument("domain: bad dimensions in " + spec);
        return kind == "rect" ? GridDomain::rect(w, h, mesh) : GridDomain::halfplane_strip(w, h, mesh);
    }
    if (kind == "annulus") {
        double r = 0.0, R = 0.0;
        ss >> r >> R;
        return GridDomain::annulus_shape(r, R, mesh);
    }
    if (kind == "file") {
        std::string path;
        ss >> path;
        return GridDomain::load(path);
    }
    throw std::invalid_argument("domain: unknown kind in " + spec);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_config: cannot open " + path);
    nlohmann::json j;
    in >> j;
    if (!j.is_object()) throw std::invalid_argument("load_config: expected an object");
    RunConfig cfg;
    bool has_lambda = false;
    for (const auto& [key, value] : j.items()) {
        if (key == "domain") cfg.domain = value.get<std::string>();
        else if (key == "mesh") cfg.mesh = value.get<double>();
        else if (key == "lambda") { cfg.lambda = value.get<double>(); has_lambda = true; }
        else if (key == "kappa") { cfg.kappa = value.get<double>(); cfg.has_kappa = true; }
        else if (key == "L_max") cfg.L_max = value.get<int>();
        else if (key == "truncation") cfg.truncation = value.get<double>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "replicas") cfg.replicas = value.get<int>();
        else if (key == "n_max") cfg.n_max = value.get<int>();
        else if (key == "statistic") cfg.statistic = value.get<std::string>();
        else if (key == "center") { cfg.center = {value.at(0).get<double>(), value.at(1).get<double>()}; }
        else if (key == "radii") cfg.radii = value.get<std::vector<double>>();
        else if (key == "target_r") cfg.target_r = value.get<double>();
        else if (key == "target_R") cfg.target_R = value.get<double>();
        else if (key == "a") cfg.a = value.get<double>();
        else if (key == "widths") cfg.widths = value.get<std::vector<double>>();
        else if (key == "out_csv") cfg.out_csv = value.get<std::string>();
        else if (key == "out_json") cfg.out_json = value.get<std::string>();
        else if (key == "out_svg") cfg.out_svg = value.get<std::string>();
        else if (key == "sample_path") cfg.sample_path = value.get<std::string>();
        else if (key == "mass_cache") cfg.mass_cache = value.get<std::string>();
        else throw std::invalid_argument("load_config: unknown key: " + key);
    }
    if (has_lambda && cfg.has_kappa)
        throw std::invalid_argument("load_config: lambda and kappa are mutually exclusive");
    if (!cfg.radii.empty() && cfg.radii.size() != 4)
        throw std::invalid_argument("load_config: radii must have exactly four entries");
    return cfg;
}

double resolve_lambda(const RunConfig& cfg) {
    return cfg.has_kappa ? kappa_to_lambda(cfg.kappa) : cfg.lambda;
}

int resolve_L_max(const RunConfig& cfg) {
    return cfg.L_max > 0 ? cfg.L_max : choose_L_max(cfg.truncation);
}

} // namespace rwls
