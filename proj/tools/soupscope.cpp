// soupscope: sample random-walk loop soups and run the measurement suite.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rwls/bounds.hpp"
#include "rwls/clusters.hpp"
#include "rwls/conformal.hpp"
#include "rwls/harness.hpp"
#include "rwls/lamination.hpp"
#include "rwls/soup.hpp"

using nlohmann::json;
using namespace rwls;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitViolation = 4;

json config_echo(const RunConfig& cfg) {
    json j{{"domain", cfg.domain}, {"mesh", cfg.mesh},     {"seed", cfg.seed},
           {"replicas", cfg.replicas}, {"n_max", cfg.n_max}, {"statistic", cfg.statistic},
           {"L_max", cfg.L_max},   {"truncation", cfg.truncation}};
    if (cfg.has_kappa) j["kappa"] = cfg.kappa;
    else j["lambda"] = cfg.lambda;
    return j;
}

Annulus target_annulus(const RunConfig& cfg) {
    if (!(cfg.target_r > 0.0 && cfg.target_R > cfg.target_r))
        throw std::invalid_argument("config: need 0 < target_r < target_R");
    return {cfg.center, cfg.target_r, cfg.target_R};
}

SoupSampler make_sampler(const RunConfig& cfg) {
    return SoupSampler(domain_from_spec(cfg.domain, cfg.mesh), resolve_L_max(cfg), cfg.mass_cache);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

int cmd_sample(const std::string& config_path, std::uint64_t seed, bool seed_set,
               const std::string& out_path) {
    RunConfig cfg = load_config(config_path);
    if (seed_set) cfg.seed = seed;
    const SoupSampler sampler = make_sampler(cfg);
    LoopSoupSample s = sampler.sample(resolve_lambda(cfg), cfg.seed);
    save_sample(s, out_path);
    std::printf("sampled %zu loops (domain %s, mesh %g, L_max %d) -> %s\n", s.loops.size(),
                cfg.domain.c_str(), cfg.mesh, s.config.L_max, out_path.c_str());
    return kExitOk;
}

int cmd_tails(const std::string& config_path) {
    const RunConfig cfg = load_config(config_path);
    const SoupSampler sampler = make_sampler(cfg);
    ExperimentSpec spec;
    spec.lambda = resolve_lambda(cfg);
    spec.seed = cfg.seed;
    spec.replicas = cfg.replicas;
    spec.n_max = cfg.n_max;
    spec.target = target_annulus(cfg);
    spec.stat = statistic_from_string(cfg.statistic);
    const TailEstimate t = run_tail_experiment(sampler, spec);

    std::ostringstream csv;
    csv << "# config: " << config_echo(cfg).dump() << "\n";
    write_tail_csv(t, csv);
    if (!cfg.out_csv.empty()) open_out(cfg.out_csv) << csv.str();
    else std::cout << csv.str();
    if (!cfg.out_json.empty()) {
        json j{{"config", config_echo(cfg)},
               {"replicas", t.replicas},
               {"count", t.count},
               {"p_hat", t.p_hat},
               {"ci_lo", t.ci_lo},
               {"ci_hi", t.ci_hi},
               {"ratio", t.ratio},
               {"convexity_violation", t.convexity_violation}};
        open_out(cfg.out_json) << j.dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_verify(const std::string& config_path) {
    const RunConfig cfg = load_config(config_path);
    if (cfg.radii.size() != 4) throw std::invalid_argument("config: verify needs radii [r,rp,Rp,R]");
    if (!(cfg.a > 0.0)) throw std::invalid_argument("config: verify needs a > 0");
    const Annulus outer{cfg.center, cfg.radii[0], cfg.radii[3]};
    const Annulus middle{cfg.center, cfg.radii[1], cfg.radii[2]};
    const SoupSampler sampler = make_sampler(cfg);
    const double lambda = resolve_lambda(cfg);
    long failures = 0;
    json reports = json::array();
    for (int rep = 0; rep < cfg.replicas; ++rep) {
        const LoopSoupSample s = sampler.sample(lambda, cfg.seed + static_cast<std::uint64_t>(rep));
        const VerifyReport report = verify_sample(s, cfg.mesh, outer, middle, cfg.a);
        json lines = json::array();
        for (const CheckLine& l : report.lines) {
            lines.push_back({{"name", l.name}, {"lhs", l.lhs}, {"rhs", l.rhs}, {"pass", l.pass}});
            if (!l.pass) {
                ++failures;
                std::printf("replica %d: FAIL %s (lhs %ld, rhs %ld)\n", rep, l.name.c_str(), l.lhs,
                            l.rhs);
            }
        }
        reports.push_back({{"replica", rep}, {"all_pass", report.all_pass}, {"lines", lines}});
    }
    if (!cfg.out_json.empty())
        open_out(cfg.out_json) << json{{"config", config_echo(cfg)}, {"failures", failures},
                                       {"reports", reports}}
                                      .dump(2)
                               << "\n";
    std::printf("verify: %d replicas, %ld failed checks\n", cfg.replicas, failures);
    return failures == 0 ? kExitOk : kExitViolation;
}

int cmd_fomin(int n, double theta1, double theta2, int search_iters, std::uint64_t seed) {
    if (n < 1 || !(theta1 > 0.0) || !(theta2 > 0.0) || theta1 + theta2 >= M_PI)
        throw std::invalid_argument("fomin: need n >= 1, theta1, theta2 > 0, theta1 + theta2 < pi");
    std::printf("n,value,bound,ratio\n");
    Stream rng(seed, 0);
    for (int m = 1; m <= n; ++m) {
        double worst = 0.0;
        for (int it = 0; it < search_iters; ++it) {
            std::vector<double> x(m), y(m);
            for (int i = 0; i < m; ++i) {
                x[i] = theta1 * (2.0 * rng.u01() - 1.0);
                y[i] = M_PI + theta2 * (2.0 * rng.u01() - 1.0);
            }
            std::sort(x.begin(), x.end());
            std::sort(y.begin(), y.end());
            worst = std::max(worst, std::fabs(fomin_det_factored(x, y)));
        }
        const double bound = std::exp(log_u_n_bound(m, theta1, theta2));
        std::printf("%d,%.8g,%.8g,%.8g\n", m, worst, bound, worst / bound);
    }
    return kExitOk;
}

int cmd_recursion(double s, double q, double c, double eps, double K, int N) {
    const RecursionResult res = iterate_recursion(s, c, q, eps, K, 1.0, N);
    std::printf("n,value,bound,ratio\n");
    for (int m = 1; m <= N; ++m)
        std::printf("%d,%.8g,%.8g,%.8g\n", m, res.f[m], std::pow(s, m), res.ratio[m]);
    std::printf("# bounded: %s\n", res.bounded ? "yes" : "no");
    return res.bounded ? kExitOk : kExitSolver;
}

Quad load_quad(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open quad file: " + path);
    json j;
    in >> j;
    Quad quad;
    for (const auto& p : j.at("boundary")) quad.boundary.push_back({p.at(0), p.at(1)});
    const auto& arcs = j.at("arcs");
    if (arcs.size() != 4) throw std::invalid_argument("quad: need exactly four arcs");
    for (int k = 0; k < 4; ++k) quad.arcs[k] = {arcs[k].at(0), arcs[k].at(1)};
    return quad;
}

int cmd_modulus(const std::string& quad_path, double mesh, const std::string& cover_out) {
    const Quad quad = load_quad(quad_path);
    const ModulusResult res = discrete_modulus(quad, mesh);
    std::printf("modulus %.8g energy %.8g residual %.3g iterations %d nodes %d\n", res.modulus,
                res.energy, res.residual, res.iterations, res.nodes);
    const PinchResult pinch = pinch_annulus(quad, mesh);
    std::printf("pinch annulus center (%.6g, %.6g) radii (%.6g, %.6g)\n", pinch.annulus.center.x,
                pinch.annulus.center.y, pinch.annulus.inner_r, pinch.annulus.outer_r);
    if (!cover_out.empty()) {
        const QuadCover cover = quad_annuli_cover(quad, mesh);
        json annuli = json::array();
        for (const Annulus& a : cover.annuli)
            annuli.push_back(
                {{"center", {a.center.x, a.center.y}}, {"inner_r", a.inner_r}, {"outer_r", a.outer_r}});
        open_out(cover_out) << json{{"K", cover.K}, {"annuli", annuli},
                                    {"sub_moduli", cover.sub_moduli}}
                                   .dump(2)
                            << "\n";
        std::printf("cover K %d -> %s\n", cover.K, cover_out.c_str());
    }
    return kExitOk;
}

PunctureSet load_punctures(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open punctures file: " + path);
    json j;
    in >> j;
    PunctureSet ps;
    for (const auto& p : j.at("punctures")) ps.punctures.push_back({p.at(0), p.at(1)});
    return ps;
}

int cmd_lamination(const std::string& loops_path, const std::string& punctures_path,
                   const std::string& out_path) {
    const LoopSoupSample s = load_sample(loops_path);
    const PunctureSet ps = load_punctures(punctures_path);
    const Lamination lam = extract_lamination(s.loops, ps);
    const ComplexityBound cb = complexity_bound(s.loops, ps);
    json j{{"kept", lam.kept},
           {"enclosed", lam.enclosed},
           {"per_annulus", cb.per_annulus},
           {"raw_intersections", cb.raw_intersections},
           {"bound", cb.bound}};
    if (!out_path.empty()) open_out(out_path) << j.dump(2) << "\n";
    else std::cout << j.dump(2) << "\n";
    if (cb.raw_intersections > cb.bound) {
        std::fprintf(stderr, "lamination: intersection bound violated\n");
        return kExitSolver;
    }
    return kExitOk;
}

int cmd_probe_tube(const std::string& config_path) {
    const RunConfig cfg = load_config(config_path);
    if (cfg.widths.empty()) throw std::invalid_argument("config: probe-tube needs widths");
    const SoupSampler sampler = make_sampler(cfg);
    const Annulus band = target_annulus(cfg);
    const std::vector<TubeResult> res =
        narrow_tube_probe(sampler, band, cfg.widths, resolve_lambda(cfg), cfg.replicas, cfg.seed);
    std::ostringstream csv;
    csv << "# config: " << config_echo(cfg).dump() << "\n";
    csv << "width,hits,replicas,p_hat,ci_lo,ci_hi\n";
    char buf[256];
    for (const TubeResult& r : res) {
        std::snprintf(buf, sizeof buf, "%.6g,%ld,%ld,%.6g,%.6g,%.6g\n", r.width, r.hits, r.replicas,
                      r.p_hat, r.ci_lo, r.ci_hi);
        csv << buf;
    }
    if (!cfg.out_csv.empty()) open_out(cfg.out_csv) << csv.str();
    else std::cout << csv.str();
    return kExitOk;
}

int cmd_render(const std::string& sample_path, const std::string& config_path,
               const std::string& out_path) {
    const LoopSoupSample s = load_sample(sample_path);
    SvgScene scene;
    double mesh = 1.0;
    if (!config_path.empty()) {
        const RunConfig cfg = load_config(config_path);
        mesh = cfg.mesh;
        if (cfg.target_r > 0.0) {
            scene.add_circle(cfg.center, cfg.target_r, "#c02020", 0.05);
            scene.add_circle(cfg.center, cfg.target_R, "#c02020", 0.05);
        }
        for (double r : cfg.radii) scene.add_circle(cfg.center, r, "#2040c0", 0.05);
    }
    const ClusterSet cs = build_clusters(s.loops, mesh);
    for (const PolyLoop& b : extract_boundaries(cs)) scene.add_loop(b, "#999999", 0.08);
    for (const PolyLoop& l : s.loops) scene.add_loop(l, "#202020", 0.03);
    write_svg(scene, out_path);
    std::printf("rendered %zu loops, %zu clusters -> %s\n", s.loops.size(), cs.members.size(),
                out_path.c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"loop-soup sampling and annulus-statistics lab"};
    app.require_subcommand(1);

    std::string config_path, out_path, quad_path, loops_path, punctures_path, cover_out, sample_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int n = 4, search_iters = 200, N = 40;
    double theta1 = 0.4, theta2 = 0.4, mesh = 0.05;
    double rs = 0.5, rq = 0.25, rc = 1.0, reps = 0.1, rK = 1.0;

    auto* c_sample = app.add_subcommand("sample", "draw one soup sample and save it");
    c_sample->add_option("--config", config_path)->required();
    c_sample->add_option("--seed", seed)->each([&](const std::string&) { seed_set = true; });
    c_sample->add_option("--out", out_path)->required();

    auto* c_tails = app.add_subcommand("tails", "Monte Carlo tail estimates of an annulus statistic");
    c_tails->add_option("--config", config_path)->required();

    auto* c_verify = app.add_subcommand("verify", "run the inequality battery on sampled soups");
    c_verify->add_option("--config", config_path)->required();

    auto* c_fomin = app.add_subcommand("fomin", "crossing determinant values against the n-point bound");
    c_fomin->add_option("--n", n);
    c_fomin->add_option("--theta1", theta1);
    c_fomin->add_option("--theta2", theta2);
    c_fomin->add_option("--search-iters", search_iters);
    c_fomin->add_option("--seed", seed);

    auto* c_rec = app.add_subcommand("recursion", "iterate the crossing recursion and report boundedness");
    c_rec->add_option("--s", rs);
    c_rec->add_option("--q", rq);
    c_rec->add_option("--c", rc);
    c_rec->add_option("--eps", reps);
    c_rec->add_option("--K", rK);
    c_rec->add_option("--N", N);

    auto* c_mod = app.add_subcommand("modulus", "discrete extremal length of a quad");
    c_mod->add_option("--quad", quad_path)->required();
    c_mod->add_option("--mesh", mesh);
    c_mod->add_option("--cover-out", cover_out);

    auto* c_lam = app.add_subcommand("lamination", "lamination extraction and complexity bound");
    c_lam->add_option("--loops", loops_path)->required();
    c_lam->add_option("--punctures", punctures_path)->required();
    c_lam->add_option("--out", out_path);

    auto* c_tube = app.add_subcommand("probe-tube", "connection probabilities in narrow tubes");
    c_tube->add_option("--config", config_path)->required();

    auto* c_render = app.add_subcommand("render", "deterministic SVG of a saved sample");
    c_render->add_option("--sample", sample_path)->required();
    c_render->add_option("--config", config_path);
    c_render->add_option("--out", out_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_sample->parsed()) return cmd_sample(config_path, seed, seed_set, out_path);
        if (c_tails->parsed()) return cmd_tails(config_path);
        if (c_verify->parsed()) return cmd_verify(config_path);
        if (c_fomin->parsed()) return cmd_fomin(n, theta1, theta2, search_iters, seed);
        if (c_rec->parsed()) return cmd_recursion(rs, rq, rc, reps, rK, N);
        if (c_mod->parsed()) return cmd_modulus(quad_path, mesh, cover_out);
        if (c_lam->parsed()) return cmd_lamination(loops_path, punctures_path, out_path);
        if (c_tube->parsed()) return cmd_probe_tube(config_path);
        if (c_render->parsed()) return cmd_render(sample_path, config_path, out_path);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    }
    return kExitConfig;
}
