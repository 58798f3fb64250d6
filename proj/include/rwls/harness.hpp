#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rwls/clusters.hpp"
#include "rwls/geometry.hpp"
#include "rwls/soup.hpp"

namespace rwls {

enum class Statistic { comp, clus, cross_simple, total_cross };
Statistic statistic_from_string(const std::string& s);
std::string to_string(Statistic s);

// Evaluate one statistic of a sample against an annulus.
long evaluate_statistic(const LoopSoupSample& sample, double mesh, const Annulus& target,
                        Statistic stat);

struct WilsonCI {
    double lo = 0.0, hi = 0.0;
};
WilsonCI wilson_interval(long hits, long n); // 95%
double rule_of_three(long n);                // upper bound when hits == 0

struct ExperimentSpec {
    double lambda = 1.0;
    std::uint64_t seed = 0;
    int replicas = 0;
    int n_max = 0;
    Annulus target;
    Statistic stat = Statistic::comp;
};

// Tail estimates count[n] = #replicas with statistic >= n, n = 0..n_max.
struct TailEstimate {
    long replicas = 0;
    std::vector<long> count;
    std::vector<double> p_hat, ci_lo, ci_hi;
    std::vector<double> ratio;                    // p_hat[n+1] / p_hat[n]
    std::vector<std::uint8_t> convexity_violation; // CI-robust flags at interior n
};

TailEstimate run_tail_experiment(const SoupSampler& sampler, const ExperimentSpec& spec);
// Combine counts of two runs over the same spec (replica-disjoint seeds).
TailEstimate merge_tails(const TailEstimate& a, const TailEstimate& b);
void finalize_tail(TailEstimate& t);
void write_tail_csv(const TailEstimate& t, std::ostream& out);

struct VerifyReport {
    std::vector<CheckLine> lines;
    bool all_pass = true;
};
// Run the full inequality battery on one sample: decomposition and union
// bounds through the nested annuli (outer strictly contains middle), the
// small-loop bound with diameter cut a, boundary/component identities,
// monotonicity, and crossing-chain witnesses.
VerifyReport verify_sample(const LoopSoupSample& sample, double mesh, const Annulus& outer,
                           const Annulus& middle, double a);

// Connection probability across a thin band of the annulus above the real
// axis: tube(w) = {r < |z - c| < R, 0 < Im z < w}. A replica counts when some
// cluster of tube-confined loops spans from within one mesh step of the inner
// circle to within one step of the outer one. Widths share replicas, so the
// estimates are monotone in w by construction.
struct TubeResult {
    double width = 0.0;
    long hits = 0;
    long replicas = 0;
    double p_hat = 0.0, ci_lo = 0.0, ci_hi = 0.0;
};
std::vector<TubeResult> narrow_tube_probe(const SoupSampler& sampler, const Annulus& band,
                                          const std::vector<double>& widths, double lambda,
                                          int replicas, std::uint64_t seed);

// Deterministic SVG output: elements are emitted in insertion order with fixed
// numeric formatting.
struct SvgScene {
    struct Path {
        std::vector<Point> points;
        bool closed = false;
        std::string stroke;
        double width = 0.1;
        std::string fill = "none";
    };
    struct Circle {
        Point center;
        double r = 0.0;
        std::string stroke;
        double width = 0.1;
    };
    std::vector<Path> paths;
    std::vector<Circle> circles;

    void add_loop(const PolyLoop& loop, const std::string& stroke, double width = 0.1);
    void add_polyline(const std::vector<Point>& pts, const std::string& stroke, double width = 0.1);
    void add_circle(Point center, double r, const std::string& stroke, double width = 0.1);
};
void write_svg(const SvgScene& scene, const std::string& path);

// Harness configuration, parsed strictly: unknown keys are errors.
struct RunConfig {
    std::string domain = "halfplane-strip 64x64";
    double mesh = 1.0;
    double lambda = 1.0;
    bool has_kappa = false;
    double kappa = 0.0;
    int L_max = 0;             // 0: derive from truncation target
    double truncation = 1e-3;  // used when L_max == 0
    std::uint64_t seed = 1;
    int replicas = 100;
    int n_max = 4;
    std::string statistic = "comp";
    Point center{0.0, 0.0};
    std::vector<double> radii;        // r < rp < Rp < R for verification runs
    double target_r = 0.0, target_R = 0.0;
    double a = 0.0;                   // diameter cut
    std::vector<double> widths;       // tube probe
    std::string out_csv, out_json, out_svg, sample_path, mass_cache;
};
RunConfig load_config(const std::string& path);
GridDomain domain_from_spec(const std::string& spec, double mesh);
double resolve_lambda(const RunConfig& cfg);
int resolve_L_max(const RunConfig& cfg);

} // namespace rwls
