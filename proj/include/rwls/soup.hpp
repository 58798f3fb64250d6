#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "rwls/geometry.hpp"
#include "rwls/lattice.hpp"

namespace rwls {

// Intensity of the loop soup whose cluster boundaries have the given kappa,
// valid for kappa in (8/3, 4].
double kappa_to_lambda(double kappa);

struct SoupConfig {
    double lambda = 1.0;
    int L_max = 2;
    std::uint64_t seed = 0;
};

struct LoopMeta {
    std::uint64_t id = 0;
    int root_i = 0, root_j = 0;
    int length = 0;
    double diam = 0.0;
};

struct LoopSoupSample {
    SoupConfig config;
    std::vector<PolyLoop> loops;
    std::vector<LoopMeta> meta;
};

// Owns the domain and its mass table so repeated samples share the expensive
// precomputation. cache_path, if non-empty, persists the table across runs.
struct SoupSampler {
    GridDomain dom;
    LoopMassTable table;

    SoupSampler(GridDomain domain, int L_max, const std::string& cache_path = "");
    LoopSoupSample sample(double lambda, std::uint64_t seed) const;
    double total_mass() const;
};

LoopSoupSample sample_soup(const GridDomain& dom, const SoupConfig& cfg);

// Split by diameter: loops with diam < a, and the rest.
std::pair<LoopSoupSample, LoopSoupSample> filter_by_diameter(const LoopSoupSample& s, double a);
// Split by containment in a sub-domain: loops with every vertex inside sub, and the rest.
std::pair<LoopSoupSample, LoopSoupSample> restrict_to(const LoopSoupSample& s, const GridDomain& sub);
// Split by containment in the open annulus.
std::pair<LoopSoupSample, LoopSoupSample> restrict_to_annulus(const LoopSoupSample& s, const Annulus& a);

// JSON-lines persistence: one loop record per line.
void save_sample(const LoopSoupSample& s, const std::string& path);
LoopSoupSample load_sample(const std::string& path);

} // namespace rwls
