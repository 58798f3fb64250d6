#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rwls/geometry.hpp"
#include "rwls/rng.hpp"

namespace rwls {

// Finite subset of the square lattice (mesh * Z^2) given by an occupancy mask.
// Site (i, j) sits at ((origin_x + i) * mesh, (origin_y + j) * mesh).
struct GridDomain {
    double mesh = 1.0;
    int width = 0;
    int height = 0;
    int origin_x = 0;
    int origin_y = 0;
    std::vector<std::uint8_t> mask;

    int index(int i, int j) const { return j * width + i; }
    bool inside(int i, int j) const {
        return i >= 0 && i < width && j >= 0 && j < height && mask[index(i, j)] != 0;
    }
    Point site_point(int i, int j) const {
        return {(origin_x + i) * mesh, (origin_y + j) * mesh};
    }
    int site_count() const;

    static GridDomain rect(int w, int h, double mesh = 1.0);
    // Rectangle sitting on the real axis: rows j = 0..h-1 model the first h
    // lattice rows of the upper half plane.
    static GridDomain halfplane_strip(int w, int h, double mesh = 1.0);
    static GridDomain annulus_shape(double inner_r, double outer_r, double mesh = 1.0);

    static GridDomain from_text(std::istream& in);
    void to_text(std::ostream& out) const;
    static GridDomain load(const std::string& path);
};

// Killed simple random walk kernel q_k(y, root) for one root, all k = 0..max_len,
// stored on the bounding box that the walk can reach.
struct KernelSlice {
    int root_i = 0, root_j = 0;
    int max_len = 0;
    int x0 = 0, y0 = 0, w = 0, h = 0;           // sub-box of the domain grid
    std::vector<std::vector<double>> layer;      // layer[k][local index]
    double at(int k, int i, int j) const {
        if (i < x0 || i >= x0 + w || j < y0 || j >= y0 + h) return 0.0;
        return layer[k][(j - y0) * w + (i - x0)];
    }
};

KernelSlice build_kernel(const GridDomain& dom, int root_i, int root_j, int max_len);

// Per-site total loop mass sum_{2n <= L_max} q_2n(x, x) / (2n) together with the
// cumulative length weights used to sample a rooted loop length.
struct LoopMassTable {
    int L_max = 0;
    double truncation_bound = 0.0; // full-plane bound on the discarded tail at one site
    std::vector<double> mass;                      // per site
    std::vector<std::vector<double>> length_cdf;   // per site, cumulative over n = 1..L_max/2
};

LoopMassTable loop_mass(const GridDomain& dom, int L_max);

// Full-plane tail sum_{2n > L} p_2n(0,0) / (2n) of the per-site loop measure.
double full_plane_return_tail(int L);
// Smallest even L with full_plane_return_tail(L) < target.
int choose_L_max(double target);

// Sample a rooted loop of the given even length as a random walk bridge.
PolyLoop sample_bridge(const GridDomain& dom, const KernelSlice& kernel, int len, Stream& rng);

// Mass tables are expensive on large domains; cache keyed by domain + L_max.
bool load_mass_cache(const std::string& path, const GridDomain& dom, int L_max, LoopMassTable& out);
void save_mass_cache(const std::string& path, const GridDomain& dom, int L_max, const LoopMassTable& table);

} // namespace rwls
