#pragma once
#include <cstdint>

namespace rwls {

// Counter-based deterministic stream: output depends only on (seed, stream, counter),
// so per-site streams are independent of processing order.
struct Stream {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::uint64_t counter = 0;

    Stream() = default;
    Stream(std::uint64_t seed_, std::uint64_t stream_) : seed(seed_), stream(stream_) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() {
        std::uint64_t h = mix(seed ^ 0x2545f4914f6cdd1dULL);
        h = mix(h ^ stream);
        h = mix(h ^ counter++);
        return h;
    }

    // Uniform in (0,1); never returns 0 or 1 exactly.
    double u01() {
        return (static_cast<double>(next() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    // Poisson via inversion-by-products; chunked so large means stay stable.
    int poisson(double mean) {
        int k = 0;
        while (mean > 20.0) {
            k += poisson_small(20.0);
            mean -= 20.0;
        }
        return k + poisson_small(mean);
    }

  private:
    int poisson_small(double mean);
};

} // namespace rwls
