#include "rwls/rng.hpp"

#include <cmath>

namespace rwls {

int Stream::poisson_small(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= u01();
    } while (p > limit);
    return k - 1;
}

} // namespace rwls
