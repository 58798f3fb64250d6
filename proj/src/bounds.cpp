#include "rwls/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace rwls {

double fomin_entry(double xj, double yj, double yl) {
    const double denom = 1.0 - std::cos(xj - yl);
    if (denom <= 0.0) throw std::invalid_argument("fomin_entry: coincident angles");
    return (1.0 - std::cos(xj - yj)) / denom;
}

std::vector<std::vector<double>> fomin_matrix(const std::vector<double>& x,
                                              const std::vector<double>& y) {
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("fomin_matrix: need equal nonempty angle lists");
    const std::size_t n = x.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) m[j][l] = fomin_entry(x[j], y[j], y[l]);
    return m;
}

double det(std::vector<std::vector<double>> m) {
    const std::size_t n = m.size();
    double sign = 1.0, result = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
        if (m[pivot][col] == 0.0) return 0.0;
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            sign = -sign;
        }
        result *= m[col][col];
        for (std::size_t row = col + 1; row < n; ++row) {
            const double factor = m[row][col] / m[col][col];
            for (std::size_t k = col; k < n; ++k) m[row][k] -= factor * m[col][k];
        }
    }
    return sign * result;
}

double fomin_det_factored(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> cauchy(n, std::vector<double>(n, 0.0));
    double prefactor = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        prefactor *= 1.0 - std::cos(x[j] - y[j]);
        for (std::size_t l = 0; l < n; ++l) cauchy[j][l] = 1.0 / (1.0 - std::cos(x[j] - y[l]));
    }
    return prefactor * det(std::move(cauchy));
}

double log_u_n_bound(int n, double theta1, double theta2) {
    if (n < 1) throw std::invalid_argument("log_u_n_bound: n must be positive");
    if (!(theta1 > 0.0 && theta2 > 0.0 && theta1 + theta2 < M_PI))
        throw std::invalid_argument("log_u_n_bound: need 0 < theta1, theta2 with theta1+theta2 < pi");
    const double base = 4.0 * M_PI / std::pow(1.0 + std::cos(theta1 + theta2), 2.0);
    return (n - 1) * std::log(base) - 0.5 * std::lgamma(n + 1.0);
}

double log_v_n(double q, int n) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("log_v_n: q must lie in (0,1)");
    if (n < 0) throw std::invalid_argument("log_v_n: n must be nonnegative");
    return n * std::log(q) - (n + 1) * std::log1p(-q);
}

double v_n_series(double q, int n, int terms) {
    // sum_{k=n}^{n+terms} q^k C(k, n), accumulated through the term ratio
    // q^(k+1) C(k+1,n) = q^k C(k,n) * q (k+1)/(k+1-n).
    double term = std::pow(q, n); // k = n: C(n,n) = 1
    double sum = term;
    for (int k = n; k < n + terms; ++k) {
        term *= q * (k + 1.0) / (k + 1.0 - n);
        sum += term;
    }
    return sum;
}

CampbellTail campbell_tail(double mu, double eps, double p, int n) {
    if (!(eps > 0.0)) throw std::invalid_argument("campbell_tail: eps must be positive");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("campbell_tail: p must lie in (0,1)");
    CampbellTail out;
    out.log_value = mu / (1.0 - std::exp(-eps)) + (0.5 * n - 1.0) * std::log(p) + n * eps;
    out.decays = 0.5 * std::log(p) + eps < 0.0;
    return out;
}

RecursionResult iterate_recursion(double s, double c, double q, double eps, double K, double f1,
                                  int n_max) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("iterate_recursion: s must lie in (0,1)");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("iterate_recursion: q must lie in (0,1)");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("iterate_recursion: eps must lie in (0,1)");
    if (n_max < 2) throw std::invalid_argument("iterate_recursion: n_max too small");
    RecursionResult out;
    out.f.assign(n_max + 1, 0.0);
    out.ratio.assign(n_max + 1, 0.0);
    out.f[1] = f1;
    out.ratio[1] = f1 / s;
    double s_pow = s, s2_pow = s * s, q_pow = q;
    for (int n = 1; n < n_max; ++n) {
        const int back = static_cast<int>(std::ceil((1.0 - eps) * n));
        out.f[n + 1] = 0.5 * s * out.f[n] + c * q_pow * out.f[std::max(1, back)] + K * s2_pow;
        s_pow *= s;
        s2_pow *= s * s;
        q_pow *= q;
        out.ratio[n + 1] = out.f[n + 1] / s_pow;
    }
    bool finite = true;
    double best = 0.0;
    int best_at = 1;
    for (int n = 1; n <= n_max; ++n) {
        if (!std::isfinite(out.ratio[n])) finite = false;
        if (out.ratio[n] > best) {
            best = out.ratio[n];
            best_at = n;
        }
    }
    out.bounded = finite && (best_at <= n_max - std::max(10, n_max / 10) ||
                             out.ratio[n_max] <= out.ratio[std::max(1, n_max / 2)]);
    return out;
}

MuEstimate estimate_mu(const SoupSampler& sampler, const Annulus& a, double lambda, int replicas,
                       std::uint64_t seed) {
    if (replicas < 2) throw std::invalid_argument("estimate_mu: need at least 2 replicas");
    double sum = 0.0, sumsq = 0.0;
    for (int rep = 0; rep < replicas; ++rep) {
        const LoopSoupSample s = sampler.sample(lambda, seed + static_cast<std::uint64_t>(rep));
        long crossers = 0;
        for (const PolyLoop& l : s.loops) crossers += loop_crosses_annulus(l, a);
        const double v = static_cast<double>(crossers) / lambda;
        sum += v;
        sumsq += v * v;
    }
    MuEstimate out;
    out.replicas = replicas;
    out.mean = sum / replicas;
    const double var = std::max(0.0, (sumsq - sum * sum / replicas) / (replicas - 1));
    const double half = 1.959963984540054 * std::sqrt(var / replicas);
    out.ci_lo = out.mean - half;
    out.ci_hi = out.mean + half;
    return out;
}

} // namespace rwls
