#pragma once
#include <cstdint>
#include <vector>

#include "rwls/geometry.hpp"
#include "rwls/soup.hpp"

namespace rwls {

// Boundary-to-boundary crossing determinant machinery. Points x_j live on the
// arc (-theta1, theta1), points y_l on (pi - theta2, pi + theta2), as angles on
// the unit circle.
double fomin_entry(double xj, double yj, double yl); // (1-cos(xj-yj)) / (1-cos(xj-yl))
std::vector<std::vector<double>> fomin_matrix(const std::vector<double>& x,
                                              const std::vector<double>& y);
// Determinant via partial-pivot elimination.
double det(std::vector<std::vector<double>> m);
// Same determinant through the row factorization prod_j (1-cos(x_j-y_j)) * det[1/(1-cos(x_j-y_l))].
double fomin_det_factored(const std::vector<double>& x, const std::vector<double>& y);

// Log of the n-point determinant bound (4*pi / (1+cos(theta1+theta2))^2)^(n-1) / sqrt(n!).
double log_u_n_bound(int n, double theta1, double theta2);

// v_n = q^n / (1-q)^(n+1) in log space, plus the series partial sum
// sum_{k=n}^{n+terms} q^k C(k, n) it must match.
double log_v_n(double q, int n);
double v_n_series(double q, int n, int terms);

// Poissonian tail: log of exp(mu / (1 - e^-eps)) * p^(n/2 - 1) * e^(n eps);
// the bound decays in n exactly when sqrt(p) * e^eps < 1.
struct CampbellTail {
    double log_value = 0.0;
    bool decays = false;
};
CampbellTail campbell_tail(double mu, double eps, double p, int n);

// f(n+1) = (s/2) f(n) + c q^n f(ceil((1-eps) n)) + K s^(2n), reported as the
// normalized sequence f(n)/s^n. bounded is a numerical verdict: the sequence
// stays finite and its supremum is attained away from the truncation end.
struct RecursionResult {
    std::vector<double> f;     // f[n], index 1..n_max
    std::vector<double> ratio; // f[n]/s^n
    bool bounded = false;
};
RecursionResult iterate_recursion(double s, double c, double q, double eps, double K, double f1,
                                  int n_max);

// Monte Carlo estimate of the mean number of annulus-crossing loops per unit
// intensity, with a normal 95% confidence interval.
struct MuEstimate {
    double mean = 0.0, ci_lo = 0.0, ci_hi = 0.0;
    long replicas = 0;
};
MuEstimate estimate_mu(const SoupSampler& sampler, const Annulus& a, double lambda, int replicas,
                       std::uint64_t seed);

} // namespace rwls
