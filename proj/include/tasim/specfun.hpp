#ifndef TASIM_SPECFUN_HPP
#define TASIM_SPECFUN_HPP

#include <cstdint>

namespace tasim::specfun {

struct SpecFunResult {
    double value = 0.0;
    bool converged = false;
    int terms_used = 0;
};

// log|Gamma(x)| plus the sign of Gamma(x). Valid for any non-pole x.
struct LogGamma {
    double log_abs = 0.0;
    int sign = 1;
};

// Gamma(x), x must not be a non-positive integer.
double gamma_fn(double x);

// log Gamma(x) for x > 0.
double log_gamma(double x);

// Signed log-Gamma for any non-pole real x (reflection for x < 0).
LogGamma log_gamma_signed(double x);

// Regularized lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a), a > 0, x >= 0.
double reg_lower_gamma(double a, double x);

// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x).
double reg_upper_gamma(double a, double x);

// Modified Bessel function of the second kind, real order, z > 0.
double bessel_k(double nu, double z);

// e^z K_nu(z); usable where K itself underflows.
double bessel_k_scaled(double nu, double z);

// log K_nu(z); robust against both under- and overflow of K.
double log_bessel_k(double nu, double z);

// Gaussian Q-function Q(x) = P(N(0,1) > x).
double gaussian_q(double x);

// log U(a,b,z) for a > 0, z > 0 (Tricomi confluent hypergeometric; U > 0 there).
// a == 0 is accepted and gives U = 1.
SpecFunResult log_hyperg_u(double a, double b, double z);

// Whittaker W_{a,b}(z), z > 0, restricted to |b| - a + 1/2 >= 0 (all uses here).
SpecFunResult whittaker_w(double a, double b, double z);

// log(e^{z/2} W_{a,b}(z)); the scaled form every closed-form term consumes.
SpecFunResult log_whittaker_w_scaled(double a, double b, double z);

} // namespace tasim::specfun

#endif
