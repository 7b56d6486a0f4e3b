#ifndef TASIM_QUADRATURE_HPP
#define TASIM_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <functional>

namespace tasim::quad {

struct QuadResult {
    double value = 0.0;
    double abs_err_est = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

// Adaptive Gauss-Kronrod 7-15 on a finite interval.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int max_depth = 40);

// Semi-infinite [0, inf) via the u = scale * t/(1-t) substitution; `scale`
// should be the characteristic argument of the integrand so the initial
// panels see its mass.
QuadResult integrate_semi_inf(const std::function<double(double)>& f, double abs_tol,
                              double rel_tol, int max_depth = 40, double scale = 1.0);

} // namespace tasim::quad

#endif
