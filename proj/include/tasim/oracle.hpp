#ifndef TASIM_ORACLE_HPP
#define TASIM_ORACLE_HPP

#include "tasim/closed_form.hpp"
#include "tasim/config.hpp"
#include "tasim/quadrature.hpp"

namespace tasim::oracle {

using QuadratureReport = tasim::quad::QuadResult;

// Direct product of regularized lower gammas; shares nothing with the
// expansion machinery.
double cdf_alpha_max_product(const ChannelConfig& cfg, double x);

// Order-statistics density: sum_j f_j prod_{l!=j} F_l.
double pdf_alpha_max_product(const ChannelConfig& cfg, double x);

// CDF of the conditional end-to-end SNR by quadrature of the defining
// integral over the shadowing density.
QuadratureReport quad_cdf_conditional(const ChannelConfig& cfg, int r, double x,
                                      double tol = 1e-9);

// Selection probability by quadrature of the order-statistics integral.
QuadratureReport quad_selection_probability(const ChannelConfig& cfg, int r,
                                            double tol = 1e-10);

// MGF by quadrature of s * int e^{-sx} F(x) dx with F itself from quadrature.
QuadratureReport quad_mgf(const ChannelConfig& cfg, double s, double tol = 1e-7);

// SEP by quadrature with the endpoint singularity removed via x = t^2.
QuadratureReport quad_sep(const ChannelConfig& cfg, const closed_form::Modulation& mod,
                          double tol = 1e-7);

// Normative p-th moment: independence factorization with E[alpha_max^p]
// evaluated by quadrature.
QuadratureReport moment_factorized(const ChannelConfig& cfg, int p, double tol = 1e-10);

} // namespace tasim::oracle

#endif
