#ifndef TASIM_ASYMPTOTICS_HPP
#define TASIM_ASYMPTOTICS_HPP

#include "tasim/closed_form.hpp"
#include "tasim/config.hpp"

#include <string>

namespace tasim::asymptotics {

enum class Regime { alpha_dominant, balanced, beta_dominant };

struct AsymptoticProfile {
    double d_alpha = 0.0;  // sum of shadowing shapes
    double d_beta = 0.0;   // smallest fading shape
    double d = 0.0;        // diversity order, min of the two
    double delta_d = 0.0;  // d_alpha - d_beta
    Regime regime = Regime::balanced;
    double zeta = 0.0;
    double log_z_l = 0.0;  // log of the Z_L product
    double p_beta = 0.0;   // selection probability of the weakest-fading antenna(s)
    std::string warning;   // non-empty in the balanced regime
};

// G_d = min(sum m_alpha, min m_beta).
double diversity_order(const ChannelConfig& cfg);

// The high-SNR density coefficient: f(x) ~ zeta x^{d-1} / gamma_bar^d.
// `eval_point` only matters in the balanced regime, whose printed coefficient
// retains the evaluation variable inside a logarithm.
AsymptoticProfile zeta_coefficient(const ChannelConfig& cfg, const AsymptoticConfig& asym,
                                   double eval_point = 1.0);

// P_out ~ (zeta/d) (gamma_th/gamma_bar)^d.
double asymptotic_outage(const ChannelConfig& cfg, const AsymptoticConfig& asym, double gamma_th,
                         double eval_point = 1.0);

// P_s ~ 2^{d-1} a zeta Gamma(d+1/2) / (d sqrt(pi)) (2 b gamma_bar)^{-d}.
double asymptotic_sep(const ChannelConfig& cfg, const AsymptoticConfig& asym,
                      const closed_form::Modulation& mod, double eval_point = 1.0);

// G_a with (G_a gamma_bar)^{-d} == asymptotic_sep, exactly.
double array_gain(const ChannelConfig& cfg, const AsymptoticConfig& asym,
                  const closed_form::Modulation& mod, double eval_point = 1.0);

} // namespace tasim::asymptotics

#endif
