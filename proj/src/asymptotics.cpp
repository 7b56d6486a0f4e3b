#include "tasim/asymptotics.hpp"
#include "tasim/errors.hpp"
#include "tasim/expansion.hpp"
#include "tasim/specfun.hpp"

#include <cmath>

namespace tasim::asymptotics {

namespace sf = tasim::specfun;

namespace {

constexpr double kEulerPsi = 0.57721566490153286061; // Euler's constant
constexpr double kSqrtPi = 1.772453850905516027298167483341145183;

} // namespace

double diversity_order(const ChannelConfig& cfg) {
    double da = 0.0;
    double db = cfg.m_beta(0);
    for (int ell = 0; ell < cfg.num_links(); ++ell) {
        da += cfg.m_alpha(ell);
        db = std::min(db, cfg.m_beta(ell));
    }
    return std::min(da, db);
}

AsymptoticProfile zeta_coefficient(const ChannelConfig& cfg, const AsymptoticConfig& asym,
                                   double eval_point) {
    asym.validate(cfg);
    const int L = cfg.num_links();

    AsymptoticProfile prof;
    prof.d_beta = cfg.m_beta(0);
    for (int ell = 0; ell < L; ++ell) {
        prof.d_alpha += cfg.m_alpha(ell);
        prof.d_beta = std::min(prof.d_beta, cfg.m_beta(ell));
    }
    prof.d = std::min(prof.d_alpha, prof.d_beta);
    prof.delta_d = prof.d_alpha - prof.d_beta;
    prof.regime = prof.delta_d > 0   ? Regime::alpha_dominant
                  : prof.delta_d < 0 ? Regime::beta_dominant
                                     : Regime::balanced;

    double log_zl = 0.0;
    for (int ell = 0; ell < L; ++ell) {
        const double ma = cfg.m_alpha(ell);
        log_zl += ma * std::log(ma / asym.kappa[ell]) - sf::log_gamma(ma + 1.0);
    }
    prof.log_z_l = log_zl;

    // P_beta: selection probability of the weakest-fading antenna; ties share
    // the same dominant power law, so their probabilities add.
    const auto pr = expansion::selection_probabilities(cfg);
    for (int r = 0; r < L; ++r) {
        if (cfg.m_beta(r) <= prof.d_beta + 1e-12) prof.p_beta += pr[r];
    }

    const double zl = std::exp(log_zl);
    const double db = prof.d_beta;
    double zeta = 0.0;
    switch (prof.regime) {
        case Regime::alpha_dominant: {
            const double gd = sf::gamma_fn(prof.delta_d);
            for (int j = 0; j < L; ++j) {
                zeta += prof.p_beta * zl * gd * std::pow(asym.kappa[j], prof.delta_d) *
                        std::pow(db, db) /
                        (sf::gamma_fn(db) * std::pow(cfg.m_alpha(j), prof.delta_d - 1.0));
            }
            break;
        }
        case Regime::balanced: {
            if (!(eval_point > 0.0)) throw DomainError("zeta: eval_point must be positive");
            prof.warning =
                "balanced-regime (d_alpha == d_beta): printed coefficient depends on the "
                "evaluation point; only the power-law slope is meaningful";
            for (int j = 0; j < L; ++j) {
                const double gt = cfg.mean_branch_snr(j);
                zeta += cfg.m_alpha(j) * zl *
                        std::log(gt * kEulerPsi / (db * eval_point * cfg.m_alpha(j))) *
                        std::pow(db, prof.d_alpha) * prof.p_beta / sf::gamma_fn(db);
            }
            break;
        }
        case Regime::beta_dominant: {
            zeta = prof.p_beta * L * zl * sf::gamma_fn(-prof.delta_d) *
                   std::pow(db, prof.d_alpha) / sf::gamma_fn(db);
            break;
        }
    }
    prof.zeta = zeta;
    return prof;
}

double asymptotic_outage(const ChannelConfig& cfg, const AsymptoticConfig& asym, double gamma_th,
                         double eval_point) {
    if (gamma_th <= 0.0) throw DomainError("asymptotic_outage: threshold must be positive");
    const AsymptoticProfile p = zeta_coefficient(cfg, asym, eval_point);
    return (p.zeta / p.d) * std::pow(gamma_th / asym.gamma_bar, p.d);
}

double asymptotic_sep(const ChannelConfig& cfg, const AsymptoticConfig& asym,
                      const closed_form::Modulation& mod, double eval_point) {
    const AsymptoticProfile p = zeta_coefficient(cfg, asym, eval_point);
    const double d = p.d;
    return std::pow(2.0, d - 1.0) * mod.a * p.zeta * sf::gamma_fn(d + 0.5) / (d * kSqrtPi) *
           std::pow(2.0 * mod.b * asym.gamma_bar, -d);
}

double array_gain(const ChannelConfig& cfg, const AsymptoticConfig& asym,
                  const closed_form::Modulation& mod, double eval_point) {
    const AsymptoticProfile p = zeta_coefficient(cfg, asym, eval_point);
    const double d = p.d;
    const double c = std::pow(2.0, d - 1.0) * mod.a * p.zeta * sf::gamma_fn(d + 0.5) / (d * kSqrtPi);
    if (!(c > 0.0)) throw NumericalError("array_gain: non-positive asymptotic coefficient");
    return 2.0 * mod.b * std::pow(c, -1.0 / d);
}

} // namespace tasim::asymptotics
