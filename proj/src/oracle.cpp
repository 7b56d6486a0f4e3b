#include "tasim/oracle.hpp"
#include "tasim/errors.hpp"
#include "tasim/specfun.hpp"

#include <cmath>
#include <vector>

namespace tasim::oracle {

namespace sf = tasim::specfun;

namespace {

double snr_scale(const ChannelConfig& cfg) {
    double m = 0.0;
    for (int ell = 0; ell < cfg.num_links(); ++ell) {
        m = std::max(m, cfg.mean_branch_snr(ell));
    }
    return m;
}

} // namespace

double cdf_alpha_max_product(const ChannelConfig& cfg, double x) {
    if (x <= 0.0) return 0.0;
    double p = 1.0;
    for (int ell = 0; ell < cfg.num_links(); ++ell) {
        const double rate = cfg.m_alpha(ell) / cfg.mean_branch_snr(ell);
        p *= sf::reg_lower_gamma(cfg.m_alpha(ell), x * rate);
    }
    return p;
}

namespace {

double gamma_pdf(double x, double shape, double rate) {
    if (x <= 0.0) return 0.0;
    return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
                    std::lgamma(shape));
}

} // namespace

double pdf_alpha_max_product(const ChannelConfig& cfg, double x) {
    if (x <= 0.0) return 0.0;
    const int L = cfg.num_links();
    std::vector<double> cdfs(L);
    for (int ell = 0; ell < L; ++ell) {
        const double rate = cfg.m_alpha(ell) / cfg.mean_branch_snr(ell);
        cdfs[ell] = sf::reg_lower_gamma(cfg.m_alpha(ell), x * rate);
    }
    double sum = 0.0;
    for (int j = 0; j < L; ++j) {
        const double rate = cfg.m_alpha(j) / cfg.mean_branch_snr(j);
        double term = gamma_pdf(x, cfg.m_alpha(j), rate);
        for (int ell = 0; ell < L; ++ell) {
            if (ell != j) term *= cdfs[ell];
        }
        sum += term;
    }
    return sum;
}

QuadratureReport quad_cdf_conditional(const ChannelConfig& cfg, int r, double x, double tol) {
    if (r < 0 || r >= cfg.num_links()) throw DomainError("quad_cdf_conditional: bad index");
    if (x < 0.0) throw DomainError("quad_cdf_conditional: x must be >= 0");
    QuadratureReport rep;
    if (x == 0.0) {
        rep.converged = true;
        return rep;
    }
    const double mb = cfg.m_beta(r);
    auto integrand = [&](double u) {
        if (u <= 0.0) return 0.0;
        return sf::reg_lower_gamma(mb, x * mb / u) * pdf_alpha_max_product(cfg, u);
    };
    // The integrand carries two scales: a spike near u ~ x, where the inner
    // CDF saturates at 1 against the thin lower tail of alpha_max, and the
    // bulk at u ~ gamma_tilde. At high SNR the spike dominates the value yet
    // sits far below the bulk scale, so integrate the two regions separately,
    // each against its own magnitude.
    const double scale = snr_scale(cfg);
    const double cut = std::min(16.0 * x, scale);
    auto mapped = [&](double t) {
        const double omt = 1.0 - t;
        const double u = cut + scale * t / omt;
        return integrand(u) * scale / (omt * omt);
    };
    QuadratureReport tail = quad::integrate(mapped, 0.0, 1.0 - 1e-14, 0.0, tol, 24);
    // Anchor the head's absolute cutoff to the tail magnitude so a vanishing
    // head cannot drive unbounded refinement against pure roundoff.
    const double head_abs = 1e-3 * tol * (std::fabs(tail.value) + 1e-300);
    QuadratureReport head = quad::integrate(integrand, 0.0, cut, head_abs, tol, 24);
    rep.value = head.value + tail.value;
    rep.abs_err_est = head.abs_err_est + tail.abs_err_est;
    rep.subdivisions = head.subdivisions + tail.subdivisions;
    rep.converged = head.converged && tail.converged;
    return rep;
}

QuadratureReport quad_selection_probability(const ChannelConfig& cfg, int r, double tol) {
    if (r < 0 || r >= cfg.num_links()) throw DomainError("quad_selection_probability: bad index");
    QuadratureReport rep;
    if (cfg.num_links() == 1) {
        rep.value = 1.0;
        rep.converged = true;
        return rep;
    }
    const double rate_r = cfg.m_alpha(r) / cfg.mean_branch_snr(r);
    auto integrand = [&](double x) {
        if (x <= 0.0) return 0.0;
        double p = gamma_pdf(x, cfg.m_alpha(r), rate_r);
        for (int ell = 0; ell < cfg.num_links(); ++ell) {
            if (ell == r) continue;
            const double rate = cfg.m_alpha(ell) / cfg.mean_branch_snr(ell);
            p *= sf::reg_lower_gamma(cfg.m_alpha(ell), x * rate);
        }
        return p;
    };
    return quad::integrate_semi_inf(integrand, tol, tol, 40, snr_scale(cfg));
}

namespace {

// F_gamma_end by the oracle route only: quadrature CDFs averaged with
// quadrature selection probabilities.
struct EndCdf {
    const ChannelConfig& cfg;
    std::vector<double> pr;
    double inner_tol;

    explicit EndCdf(const ChannelConfig& c, double tol) : cfg(c), inner_tol(tol) {
        for (int r = 0; r < cfg.num_links(); ++r) {
            pr.push_back(quad_selection_probability(cfg, r, 1e-11).value);
        }
    }
    double operator()(double x) const {
        if (x <= 0.0) return 0.0;
        double f = 0.0;
        for (int r = 0; r < cfg.num_links(); ++r) {
            f += pr[r] * quad_cdf_conditional(cfg, r, x, inner_tol).value;
        }
        return f;
    }
};

} // namespace

QuadratureReport quad_mgf(const ChannelConfig& cfg, double s, double tol) {
    if (s <= 0.0) throw DomainError("quad_mgf: s must be positive");
    EndCdf fend(cfg, tol * 1e-2);
    auto integrand = [&](double x) { return s * std::exp(-s * x) * fend(x); };
    return quad::integrate_semi_inf(integrand, tol, tol, 24, 1.0 / s);
}

QuadratureReport quad_sep(const ChannelConfig& cfg, const closed_form::Modulation& mod,
                          double tol) {
    EndCdf fend(cfg, tol * 1e-2);
    // x = t^2 removes the x^{-1/2} endpoint singularity.
    const double c = mod.a * std::sqrt(mod.b) / std::sqrt(M_PI);
    auto integrand = [&](double t) { return c * std::exp(-mod.b * t * t) * fend(t * t); };
    return quad::integrate_semi_inf(integrand, tol, tol, 24, 1.0 / std::sqrt(mod.b));
}

QuadratureReport moment_factorized(const ChannelConfig& cfg, int p, double tol) {
    if (p < 1) throw DomainError("moment_factorized: order must be >= 1");
    auto integrand = [&](double u) {
        return u <= 0.0 ? 0.0 : std::pow(u, p) * pdf_alpha_max_product(cfg, u);
    };
    QuadratureReport ea = quad::integrate_semi_inf(integrand, tol, tol, 40, snr_scale(cfg));
    double v = 0.0;
    for (int r = 0; r < cfg.num_links(); ++r) {
        const double mb = cfg.m_beta(r);
        const double pr = quad_selection_probability(cfg, r, 1e-11).value;
        const double eb = std::exp(std::lgamma(mb + p) - std::lgamma(mb) - p * std::log(mb));
        v += pr * ea.value * eb;
    }
    QuadratureReport rep = ea;
    rep.value = v;
    return rep;
}

} // namespace tasim::oracle
