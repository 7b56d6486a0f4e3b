// Acceptance suite: one criterion per check, one PASS/FAIL line per criterion.
// Exit code is the number of failed criteria.

#include "tasim/asymptotics.hpp"
#include "tasim/closed_form.hpp"
#include "tasim/config.hpp"
#include "tasim/expansion.hpp"
#include "tasim/oracle.hpp"
#include "tasim/rng.hpp"
#include "tasim/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace tasim;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& title, const std::function<bool(std::string&)>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %2d. %-38s %s(%.1f s)\n", ok ? "PASS" : "FAIL", number, title.c_str(),
                detail.empty() ? "" : (detail + " ").c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

ChannelConfig iid_cfg(int L, int ma, double mb, double snr_db) {
    return ChannelConfig(L, std::vector<int>(L, ma), std::vector<double>(L, mb),
                         std::vector<double>(L, 1.0), snr_db);
}

ChannelConfig random_cfg(RngStream& rng, int max_links, int max_shape) {
    int L = 1 + static_cast<int>(rng.uniform() * max_links);
    L = std::min(L, max_links);
    std::vector<int> ma;
    std::vector<double> mb, om;
    for (int i = 0; i < L; ++i) {
        ma.push_back(1 + static_cast<int>(rng.uniform() * max_shape));
        mb.push_back(0.5 + 3.0 * rng.uniform());
        // gamma_tilde log-uniform in [0.1, 100] at snr_db = 0
        om.push_back(std::pow(10.0, -1.0 + 3.0 * rng.uniform()));
    }
    return ChannelConfig(L, std::move(ma), std::move(mb), std::move(om), 0.0);
}

// Closed-form outage sweep crossing: smallest grid SNR with P_out <= target.
double snr_at_outage(const ChannelConfig& cfg, double target, double gamma_th) {
    for (double snr = 0.0; snr <= 60.0; snr += 0.1) {
        if (closed_form::outage(cfg.at_snr_db(snr), gamma_th) <= target) return snr;
    }
    return std::nan("");
}

double fitted_sep_slope(const ChannelConfig& cfg, const closed_form::Modulation& mod,
                        double lo_db, double hi_db) {
    auto lo = oracle::quad_sep(cfg.at_snr_db(lo_db), mod, 1e-9);
    auto hi = oracle::quad_sep(cfg.at_snr_db(hi_db), mod, 1e-9);
    if (!lo.converged || !hi.converged) return std::nan("");
    return -(std::log10(hi.value) - std::log10(lo.value)) / ((hi_db - lo_db) / 10.0);
}

bool c1_expansion_oracle(std::string& detail) {
    RngStream rng(20260826);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        auto cfg = random_cfg(rng, 4, 4);
        for (int i = 0; i < 50; ++i) {
            double x = std::pow(10.0, -2.0 + 5.0 * i / 49.0);
            worst = std::max(worst, std::fabs(expansion::cdf_alpha_max(cfg, x) -
                                              oracle::cdf_alpha_max_product(cfg, x)));
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max abs err %.1e", worst);
    detail = buf;
    return worst <= 1e-10;
}

bool c2_cdf_closed_vs_quad(std::string& detail) {
    RngStream rng(10007);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        auto cfg = random_cfg(rng, 3, 3);
        int r = static_cast<int>(rng.uniform() * cfg.num_links());
        for (int i = 0; i < 10; ++i) {
            double x = std::pow(10.0, -2.0 + 4.0 * i / 9.0);
            double closed = closed_form::cdf_conditional(cfg, r, x);
            auto quad = oracle::quad_cdf_conditional(cfg, r, x, 1e-11);
            if (!quad.converged) {
                detail = "quadrature failed to converge";
                return false;
            }
            if (closed < 1e-12 && quad.value < 1e-12) continue;
            worst = std::max(worst, std::fabs(closed / quad.value - 1.0));
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max rel err %.1e", worst);
    detail = buf;
    return worst <= 1e-6;
}

bool c3_selection_probabilities(std::string& detail) {
    // i.i.d. -> 1/L
    for (int L : {2, 3, 4}) {
        auto p = expansion::selection_probabilities(iid_cfg(L, 2, 1.0, 10.0));
        for (double v : p)
            if (std::fabs(v - 1.0 / L) > 1e-9) return false;
    }
    // random i.n.d.: sum to 1 and match quadrature
    RngStream rng(30011);
    double worst_sum = 0.0, worst_quad = 0.0;
    for (int rep = 0; rep < 15; ++rep) {
        auto cfg = random_cfg(rng, 4, 3);
        auto p = expansion::selection_probabilities(cfg);
        double s = 0.0;
        for (int r = 0; r < cfg.num_links(); ++r) {
            s += p[r];
            auto q = oracle::quad_selection_probability(cfg, r, 1e-11);
            worst_quad = std::max(worst_quad, std::fabs(p[r] - q.value));
        }
        worst_sum = std::max(worst_sum, std::fabs(s - 1.0));
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "sum err %.1e, quad err %.1e", worst_sum, worst_quad);
    detail = buf;
    return worst_sum <= 1e-9 && worst_quad <= 1e-8;
}

bool c4_snr_gains(std::string& detail) {
    const double target = 1e-4, gth = 1.0;
    double base = snr_at_outage(iid_cfg(1, 1, 1.0, 0.0), target, gth);
    const double expected[] = {9.0, 11.0, 12.0};
    char buf[96];
    std::string got;
    bool ok = true;
    for (int L = 2; L <= 4; ++L) {
        double snr = snr_at_outage(iid_cfg(L, 1, 1.0, 0.0), target, gth);
        double gain = base - snr;
        std::snprintf(buf, sizeof buf, "%sL=%d: %.1f dB", L > 2 ? ", " : "", L, gain);
        got += buf;
        if (std::fabs(gain - expected[L - 2]) > 0.5) ok = false;
    }
    detail = got;
    return ok;
}

bool c5_iid_slopes(std::string& detail) {
    auto mod = closed_form::Modulation::make(closed_form::Modulation::Family::bpsk);
    std::string got;
    bool ok = true;
    for (int L = 2; L <= 4; ++L) {
        auto cfg = iid_cfg(L, 1, 4.0, 0.0);
        double d = static_cast<double>(L);
        double slope = fitted_sep_slope(cfg, mod, 45.0, 55.0);
        // The asymptote is C(d) * zeta * (2 b gamma_bar)^{-d}: its power-law
        // exponent is d by construction.  Divide out the coefficient, which in
        // the balanced regime retains a log(gamma_bar) dependence of its own.
        auto a45 = cfg.at_snr_db(45.0);
        auto a55 = cfg.at_snr_db(55.0);
        double pa45 = asymptotics::asymptotic_sep(a45, AsymptoticConfig::from_config(a45), mod);
        double pa55 = asymptotics::asymptotic_sep(a55, AsymptoticConfig::from_config(a55), mod);
        double z45 = asymptotics::zeta_coefficient(a45, AsymptoticConfig::from_config(a45)).zeta;
        double z55 = asymptotics::zeta_coefficient(a55, AsymptoticConfig::from_config(a55)).zeta;
        double aslope = -(std::log10(pa55 / z55) - std::log10(pa45 / z45));
        char buf[64];
        std::snprintf(buf, sizeof buf, "%sL=%d: %.3f", L > 2 ? ", " : "", L, slope);
        got += buf;
        if (std::fabs(slope - d) / d > 0.10) ok = false;
        if (std::fabs(aslope - d) > 1e-9) ok = false;
    }
    detail = got;
    return ok;
}

bool c6_diversity_law(std::string& detail) {
    // Ten i.n.d. configs spanning all three regimes of Delta_d.
    std::vector<ChannelConfig> cfgs = {
        // alpha-dominant (d = min m_beta)
        ChannelConfig(2, {1, 2}, {1.0, 2.5}, {1.0, 2.0}, 0.0),
        ChannelConfig(3, {1, 1, 2}, {0.5, 1.5, 2.0}, {0.5, 1.0, 2.0}, 0.0),
        ChannelConfig(2, {2, 2}, {1.5, 3.0}, {1.0, 0.7}, 0.0),
        ChannelConfig(2, {3, 1}, {2.0, 2.5}, {1.5, 1.0}, 0.0),
        // beta-dominant (d = sum m_alpha)
        ChannelConfig(2, {1, 1}, {3.0, 4.0}, {1.0, 2.0}, 0.0),
        ChannelConfig(1, {2}, {3.5}, {1.0}, 0.0),
        ChannelConfig(2, {1, 1}, {2.5, 3.5}, {0.6, 1.4}, 0.0),
        ChannelConfig(3, {1, 1, 1}, {4.0, 3.5, 3.75}, {1.0, 1.5, 0.8}, 0.0),
        // balanced (d_alpha = d_beta)
        ChannelConfig(2, {1, 1}, {2.0, 2.5}, {1.0, 2.0}, 0.0),
        ChannelConfig(1, {2}, {2.0}, {1.0}, 0.0),
    };
    auto mod = closed_form::Modulation::make(closed_form::Modulation::Family::bpsk);
    double worst = 0.0;
    for (const auto& cfg : cfgs) {
        double d = asymptotics::diversity_order(cfg);
        double slope = fitted_sep_slope(cfg, mod, 50.0, 70.0);
        worst = std::max(worst, std::fabs(slope - d) / d);
        if (std::fabs(slope - d) / d > 0.10) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "slope %.3f vs d %.2f", slope, d);
            detail = buf;
            return false;
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst slope err %.1f%%", 100.0 * worst);
    detail = buf;
    return true;
}

bool c7_monte_carlo(std::string& detail) {
    // The closed-form decomposition treats the selected antenna index as
    // independent of the selected shadowing gain.  That is exact when the
    // shadowing shapes m_alpha are identical across links (the first three
    // scenarios) and a small systematic approximation otherwise (the last).
    struct Scenario {
        ChannelConfig cfg;
        const char* name;
        bool exact;
    };
    std::vector<Scenario> scenarios = {
        {iid_cfg(2, 1, 1.0, 0.0), "iid exp/exp", true},
        {iid_cfg(2, 1, 4.0, 0.0), "iid deep-fading", true},
        {ChannelConfig(3, {1, 1, 1}, {2.0, 3.0, 1.0}, {1.0, 1.0, 1.0}, 0.0),
         "i.n.d. fading shapes", true},
        {ChannelConfig(2, {3, 2}, {2.0, 3.0}, {1.0, 1.0}, 0.0),
         "i.n.d. shadowing shapes", false},
    };
    auto mod = closed_form::Modulation::make(closed_form::Modulation::Family::bpsk);
    const double gth = 1.0;
    double worst_z = 0.0;       // over scenarios with exact closed forms
    int fail_exact = 0;         // z > 3 where the closed form is exact
    int fail_approx = 0;        // z > 3 attributable to the decomposition
    std::uint64_t seed = 52101;
    for (const auto& scen : scenarios) {
        for (double snr = 0.0; snr <= 40.0; snr += 5.0) {
            auto cfg = scen.cfg.at_snr_db(snr);
            SimOptions opts;
            opts.partitions = 8;
            opts.seed = seed++;

            opts.trials = 10000000;
            auto oe = simulator::estimate_outage(cfg, opts, gth);
            double p = closed_form::outage(cfg, gth);
            double se = std::sqrt(p * (1.0 - p) / static_cast<double>(opts.trials));
            double z = se > 0.0 ? std::fabs(oe.value - p) / se : 0.0;
            if (scen.exact) worst_z = std::max(worst_z, z);
            if (z > 3.0) (scen.exact ? fail_exact : fail_approx)++;

            opts.trials = 1000000;
            double ps = closed_form::sep(cfg, mod);
            // Below ~50 effective events the semi-analytic mean is dominated
            // by draws the trial budget cannot produce; no unbiased test is
            // possible there, so the point is out of resolution.
            if (ps * static_cast<double>(opts.trials) < 50.0) continue;
            auto es = simulator::estimate_sep(cfg, opts, mod);
            if (es.stderr_ > 0.0) {
                double zs = std::fabs(es.value - ps) / es.stderr_;
                if (scen.exact) worst_z = std::max(worst_z, zs);
                if (zs > 3.0) (scen.exact ? fail_exact : fail_approx)++;
            }
        }
    }
    char buf[192];
    if (fail_exact == 0 && fail_approx == 0) {
        std::snprintf(buf, sizeof buf, "worst |z| %.2f", worst_z);
    } else if (fail_exact == 0) {
        std::snprintf(buf, sizeof buf,
                      "exact scenarios pass (worst |z| %.2f); %d pts beyond 3 s.e. where the "
                      "closed-form index/gain independence assumption is approximate",
                      worst_z, fail_approx);
    } else {
        std::snprintf(buf, sizeof buf, "%d exact-scenario pts beyond 3 s.e. (worst |z| %.2f)",
                      fail_exact, worst_z);
    }
    detail = buf;
    return fail_exact == 0 && fail_approx == 0;
}

bool c8_mgf_moments(std::string& detail) {
    ChannelConfig cfg(2, {2, 3}, {1.5, 2.5}, {1.0, 1.5}, 10.0);
    if (std::fabs(closed_form::mgf(cfg, 0.0) - 1.0) > 1e-9) {
        detail = "M(0) != 1";
        return false;
    }
    for (double s : {0.1, 1.0, 10.0}) {
        auto q = oracle::quad_mgf(cfg, s, 1e-9);
        if (!q.converged || std::fabs(closed_form::mgf(cfg, s) / q.value - 1.0) > 1e-6) {
            detail = "MGF mismatch at s=" + std::to_string(s);
            return false;
        }
    }
    for (int p : {1, 2}) {
        auto q = oracle::moment_factorized(cfg, p, 1e-11);
        if (!q.converged || std::fabs(closed_form::moment(cfg, p) / q.value - 1.0) > 1e-8) {
            detail = "moment mismatch at p=" + std::to_string(p);
            return false;
        }
    }
    ChannelConfig single(1, {1}, {1.0}, {1.0}, 0.0);
    double af = closed_form::amount_of_fading(single);
    if (std::fabs(af - 3.0) > 1e-8) {
        detail = "single-branch AF != 3";
        return false;
    }
    return true;
}

bool c9_feedback_correlation(std::string& detail) {
    // (a) pe = 0 is bit-exact against the default error-free options.
    ChannelConfig cfg20 = iid_cfg(4, 1, 1.0, 20.0);
    auto mod = closed_form::Modulation::make(closed_form::Modulation::Family::bpsk);
    {
        SimOptions a, b;
        a.trials = b.trials = 200000;
        a.seed = b.seed = 606;
        b.pe = 0.0;
        if (simulator::estimate_sep(cfg20, a, mod).value !=
            simulator::estimate_sep(cfg20, b, mod).value) {
            detail = "pe=0 not bit-exact";
            return false;
        }
    }
    // (b) SEP strictly increases in pe.
    double prev = -1.0;
    for (double pe : {0.0, 1e-3, 1e-2, 1e-1}) {
        SimOptions opts;
        opts.trials = 10000000;
        opts.seed = 707;
        opts.partitions = 8;
        opts.pe = pe;
        double v = simulator::estimate_sep(cfg20, opts, mod).value;
        if (v <= prev) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "sep not increasing at pe=%g", pe);
            detail = buf;
            return false;
        }
        prev = v;
    }
    // (c) outage nondecreasing in rho; approaches the single-antenna value.
    ChannelConfig corr = iid_cfg(3, 2, 1.0, 10.0);
    ChannelConfig single(1, {2}, {1.0}, {1.0}, 10.0);
    double l1 = closed_form::outage(single, 1.0);
    prev = -1.0;
    double last = 0.0;
    for (double rho : {0.0, 0.5, 0.9, 0.99}) {
        SimOptions opts;
        opts.trials = 2000000;
        opts.seed = 808;
        opts.partitions = 8;
        opts.rho = rho;
        last = simulator::estimate_outage(corr, opts, 1.0).value;
        if (last < prev) {
            detail = "outage decreased in rho";
            return false;
        }
        prev = last;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "rho=0.99 vs L=1: %.1f%%", 100.0 * std::fabs(last / l1 - 1.0));
    detail = buf;
    return std::fabs(last / l1 - 1.0) <= 0.15;
}

bool c10_determinism(std::string& detail) {
    ChannelConfig cfg(2, {2, 3}, {1.5, 2.5}, {1.0, 1.5}, 10.0);
    SimOptions opts;
    opts.trials = 1000000;
    opts.seed = 909;
    opts.partitions = 4;
    auto a = simulator::estimate_outage(cfg, opts, 2.0);
    auto b = simulator::estimate_outage(cfg, opts, 2.0);
    if (a.value != b.value || a.stderr_ != b.stderr_) {
        detail = "repeat run not bit-identical";
        return false;
    }
    // Four single-partition runs, each on the sub-stream of partition p,
    // must merge to the 4-partition estimate.
    const double gth = 2.0;
    std::uint64_t per = opts.trials / 4, hits = 0;
    for (int p = 0; p < 4; ++p) {
        RngStream rng = RngStream::substream(opts.seed, static_cast<std::uint64_t>(p));
        for (std::uint64_t i = 0; i < per; ++i)
            if (simulator::draw_trial(cfg, opts, rng).snr < gth) ++hits;
    }
    double merged = static_cast<double>(hits) / static_cast<double>(opts.trials);
    if (merged != a.value) {
        detail = "partition merge mismatch";
        return false;
    }
    return true;
}

} // namespace

int main() {
    criterion(1, "expansion vs gamma-product oracle", c1_expansion_oracle);
    criterion(2, "CDF closed form vs quadrature", c2_cdf_closed_vs_quad);
    criterion(3, "selection probabilities", c3_selection_probabilities);
    criterion(4, "antenna selection SNR gains", c4_snr_gains);
    criterion(5, "iid diversity slopes", c5_iid_slopes);
    criterion(6, "diversity law on i.n.d. configs", c6_diversity_law);
    criterion(7, "Monte Carlo concordance", c7_monte_carlo);
    criterion(8, "MGF and moments", c8_mgf_moments);
    criterion(9, "feedback and correlation trends", c9_feedback_correlation);
    criterion(10, "simulation determinism", c10_determinism);
    std::printf("%d/10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
